#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chl/porous.hpp"
#include "chl/util.hpp"

#include <cmath>
#include <sstream>

using namespace chl;

namespace {

// Independent largest-free-subinterval evaluation for witness validation.
double brute_maxgap(const PorousSet& set, double x, double len) {
  double y = x + len;
  double cur = x, best = 0.0;
  for (const Interval& iv : set.intervals()) {
    if (iv.a >= y) break;
    if (iv.b <= x) continue;
    best = std::max(best, std::max(0.0, std::min(iv.a, y) - cur));
    cur = std::max(cur, iv.b);
  }
  best = std::max(best, y - std::min(cur, y));
  return best;
}

PorousSet random_union(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nk(3, 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int k = nk(rng);
  std::vector<double> pts;
  for (int i = 0; i < 2 * k; ++i) pts.push_back(unif(rng));
  std::sort(pts.begin(), pts.end());
  std::vector<Interval> ivs;
  for (int i = 0; i < k; ++i) {
    double a = pts[static_cast<std::size_t>(2 * i)];
    double b = pts[static_cast<std::size_t>(2 * i + 1)];
    if (b - a < 1e-4) continue;
    if (!ivs.empty() && a <= ivs.back().b + 1e-4) continue;
    ivs.push_back({a, b});
  }
  if (ivs.empty()) ivs.push_back({0.3, 0.4});
  return PorousSet(std::move(ivs));
}

// Largest porosity constant the set supports on the scale window.
double porosity_sup(const PorousSet& set, double a0, double a1) {
  double lo = 1e-4, hi = 0.999;
  if (!is_porous(set, lo, a0, a1).porous) return 0.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (is_porous(set, mid, a0, a1).porous ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("interval union validation and serialization") {
  CHECK_THROWS_AS(PorousSet({{0.2, 0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(PorousSet({{0.1, 0.3}, {0.2, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(PorousSet({{0.5, 0.6}, {0.1, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(PorousSet({{-0.1, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(PorousSet({{0.9, 1.2}}), std::invalid_argument);
  PorousSet s({{0.1, 0.25}, {0.5, 0.75}});
  CHECK(s.measure() == doctest::Approx(0.4).epsilon(1e-14));
  std::istringstream in(format_porous_set(s));
  PorousSet back = parse_porous_set(in);
  REQUIRE(back.intervals().size() == 2);
  CHECK(back.intervals()[1].b == 0.75);
}

TEST_CASE("porosity decision: trivial sets and parameter validation") {
  PorousSet empty;
  CHECK(is_porous(empty, 0.5, 0.01, 1.0).porous);
  PorousSet full({{0.0, 1.0}});
  PorosityVerdict v = is_porous(full, 0.1, 0.5, 1.0);
  CHECK(!v.porous);
  CHECK(brute_maxgap(full, v.witness_x, v.witness_len) < 0.1 * v.witness_len + 1e-9);
  CHECK_THROWS_AS(is_porous(full, 0.0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(is_porous(full, 1.0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(is_porous(full, 0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(is_porous(full, 0.5, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("porosity onset for a single block is sharp") {
  // For the block [0, 1/2], a window of length L has largest free piece
  // (L - 1/2)/2 at the centered worst position, so the nu = 0.2 threshold
  // sits exactly at L = 0.5/(1 - 2 nu) = 5/6.
  PorousSet block({{0.0, 0.5}});
  double threshold = 0.5 / 0.6;
  CHECK(is_porous(block, 0.2, threshold + 1e-6, 1.0).porous);
  PorosityVerdict v = is_porous(block, 0.2, threshold - 1e-6, 1.0);
  CHECK(!v.porous);
  CHECK(v.witness_len <= threshold);
  CHECK(brute_maxgap(block, v.witness_x, v.witness_len) < 0.2 * v.witness_len + 1e-9);
}

TEST_CASE("digit-restricted iterates") {
  PorousSet c1 = cantor_iterate(3, {0, 2}, 1);
  REQUIRE(c1.intervals().size() == 2);
  CHECK(c1.intervals()[0].a == 0.0);
  CHECK(c1.intervals()[0].b == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(c1.intervals()[1].a == doctest::Approx(2.0 / 3).epsilon(1e-15));
  for (int d = 1; d <= 5; ++d) {
    PorousSet cd = cantor_iterate(3, {0, 2}, d);
    CHECK(static_cast<int>(cd.intervals().size()) == (1 << d));
    CHECK(cd.measure() == doctest::Approx(std::pow(2.0 / 3.0, d)).epsilon(1e-12));
    for (const Interval& iv : cd.intervals()) {
      CHECK(iv.b - iv.a == doctest::Approx(std::pow(3.0, -d)).epsilon(1e-12));
    }
  }
  // Adjacent kept digits merge.
  PorousSet adj = cantor_iterate(3, {0, 1}, 1);
  REQUIRE(adj.intervals().size() == 1);
  CHECK(adj.intervals()[0].b == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(cantor_iterate(2, {0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cantor_iterate(3, {0, 1, 2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cantor_iterate(3, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cantor_iterate(3, {0, 2}, 0), std::invalid_argument);
}

TEST_CASE("depth-5 ternary iterate: porous only above the block-width scale") {
  // A window sitting exactly on one solid depth-5 block has no free
  // subinterval at all, so the scan must reject scale windows that reach
  // down to the block width; it accepts once scales start above
  // width/(1 - 2 nu).
  PorousSet c5 = cantor_iterate(3, {0, 2}, 5);
  double w = std::pow(3.0, -5);
  PorosityVerdict at_block_scale = is_porous(c5, 0.1, w, 1.0);
  CHECK(!at_block_scale.porous);
  CHECK(brute_maxgap(c5, at_block_scale.witness_x, at_block_scale.witness_len) <
        0.1 * at_block_scale.witness_len + 1e-9);
  PorosityVerdict oracle = porosity_grid_oracle(c5, 0.1, w, 1.0, 1e-4);
  CHECK(!oracle.porous);
  CHECK(is_porous(c5, 0.1, 1.25 * 1.01 * w, 1.0).porous);
  CHECK(porosity_grid_oracle(c5, 0.1, 1.25 * 1.01 * w, 1.0, 1e-4).porous);
}

TEST_CASE("scan agrees with the grid oracle on random unions") {
  auto rng = make_rng(51);
  for (int rep = 0; rep < 6; ++rep) {
    PorousSet s = random_union(rng);
    double rho = porosity_sup(s, 0.01, 0.3);
    if (rho < 1e-3) continue;
    double lo_nu = 0.5 * rho, hi_nu = std::min(0.95, 1.5 * rho);
    PorosityVerdict mine_lo = is_porous(s, lo_nu, 0.01, 0.3);
    PorosityVerdict oracle_lo = porosity_grid_oracle(s, lo_nu, 0.01, 0.3);
    CHECK(mine_lo.porous == oracle_lo.porous);
    PorosityVerdict mine_hi = is_porous(s, hi_nu, 0.01, 0.3);
    PorosityVerdict oracle_hi = porosity_grid_oracle(s, hi_nu, 0.01, 0.3);
    CHECK(mine_hi.porous == oracle_hi.porous);
    if (!mine_hi.porous) {
      CHECK(brute_maxgap(s, mine_hi.witness_x, mine_hi.witness_len) <
            hi_nu * mine_hi.witness_len + 1e-9);
    }
  }
}

TEST_CASE("gap construction: constants, frozen layout, certified porosity") {
  auto [set, nu] = gap_construction(1.0, 0.5, 1);
  CHECK(nu == doctest::Approx(std::exp(-2.0) * 0.5).epsilon(1e-15));
  REQUIRE(set.intervals().size() == 4);
  double want[4][2] = {{0.0, 0.0625}, {0.1875, 0.25}, {0.75, 0.8125}, {0.9375, 1.0}};
  for (int i = 0; i < 4; ++i) {
    CHECK(set.intervals()[static_cast<std::size_t>(i)].a ==
          doctest::Approx(want[i][0]).epsilon(1e-12));
    CHECK(set.intervals()[static_cast<std::size_t>(i)].b ==
          doctest::Approx(want[i][1]).epsilon(1e-12));
  }
  // The first-generation centered gap of relative size 1/2 survives.
  CHECK(set.intervals()[1].b == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(set.intervals()[2].a == doctest::Approx(0.75).epsilon(1e-12));

  struct Config {
    double T, delta;
    int depth;
  } configs[] = {{1.0, 0.5, 1}, {1.0, 0.3, 2}, {2.0, 0.7, 2}};
  for (const Config& cfg : configs) {
    auto [gs, gnu] = gap_construction(cfg.T, cfg.delta, cfg.depth);
    CHECK(gnu == doctest::Approx(std::exp(-2.0) * cfg.delta / cfg.T).epsilon(1e-15));
    CHECK(is_porous(gs, gnu, std::exp(-2.0 * cfg.depth), 1.0).porous);
  }
  CHECK_THROWS_AS(gap_construction(1.0, 0.5, 40), std::invalid_argument);
  CHECK_THROWS_AS(gap_construction(0.5, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_construction(1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("thickening") {
  PorousSet s({{0.5, 0.5 + 1e-9}});
  PorousSet t = thicken(s, 0.1);
  REQUIRE(t.intervals().size() == 1);
  CHECK(t.intervals()[0].a == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(t.intervals()[0].b == doctest::Approx(0.6 + 1e-9).epsilon(1e-12));
  PorousSet c2 = cantor_iterate(3, {0, 2}, 2);
  PorousSet same = thicken(c2, 0.0);
  REQUIRE(same.intervals().size() == c2.intervals().size());
  CHECK(same.intervals()[2].a == c2.intervals()[2].a);
  // Heavy thickening merges everything.
  CHECK(thicken(c2, 0.2).intervals().size() == 1);
  CHECK_THROWS_AS(thicken(c2, -0.1), std::invalid_argument);

  // Porosity degrades by at most a factor 3 once scales start at 3 alpha/nu.
  for (int depth : {1, 2, 3}) {
    auto [gs, gnu] = gap_construction(1.0, 0.5, depth);
    double a0 = std::exp(-2.0 * depth);
    double alpha = gnu * a0 / 3.0;
    PorousSet th = thicken(gs, alpha);
    CHECK(is_porous(th, gnu / 3.0, a0, 1.0).porous);
  }
}

TEST_CASE("coordinate-change images") {
  PorousSet c4 = cantor_iterate(3, {0, 2}, 4);
  DiffeoSpec ident{[](double x) { return x; }, 1.0, 1.0, 0.0};
  PorousSet same = diffeo_image(c4, ident);
  REQUIRE(same.intervals().size() == c4.intervals().size());
  CHECK(same.intervals()[5].a == c4.intervals()[5].a);

  DiffeoSpec doubling{[](double x) { return 2.0 * x; }, 2.0, 1.0, 0.0};
  PorousSet twice = diffeo_image(c4, doubling);
  CHECK(twice.intervals().back().b == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(twice.intervals()[3].a == doctest::Approx(2.0 * c4.intervals()[3].a).epsilon(1e-14));

  DiffeoSpec folded{[](double x) { return x * (1.0 - x); }, 1.0, 10.0, 2.0};
  CHECK_THROWS_AS(diffeo_image(c4, folded), std::invalid_argument);

  DiffeoSpec decreasing{[](double x) { return 1.0 - x; }, 1.0, 1.0, 0.0};
  PorousSet flipped = diffeo_image(c4, decreasing);
  CHECK(flipped.intervals().front().a == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(flipped.intervals().size() == c4.intervals().size());

  // Mild distortion: porosity degrades by at most a factor 2 with the
  // distortion-adjusted scale window.
  DiffeoSpec wobble{[](double x) { return x + 0.1 * std::sin(2.0 * M_PI * x) / (4.0 * M_PI); },
                    1.05, 1.0 / 0.95, 0.2};
  double c1 = 1.05 / 0.95;
  for (int depth : {1, 2}) {
    auto [gs, gnu] = gap_construction(1.0, 0.5, depth);
    PorousSet img = diffeo_image(gs, wobble);
    double a0 = std::exp(-2.0 * depth);
    CHECK(is_porous(img, gnu / 2.0, c1 * a0, 1.0 / c1).porous);
  }
}
