#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chl/symplectic.hpp"
#include "chl/util.hpp"

#include <cmath>

using namespace chl;

namespace {

CotangentPoint random_cotangent(int n, std::mt19937_64& rng, double tau) {
  return CotangentPoint{act(random_group(n, rng), base_point(n)), tau};
}

Eigen::VectorXd random_chart_offset(int n, std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd c(4 * n);
  for (int i = 0; i < c.size(); ++i) c(i) = unif(rng);
  return c * (radius / (c.norm() + std::abs(c(4 * n - 1))));
}

}  // namespace

TEST_CASE("chart maps zero to the anchor and the X direction to the flow") {
  auto rng = make_rng(31);
  CotangentPoint base = random_cotangent(2, rng, 1.3);
  ChartCoords zero{Eigen::VectorXd::Zero(7), 0.0};
  CotangentPoint back = chart_to_point(base, zero);
  CHECK((back.q.lift - base.q.lift).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.tau == base.tau);

  FrameIndex fi{2};
  ChartCoords along_x{Eigen::VectorXd::Zero(7), 0.0};
  along_x.s(fi.X()) = 0.37;
  CotangentPoint moved = chart_to_point(base, along_x);
  BundlePoint flowed = geodesic_flow(base.q, 0.37);
  CHECK((moved.q.lift - flowed.lift).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(moved.tau == base.tau);

  ChartCoords too_far{Eigen::VectorXd::Zero(7), 0.0};
  too_far.s(0) = 0.6;
  CHECK_THROWS_AS(chart_to_point(base, too_far), std::invalid_argument);
  ChartCoords bad_dim{Eigen::VectorXd::Zero(5), 0.0};
  CHECK_THROWS_AS(chart_to_point(base, bad_dim), std::invalid_argument);
}

TEST_CASE("chart round-trips") {
  auto rng = make_rng(32);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 10; ++rep) {
      CotangentPoint base = random_cotangent(n, rng, 0.8);
      Eigen::VectorXd c = random_chart_offset(n, rng, 0.1);
      ChartCoords cc{c.head(4 * n - 1), c(4 * n - 1)};
      CotangentPoint p = chart_to_point(base, cc);
      ChartCoords rec = point_to_chart(base, p);
      CHECK((rec.s - cc.s).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(std::abs(rec.u - cc.u) <= 1e-9);
    }
  }
}

TEST_CASE("chart decomposition handles large fast-direction coefficients") {
  auto rng = make_rng(33);
  CotangentPoint base = random_cotangent(2, rng, 1.0);
  FrameIndex fi{2};
  Eigen::VectorXd s = Eigen::VectorXd::Zero(7);
  s(fi.Vm()) = 19.0;
  s(fi.Wp(2)) = 0.05;
  CMat D = expm(19.0 * basis_V(-1, 2)) * expm(0.05 * basis_W(+1, 2, 2));
  Eigen::VectorXd rec = chart_decompose(base.q.lift.inverse() * (base.q.lift * D), 2);
  // Not the same as s (the factors do not commute), but dominated by the
  // fast coefficient and finite.
  CHECK(std::abs(rec(fi.Vm()) - 19.0) <= 0.5);
  CHECK(rec.cwiseAbs().maxCoeff() <= 25.0);
}

TEST_CASE("tautological form at the anchor") {
  auto rng = make_rng(34);
  CotangentPoint base = random_cotangent(2, rng, 1.7);
  FrameIndex fi{2};
  Eigen::VectorXd a0 = alpha_form(base, Eigen::VectorXd::Zero(8));
  CHECK(std::abs(a0(fi.X()) - base.tau) <= 1e-12);
  CHECK(a0(7) == 0.0);  // u direction never moves the base point
  Eigen::VectorXd off = random_chart_offset(2, rng, 0.05);
  CHECK(alpha_form(base, off)(7) == 0.0);
}

TEST_CASE("symplectic form: step validation, structure constants, nondegeneracy") {
  auto rng = make_rng(35);
  CotangentPoint base = random_cotangent(2, rng, 1.4);
  CHECK_THROWS_AS(symplectic_form_at(base, 1e-7), std::invalid_argument);
  CHECK_THROWS_AS(symplectic_form_at(base, 1e-2), std::invalid_argument);

  SymplecticFormAt w = symplectic_form_at(base);
  CHECK(w.antisym_residual <= 1e-9);
  FrameIndex fi{2};
  double tau = base.tau;
  CHECK(std::abs(w.omega(fi.Vm(), fi.Vp()) + 4.0 * tau) <= 1e-5);
  CHECK(std::abs(w.omega(7, fi.X()) - tau) <= 1e-5);
  std::vector<int> em = {fi.Wm(2), fi.Zm(2)};
  std::vector<int> ep = {fi.Wp(2), fi.Zp(2)};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double want = (a == b) ? 2.0 * tau : 0.0;
      CHECK(std::abs(w.omega(em[a], ep[b]) - want) <= 1e-5);
    }
  }
  double det = w.omega.determinant();
  double expected = 256.0 * std::pow(tau, 8);
  CHECK(std::abs(det - expected) / expected <= 1e-3);
}

TEST_CASE("vanishing pairings and Lagrangian subspaces") {
  auto rng = make_rng(36);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 2; ++rep) {
      CotangentPoint base = random_cotangent(n, rng, 0.9 + rep);
      SymplecticFormAt w = symplectic_form_at(base, 1e-4);
      FrameIndex fi{n};
      std::vector<int> unstable = {fi.Vm()};
      std::vector<int> stable = {fi.Vp()};
      for (int j = 2; j <= n; ++j) {
        unstable.push_back(fi.Wm(j));
        unstable.push_back(fi.Zm(j));
        stable.push_back(fi.Wp(j));
        stable.push_back(fi.Zp(j));
      }
      // All pairings inside the unstable span and inside the stable span
      // vanish; adding X keeps both Lagrangian.
      auto max_inside = [&](std::vector<int> idx) {
        idx.push_back(fi.X());
        double worst = 0.0;
        for (int i : idx)
          for (int j : idx) worst = std::max(worst, std::abs(w.omega(i, j)));
        return worst;
      };
      CHECK(max_inside(unstable) <= 1e-6);
      CHECK(max_inside(stable) <= 1e-6);
    }
  }
}

TEST_CASE("second-order convergence of the outer differences") {
  auto rng = make_rng(37);
  CotangentPoint base = random_cotangent(2, rng, 1.1);
  Eigen::MatrixXd w1 = symplectic_form_at(base, 1e-4).omega;
  Eigen::MatrixXd w2 = symplectic_form_at(base, 2e-4).omega;
  Eigen::MatrixXd ref = (4.0 * symplectic_form_at(base, 5e-5).omega - w1) / 3.0;
  double r1 = (w1 - ref).cwiseAbs().maxCoeff();
  double r2 = (w2 - ref).cwiseAbs().maxCoeff();
  double ratio = r2 / r1;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("straightening map") {
  auto rng = make_rng(38);
  for (int n : {2, 3}) {
    CotangentPoint base = random_cotangent(n, rng, 0.6 + 0.4 * n);
    StraightenMap sm = straighten(base);
    CHECK(sm.symplectic_residual <= 1e-8);
    CHECK(sm.image_residual <= 1e-7);
    CHECK(sm.pairing_condition < 10.0);
    FrameIndex fi{n};
    int half = 2 * n;
    // The fast-unstable chart direction maps onto the first position, with
    // the documented coefficient, and the dilation onto the last.
    Eigen::VectorXd img = sm.L.col(fi.Vp());
    for (int r = 0; r < 4 * n; ++r) {
      if (r != 0) CHECK(std::abs(img(r)) <= 1e-10 * img.cwiseAbs().maxCoeff());
    }
    CHECK(std::abs(sm.S(fi.Vm(), half) + 1.0 / (4.0 * base.tau)) <= 1e-4 / base.tau);
    CHECK(std::abs(sm.S(4 * n - 1, 4 * n - 1) - 1.0 / base.tau) <= 1e-4 / base.tau);
    // L inverts S.
    CHECK((sm.L * sm.S - Eigen::MatrixXd::Identity(4 * n, 4 * n)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("rectangle validation and sample geometry") {
  auto rng = make_rng(39);
  CotangentPoint base = random_cotangent(2, rng, 1.0);
  StraightenMap sm = straighten(base);
  CHECK_THROWS_AS(make_slow_rectangle(base, sm, 0.0, 0.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_slow_rectangle(base, sm, 0.1, 0.2, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_slow_rectangle(base, sm, 0.1, 0.0, 2), std::invalid_argument);

  SlowRectangle rect = make_slow_rectangle(base, sm, 0.1, 0.02, -1);
  double a = rect.alpha, a2 = a * a;
  auto coords = rectangle_sample_coords(rect, 60, a2);
  CHECK(static_cast<int>(coords.size()) == 60);
  // Center is the first sample.
  CHECK(coords[0](4) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(coords[0].cwiseAbs().sum() == doctest::Approx(0.02).epsilon(1e-12));
  // Defining inequalities hold for every sample.
  for (const auto& w : coords) {
    CHECK(w.cwiseAbs().sum() <= a + 1e-12);
    CHECK(std::abs(w(4) - rect.center) <= a2 + 1e-12);
  }
  // Two-sample request: thin-coordinate spread stays within the slab size.
  auto two = rectangle_sample_coords(rect, 2, a2);
  CHECK(std::abs(two[0](4) - two[1](4)) <= 2.0 * a2 + 1e-15);
  // Prefix stability.
  auto more = rectangle_sample_coords(rect, 80, a2);
  for (int i = 0; i < 60; ++i) CHECK((more[i] - coords[i]).cwiseAbs().maxCoeff() == 0.0);
  // Round-trip: mapped points decompose back to the sampled coordinates.
  auto pts = rectangle_samples(rect, 12);
  for (int i = 0; i < 12; ++i) {
    ChartCoords cc = point_to_chart(base, pts[static_cast<std::size_t>(i)]);
    Eigen::VectorXd c(8);
    c << cc.s, cc.u;
    CHECK((sm.L * c - coords[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("propagated diameter: baseline, monotonicity, validation") {
  auto rng = make_rng(40);
  CotangentPoint base = random_cotangent(2, rng, 1.0);
  StraightenMap sm = straighten(base);
  SlowRectangle rect = make_slow_rectangle(base, sm, 0.1, 0.0, -1);
  CHECK_THROWS_AS(propagated_diameter(rect, -1.0, 20), std::invalid_argument);
  double d0 = propagated_diameter(rect, 0.0, 40);
  CHECK(d0 <= 8.0 * rect.alpha);
  CHECK(d0 >= 0.1 * rect.alpha);
  double d_small = propagated_diameter(rect, 1.0, 20);
  double d_large = propagated_diameter(rect, 1.0, 60);
  CHECK(d_small <= d_large + 1e-15);
}

TEST_CASE("slow rectangles stay slow, wide slabs do not") {
  auto rng = make_rng(41);
  CotangentPoint base{act(random_group(2, rng), base_point(2)), 1.0};
  StraightenMap sm = straighten(base);
  double alpha = 0.03;
  SlowRectangle rect = make_slow_rectangle(base, sm, alpha, 0.0, -1);
  double t_end = std::log(1.0 / alpha);
  int m = 80;
  // Slab of width alpha^2: chart-metric diameter over alpha e^t stays flat.
  double slow0 = propagated_diameter_custom(rect, 0.0, m, alpha * alpha,
                                            RectangleMetric::chart);
  double slow1 = propagated_diameter_custom(rect, t_end, m, alpha * alpha,
                                            RectangleMetric::chart);
  double slow_growth = (slow1 / (alpha * std::exp(t_end))) / (slow0 / alpha);
  CHECK(slow_growth <= 1.5);
  // Control slab of width alpha: the fast direction shows through.
  double wide0 = propagated_diameter_custom(rect, 0.0, m, alpha, RectangleMetric::chart);
  double wide1 = propagated_diameter_custom(rect, t_end, m, alpha, RectangleMetric::chart);
  double wide_growth = (wide1 / (alpha * std::exp(t_end))) / (wide0 / alpha);
  CHECK(wide_growth >= 5.0);
}
