#include "chl/porous.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace chl {

PorousSet::PorousSet(std::vector<Interval> intervals, bool require_unit_range)
    : ivs_(std::move(intervals)) {
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (!(ivs_[i].b > ivs_[i].a)) {
      throw std::invalid_argument("intervals must satisfy b > a");
    }
    if (!std::isfinite(ivs_[i].a) || !std::isfinite(ivs_[i].b)) {
      throw std::invalid_argument("interval endpoints must be finite");
    }
    if (require_unit_range && (ivs_[i].a < -1e-12 || ivs_[i].b > 1.0 + 1e-12)) {
      throw std::invalid_argument("intervals must lie inside [0,1]");
    }
    if (i > 0 && !(ivs_[i].a > ivs_[i - 1].b)) {
      throw std::invalid_argument("intervals must be sorted and disjoint");
    }
  }
}

double PorousSet::measure() const {
  double m = 0.0;
  for (const Interval& iv : ivs_) m += iv.b - iv.a;
  return m;
}

double PorousSet::min_point() const {
  if (empty()) throw std::logic_error("empty set has no extent");
  return ivs_.front().a;
}

double PorousSet::max_point() const {
  if (empty()) throw std::logic_error("empty set has no extent");
  return ivs_.back().b;
}

PorousSet parse_porous_set(std::istream& in) {
  std::vector<Interval> ivs;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) ivs.push_back({a, b});
  }
  return PorousSet(std::move(ivs));
}

std::string format_porous_set(const PorousSet& set) {
  std::ostringstream os;
  os.precision(17);
  for (const Interval& iv : set.intervals()) os << iv.a << " " << iv.b << "\n";
  return os.str();
}

namespace {

// The set-free open gaps between blocks, extended by sentinels well past the
// set's extent so windows overhanging either side see free space.
struct GapScan {
  std::vector<double> ga, gb, glen;
  std::vector<std::vector<double>> table;  // sparse table, range max of glen
  std::vector<int> log2tab;

  explicit GapScan(const PorousSet& set) {
    const auto& ivs = set.intervals();
    // Unbounded free space on both sides: the sentinel gaps must never run
    // out, or windows probing past them would see a spuriously filled line.
    ga.push_back(-1e18);
    gb.push_back(ivs.front().a);
    for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
      ga.push_back(ivs[i].b);
      gb.push_back(ivs[i + 1].a);
    }
    ga.push_back(ivs.back().b);
    gb.push_back(1e18);
    int k = static_cast<int>(ga.size());
    glen.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      glen[static_cast<std::size_t>(i)] =
          gb[static_cast<std::size_t>(i)] - ga[static_cast<std::size_t>(i)];

    log2tab.assign(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 2; i <= k; ++i)
      log2tab[static_cast<std::size_t>(i)] = log2tab[static_cast<std::size_t>(i / 2)] + 1;
    int levels = log2tab[static_cast<std::size_t>(k)] + 1;
    table.assign(static_cast<std::size_t>(levels), glen);
    for (int lv = 1; lv < levels; ++lv) {
      int span = 1 << lv;
      for (int i = 0; i + span <= k; ++i) {
        table[static_cast<std::size_t>(lv)][static_cast<std::size_t>(i)] =
            std::max(table[static_cast<std::size_t>(lv - 1)][static_cast<std::size_t>(i)],
                     table[static_cast<std::size_t>(lv - 1)]
                          [static_cast<std::size_t>(i + span / 2)]);
      }
    }
  }

  double range_max(int i, int j) const {  // max glen over indices [i, j]
    if (i > j) return 0.0;
    int lv = log2tab[static_cast<std::size_t>(j - i + 1)];
    return std::max(table[static_cast<std::size_t>(lv)][static_cast<std::size_t>(i)],
                    table[static_cast<std::size_t>(lv)]
                         [static_cast<std::size_t>(j - (1 << lv) + 1)]);
  }

  // Largest set-free subinterval of the window [x, x + len].
  double maxgap(double x, double len) const {
    double y = x + len;
    int k = static_cast<int>(ga.size());
    // First gap whose right end lies beyond x; it contains x or starts after.
    int i0 = static_cast<int>(std::upper_bound(gb.begin(), gb.end(), x) - gb.begin());
    // Last gap starting before y.
    int i1 = static_cast<int>(std::lower_bound(ga.begin(), ga.end(), y) - ga.begin()) - 1;
    if (i0 >= k || i1 < 0 || i1 < i0) return 0.0;
    double best = 0.0;
    int full_lo = i0, full_hi = i1;
    if (ga[static_cast<std::size_t>(i0)] <= x) {  // x inside gap i0
      best = std::max(best, std::min(gb[static_cast<std::size_t>(i0)], y) - x);
      full_lo = i0 + 1;
    }
    if (gb[static_cast<std::size_t>(i1)] >= y) {  // y inside gap i1
      if (ga[static_cast<std::size_t>(i1)] >= x) {
        best = std::max(best, y - ga[static_cast<std::size_t>(i1)]);
      }
      full_hi = i1 - 1;
    }
    best = std::max(best, range_max(full_lo, full_hi));
    return best;
  }

  // min over window positions of maxgap, for a fixed window length: the
  // minimum is attained at a gap-boundary kink or where a shrinking leading
  // partial gap crosses a growing trailing one.
  std::pair<double, double> min_maxgap(double len) const {
    int k = static_cast<int>(ga.size());
    double best = std::numeric_limits<double>::infinity();
    double best_x = 0.0;
    // Windows clear of the set are entirely free and never minimizers; the
    // guard also keeps the unbounded sentinel endpoints out of the window
    // arithmetic, where they would be absorbed.
    double lo_ok = gb[0] - len - 1.0;
    double hi_ok = ga[static_cast<std::size_t>(k - 1)] + 1.0;
    auto consider = [&](double x) {
      if (x < lo_ok || x > hi_ok) return;
      double v = maxgap(x, len);
      if (v < best) {
        best = v;
        best_x = x;
      }
    };
    for (int i = 0; i < k; ++i) {
      double a = ga[static_cast<std::size_t>(i)], b = gb[static_cast<std::size_t>(i)];
      consider(a);
      consider(b);
      consider(a - len);
      consider(b - len);
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (ga[static_cast<std::size_t>(j)] - gb[static_cast<std::size_t>(i)] > len) break;
        consider((gb[static_cast<std::size_t>(i)] + ga[static_cast<std::size_t>(j)] - len) /
                 2.0);
      }
    }
    return {best, best_x};
  }
};

void check_porosity_params(double nu, double alpha0, double alpha1) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw std::invalid_argument("porosity constant must lie in (0,1)");
  }
  if (!(alpha0 > 0.0 && alpha0 <= alpha1)) {
    throw std::invalid_argument("scale window must satisfy 0 < alpha0 <= alpha1");
  }
}

}  // namespace

PorosityVerdict is_porous(const PorousSet& set, double nu, double alpha0, double alpha1) {
  check_porosity_params(nu, alpha0, alpha1);
  if (set.empty()) return {true, 0.0, 0.0};
  GapScan scan(set);
  constexpr double kTie = 1e-9;
  constexpr double kWidthFloor = 1e-11;
  std::vector<std::pair<double, double>> stack{{alpha0, alpha1}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    auto [m, x] = scan.min_maxgap(lo);
    if (m < nu * lo) return {false, x, lo};
    if (m >= nu * hi - kTie) continue;  // certified on [lo, hi]
    if (hi - lo < kWidthFloor) {
      auto [mh, xh] = scan.min_maxgap(hi);
      if (mh < nu * hi - kTie) return {false, xh, hi};
      continue;
    }
    double mid = 0.5 * (lo + hi);
    stack.push_back({lo, mid});
    stack.push_back({mid, hi});
  }
  return {true, 0.0, 0.0};
}

PorosityVerdict porosity_grid_oracle(const PorousSet& set, double nu, double alpha0,
                                     double alpha1, double grid) {
  check_porosity_params(nu, alpha0, alpha1);
  if (set.empty()) return {true, 0.0, 0.0};
  const auto& ivs = set.intervals();
  int k = static_cast<int>(ivs.size());
  std::vector<double> ga(static_cast<std::size_t>(k) + 1),
      gb(static_cast<std::size_t>(k) + 1);
  ga[0] = set.min_point() - 16.0;
  gb[0] = ivs[0].a;
  for (int i = 1; i <= k; ++i) {
    ga[static_cast<std::size_t>(i)] = ivs[static_cast<std::size_t>(i - 1)].b;
    gb[static_cast<std::size_t>(i)] =
        (i < k) ? ivs[static_cast<std::size_t>(i)].a : set.max_point() + 16.0;
  }
  int ng = k + 1;

  std::int64_t l_lo = static_cast<std::int64_t>(std::ceil(alpha0 / grid - 1e-9));
  std::int64_t l_hi = static_cast<std::int64_t>(std::floor(alpha1 / grid + 1e-9));
  if (l_lo < 1) l_lo = 1;
  if (l_hi < l_lo) l_hi = l_lo;
  for (std::int64_t lsteps = l_lo; lsteps <= l_hi; ++lsteps) {
    double len = static_cast<double>(lsteps) * grid;
    std::int64_t x_lo =
        static_cast<std::int64_t>(std::floor((set.min_point() - len) / grid)) - 1;
    std::int64_t x_hi = static_cast<std::int64_t>(std::ceil(set.max_point() / grid)) + 1;
    std::deque<int> dq;  // gap indices fully inside the window, lengths decreasing
    int add = 0, head = 0, tail = 0;
    for (std::int64_t xs = x_lo; xs <= x_hi; ++xs) {
      double x = static_cast<double>(xs) * grid;
      double y = x + len;
      while (add < ng && gb[static_cast<std::size_t>(add)] <= y) {
        double L = gb[static_cast<std::size_t>(add)] - ga[static_cast<std::size_t>(add)];
        while (!dq.empty() &&
               gb[static_cast<std::size_t>(dq.back())] -
                       ga[static_cast<std::size_t>(dq.back())] <=
                   L)
          dq.pop_back();
        dq.push_back(add);
        ++add;
      }
      while (!dq.empty() && ga[static_cast<std::size_t>(dq.front())] < x) dq.pop_front();
      double best = dq.empty() ? 0.0
                               : gb[static_cast<std::size_t>(dq.front())] -
                                     ga[static_cast<std::size_t>(dq.front())];
      while (head < ng && gb[static_cast<std::size_t>(head)] <= x) ++head;
      if (head < ng && ga[static_cast<std::size_t>(head)] <= x) {
        best = std::max(best, std::min(gb[static_cast<std::size_t>(head)], y) - x);
      }
      while (tail + 1 < ng && ga[static_cast<std::size_t>(tail + 1)] < y) ++tail;
      if (ga[static_cast<std::size_t>(tail)] >= x &&
          gb[static_cast<std::size_t>(tail)] >= y &&
          ga[static_cast<std::size_t>(tail)] < y) {
        best = std::max(best, y - ga[static_cast<std::size_t>(tail)]);
      }
      if (best < nu * len - 1e-12) return {false, x, len};
    }
  }
  return {true, 0.0, 0.0};
}

PorousSet cantor_iterate(int base, const std::vector<int>& kept_digits, int depth) {
  if (base < 3) throw std::invalid_argument("base must be at least 3");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  std::vector<int> kept = kept_digits;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.empty() || static_cast<int>(kept.size()) >= base) {
    throw std::invalid_argument("kept digits must be a proper nonempty subset");
  }
  for (int d : kept) {
    if (d < 0 || d >= base) throw std::invalid_argument("kept digit out of range");
  }
  double count = std::pow(static_cast<double>(kept.size()), depth);
  if (count > (1 << 22)) throw std::invalid_argument("depth too large for enumeration");

  std::vector<double> starts{0.0};
  double width = 1.0;
  for (int lv = 0; lv < depth; ++lv) {
    width /= base;
    std::vector<double> next;
    next.reserve(starts.size() * kept.size());
    for (double s : starts) {
      for (int d : kept) next.push_back(s + d * width);
    }
    starts = std::move(next);
  }
  std::vector<Interval> ivs;
  ivs.reserve(starts.size());
  for (double s : starts) {
    if (!ivs.empty() && s <= ivs.back().b + 1e-15) {
      ivs.back().b = s + width;  // adjacent kept digits merge
    } else {
      ivs.push_back({s, s + width});
    }
  }
  return PorousSet(std::move(ivs));
}

GapConstruction gap_construction(double T, double delta, int depth) {
  if (!(T >= 1.0)) throw std::invalid_argument("time parameter must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("gap fraction must lie in (0,1)");
  }
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  double phi = delta / T;
  double nu_prime = std::exp(-2.0) * delta / T;
  std::vector<double> starts{0.0};
  double width = 1.0;
  for (int j = 1; j <= depth; ++j) {
    double target = (1.0 - 3.0 * nu_prime) * std::exp(-2.0 * j);
    while (width > target) {
      double child = width * (1.0 - phi) / 2.0;
      if (child < 1e-14) {
        throw std::invalid_argument("depth too large for double resolution");
      }
      if (starts.size() > (1u << 21)) {
        throw std::invalid_argument("depth too large for enumeration");
      }
      std::vector<double> next;
      next.reserve(2 * starts.size());
      for (double s : starts) {
        next.push_back(s);
        next.push_back(s + width - child);
      }
      starts = std::move(next);
      width = child;
    }
  }
  std::sort(starts.begin(), starts.end());
  std::vector<Interval> ivs;
  ivs.reserve(starts.size());
  for (double s : starts) ivs.push_back({s, s + width});
  return {PorousSet(std::move(ivs)), nu_prime};
}

PorousSet thicken(const PorousSet& set, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("thickening radius must be nonnegative");
  std::vector<Interval> out;
  for (const Interval& iv : set.intervals()) {
    double a = std::max(0.0, iv.a - alpha);
    double b = std::min(1.0, iv.b + alpha);
    if (!(b > a)) continue;
    if (!out.empty() && a <= out.back().b) {
      out.back().b = std::max(out.back().b, b);
    } else {
      out.push_back({a, b});
    }
  }
  return PorousSet(std::move(out));
}

PorousSet diffeo_image(const PorousSet& set, const DiffeoSpec& psi) {
  if (!psi.psi) throw std::invalid_argument("map must be provided");
  if (!(psi.sup_deriv > 0.0 && psi.sup_inv_deriv > 0.0)) {
    throw std::invalid_argument("derivative bounds must be positive");
  }
  int samples = 4096;
  double prev = psi.psi(0.0);
  int direction = 0;
  for (int i = 1; i <= samples; ++i) {
    double cur = psi.psi(static_cast<double>(i) / samples);
    int step = (cur > prev) ? 1 : (cur < prev ? -1 : 0);
    if (step == 0 || (direction != 0 && step != direction)) {
      throw std::invalid_argument("map is not strictly monotone on [0,1]");
    }
    direction = step;
    prev = cur;
  }
  std::vector<Interval> out;
  out.reserve(set.intervals().size());
  for (const Interval& iv : set.intervals()) {
    double pa = psi.psi(iv.a), pb = psi.psi(iv.b);
    if (direction > 0) {
      out.push_back({pa, pb});
    } else {
      out.push_back({pb, pa});
    }
  }
  if (direction < 0) std::reverse(out.begin(), out.end());
  return PorousSet(std::move(out), /*require_unit_range=*/false);
}

}  // namespace chl
