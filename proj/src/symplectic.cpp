#include "chl/symplectic.hpp"

#include <cmath>
#include <stdexcept>

#include "chl/util.hpp"

namespace chl {

namespace {

CMat frame_combination(const std::vector<CMat>& frame, const Eigen::VectorXd& s) {
  CMat A = CMat::Zero(frame[0].rows(), frame[0].cols());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    A += s(static_cast<Eigen::Index>(i)) * frame[i];
  }
  return A;
}

int first_primes[20] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                        31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

CotangentPoint chart_to_point(const CotangentPoint& base, const ChartCoords& c) {
  int n = base.q.n;
  if (c.s.size() != 4 * n - 1) {
    throw std::invalid_argument("chart coordinates have the wrong dimension");
  }
  if (c.s.norm() + std::abs(c.u) > kChartRadius) {
    throw std::invalid_argument("chart coordinates exceed the chart radius");
  }
  auto frame = frame_basis(n);
  CMat lift = base.q.lift * expm(frame_combination(frame, c.s));
  return CotangentPoint{BundlePoint{n, lift}, base.tau * std::exp(c.u)};
}

Eigen::VectorXd chart_decompose(const CMat& D, int n) {
  auto isotropy = isotropy_basis(n);
  FrameDecomposer dec(n);
  CMat cur = D;
  for (int iter = 0; iter < 60; ++iter) {
    CMat Y = logm(cur);
    FrameDecomposer::Result r = dec.decompose(Y);
    if (r.complement.cwiseAbs().maxCoeff() < 1e-13) {
      return r.frame;
    }
    CMat Yr = CMat::Zero(n + 1, n + 1);
    for (std::size_t i = 0; i < isotropy.size(); ++i) {
      Yr += r.complement(static_cast<Eigen::Index>(i)) * isotropy[i];
    }
    cur = cur * expm(-Yr);
  }
  throw std::runtime_error("chart decomposition did not converge");
}

ChartCoords point_to_chart(const CotangentPoint& base, const CotangentPoint& p) {
  CMat D = base.q.lift.inverse() * p.q.lift;
  return ChartCoords{chart_decompose(D, base.q.n), std::log(p.tau / base.tau)};
}

Eigen::VectorXd alpha_form(const CotangentPoint& base, const Eigen::VectorXd& c) {
  int n = base.q.n;
  int d = 4 * n;
  if (c.size() != d) {
    throw std::invalid_argument("chart offset has the wrong dimension");
  }
  auto frame = frame_basis(n);
  CMat A = frame_combination(frame, c.head(d - 1));
  double tau = base.tau * std::exp(c(d - 1));
  CVec v = (base.q.lift * expm(A)).col(1);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
  for (int j = 0; j + 1 < d; ++j) {
    CVec dz = (base.q.lift * frechet_exp(A, frame[static_cast<std::size_t>(j)])).col(0);
    a(j) = tau * mink_inner(dz, v).real();
  }
  return a;
}

SymplecticFormAt symplectic_form_at(const CotangentPoint& base, double fd_step) {
  if (!(fd_step >= 1e-6 && fd_step <= 1e-3)) {
    throw std::invalid_argument("finite-difference step outside [1e-6, 1e-3]");
  }
  int d = 4 * base.q.n;
  Eigen::MatrixXd dalpha(d, d);  // dalpha(i, j) = d alpha_j / d c_i
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e(i) = fd_step;
    Eigen::VectorXd plus = alpha_form(base, e);
    Eigen::VectorXd minus = alpha_form(base, -e);
    dalpha.row(i) = ((plus - minus) / (2.0 * fd_step)).transpose();
  }
  SymplecticFormAt out;
  out.omega = dalpha - dalpha.transpose();
  out.alpha = alpha_form(base, Eigen::VectorXd::Zero(d));
  out.antisym_residual = (out.omega + out.omega.transpose()).cwiseAbs().maxCoeff();
  return out;
}

Eigen::MatrixXd standard_symplectic_matrix(int n) {
  int half = 2 * n;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * half, 2 * half);
  for (int k = 0; k < half; ++k) {
    J(k, half + k) = -1.0;
    J(half + k, k) = 1.0;
  }
  return J;
}

StraightenMap straighten(const CotangentPoint& base) {
  int n = base.q.n;
  int d = 4 * n;
  int half = 2 * n;
  FrameIndex fi{n};

  SymplecticFormAt w_h = symplectic_form_at(base, 1e-4);
  SymplecticFormAt w_h2 = symplectic_form_at(base, 5e-5);
  Eigen::MatrixXd omega = (4.0 * w_h2.omega - w_h.omega) / 3.0;

  int iX = fi.X();
  int iVm = fi.Vm();
  int iVp = fi.Vp();
  int iU = d - 1;
  std::vector<int> eminus, eplus;  // slow minus / slow plus chart indices
  for (int j = 2; j <= n; ++j) eminus.push_back(fi.Wm(j));
  for (int j = 2; j <= n; ++j) eminus.push_back(fi.Zm(j));
  for (int j = 2; j <= n; ++j) eplus.push_back(fi.Wp(j));
  for (int j = 2; j <= n; ++j) eplus.push_back(fi.Zp(j));
  int k = 2 * n - 2;

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
  // y columns.
  S(iVp, 0) = 1.0;
  for (int a = 0; a < k; ++a) S(eplus[static_cast<std::size_t>(a)], 1 + a) = 1.0;
  S(iX, half - 1) = 1.0;
  // eta columns.
  S(iVm, half) = 1.0 / omega(iVm, iVp);
  Eigen::MatrixXd P(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      P(a, b) = omega(eminus[static_cast<std::size_t>(a)], eplus[static_cast<std::size_t>(b)]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
  double cond = svd.singularValues()(0) / svd.singularValues()(k - 1);
  if (!(svd.singularValues()(k - 1) > 1e-12)) {
    throw std::runtime_error("slow pairing system is numerically singular, condition " +
                             std::to_string(cond));
  }
  Eigen::MatrixXd sol =
      P.transpose().colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(k, k));
  for (int j = 0; j < k; ++j) {
    for (int b = 0; b < k; ++b) {
      S(eminus[static_cast<std::size_t>(b)], half + 1 + j) = sol(b, j);
    }
  }
  S(iU, d - 1) = 1.0 / omega(iU, iX);

  StraightenMap out;
  out.S = S;
  out.L = S.inverse();
  out.pairing_condition = cond;
  Eigen::MatrixXd J = standard_symplectic_matrix(n);
  out.symplectic_residual = (S.transpose() * omega * S - J).cwiseAbs().maxCoeff();

  // Each distinguished chart direction must land in its coordinate subspace.
  auto span_residual = [&](const std::vector<int>& chart_dirs, int lo, int hi) {
    double worst = 0.0;
    for (int dir : chart_dirs) {
      Eigen::VectorXd img = out.L.col(dir);
      double outside = 0.0;
      for (int r = 0; r < d; ++r) {
        if (r < lo || r > hi) outside += img(r) * img(r);
      }
      worst = std::max(worst, std::sqrt(outside) / img.norm());
    }
    return worst;
  };
  double ir = 0.0;
  ir = std::max(ir, span_residual({iVp}, 0, 0));
  ir = std::max(ir, span_residual(eplus, 1, half - 2));
  ir = std::max(ir, span_residual({iX}, half - 1, half - 1));
  ir = std::max(ir, span_residual({iVm}, half, half));
  ir = std::max(ir, span_residual(eminus, half + 1, d - 2));
  ir = std::max(ir, span_residual({iU}, d - 1, d - 1));
  out.image_residual = ir;
  return out;
}

SlowRectangle make_slow_rectangle(const CotangentPoint& base, const StraightenMap& map,
                                  double alpha, double center, int sign) {
  if (!(alpha > 0.0 && alpha <= kChartRadius)) {
    throw std::invalid_argument("rectangle scale must lie in (0, chart radius]");
  }
  if (!(std::abs(center) <= alpha)) {
    throw std::invalid_argument("rectangle center must satisfy |center| <= alpha");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("rectangle sign must be +1 or -1");
  }
  return SlowRectangle{base, map, alpha, center, sign};
}

std::vector<Eigen::VectorXd> rectangle_sample_coords(const SlowRectangle& rect, int m,
                                                     double slab_width) {
  if (m < 2) throw std::invalid_argument("at least two samples are required");
  int n = rect.base.q.n;
  int d = 4 * n;
  if (d > 20) throw std::invalid_argument("sampling supports dimensions up to n = 5");
  int thin = (rect.sign < 0) ? 2 * n : 0;  // eta_1 or y_1
  double alpha = rect.alpha;
  auto clamp_thin = [&](double v) { return std::min(alpha, std::max(-alpha, v)); };

  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(m));
  auto push = [&](const Eigen::VectorXd& w) {
    if (static_cast<int>(pts.size()) < m) pts.push_back(w);
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  w(thin) = clamp_thin(rect.center);
  push(w);  // center
  w(thin) = clamp_thin(rect.center - slab_width);
  push(w);
  w(thin) = clamp_thin(rect.center + slab_width);
  push(w);
  double reach = alpha - std::abs(rect.center);
  for (int kk = 0; kk < d && static_cast<int>(pts.size()) < m; ++kk) {
    if (kk == thin) continue;
    for (double sgn : {1.0, -1.0}) {
      w.setZero();
      w(thin) = clamp_thin(rect.center);
      w(kk) = sgn * reach;
      push(w);
    }
  }
  for (std::uint64_t i = 1; static_cast<int>(pts.size()) < m; ++i) {
    w.setZero();
    double tv = rect.center +
                (2.0 * halton(i, static_cast<unsigned>(first_primes[thin])) - 1.0) * slab_width;
    w(thin) = clamp_thin(tv);
    double budget = alpha - std::abs(w(thin));
    for (int kk = 0; kk < d; ++kk) {
      if (kk == thin) continue;
      double u = halton(i, static_cast<unsigned>(first_primes[kk]));
      w(kk) = (2.0 * u - 1.0) * budget / (d - 1);
    }
    push(w);
  }
  return pts;
}

namespace {

std::vector<CotangentPoint> map_samples(const SlowRectangle& rect,
                                        const std::vector<Eigen::VectorXd>& coords) {
  int n = rect.base.q.n;
  std::vector<CotangentPoint> out;
  out.reserve(coords.size());
  for (const Eigen::VectorXd& w : coords) {
    Eigen::VectorXd c = rect.map.S * w;
    ChartCoords cc{c.head(4 * n - 1), c(4 * n - 1)};
    out.push_back(chart_to_point(rect.base, cc));
  }
  return out;
}

}  // namespace

std::vector<CotangentPoint> rectangle_samples(const SlowRectangle& rect, int m) {
  return map_samples(rect, rectangle_sample_coords(rect, m, rect.alpha * rect.alpha));
}

double weighted_distance(const CotangentPoint& a, const CotangentPoint& b) {
  double dl = std::log(a.tau) - std::log(b.tau);
  double db = bundle_distance(a.q, b.q);
  return std::sqrt(db * db + dl * dl);
}

double intrinsic_distance(const CotangentPoint& a, const CotangentPoint& b) {
  Eigen::VectorXd s = chart_decompose(a.q.lift.inverse() * b.q.lift, a.q.n);
  double dl = std::log(a.tau) - std::log(b.tau);
  return std::sqrt(s.squaredNorm() + dl * dl);
}

double propagated_diameter_custom(const SlowRectangle& rect, double t, int m,
                                  double slab_width, RectangleMetric metric) {
  if (t < 0.0) throw std::invalid_argument("propagation time must be nonnegative");
  std::vector<CotangentPoint> pts =
      map_samples(rect, rectangle_sample_coords(rect, m, slab_width));
  double flow_time = (rect.sign < 0) ? t : -t;
  for (CotangentPoint& p : pts) {
    p.q = geodesic_flow(p.q, flow_time);
  }
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dd = (metric == RectangleMetric::ambient) ? weighted_distance(pts[i], pts[j])
                                                       : intrinsic_distance(pts[i], pts[j]);
      diam = std::max(diam, dd);
    }
  }
  return diam;
}

double propagated_diameter(const SlowRectangle& rect, double t, int m) {
  return propagated_diameter_custom(rect, t, m, rect.alpha * rect.alpha,
                                    RectangleMetric::ambient);
}

}  // namespace chl
