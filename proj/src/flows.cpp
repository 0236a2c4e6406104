#include "chl/flows.hpp"

#include <cmath>
#include <stdexcept>

namespace chl {

BundlePoint base_point(int n) {
  require_dim(n);
  return BundlePoint{n, CMat::Identity(n + 1, n + 1)};
}

BundlePoint act(const CMat& g, const BundlePoint& q) {
  if (g.rows() != q.n + 1 || g.cols() != q.n + 1)
    throw std::invalid_argument("group element dimension mismatch");
  return BundlePoint{q.n, g * q.lift};
}

BundlePoint geodesic_flow(const BundlePoint& q, double t) {
  return BundlePoint{q.n, q.lift * subgroup_A(t, q.n)};
}

BundlePoint horocycle_flow(const BundlePoint& q, double s, int sign) {
  return BundlePoint{q.n, q.lift * subgroup_U(sign, s, q.n)};
}

double point_residual(const BundlePoint& q) {
  CVec z = q.z(), v = q.v();
  double r = std::abs(mink_inner(z, z) + 1.0);
  r = std::max(r, std::abs(mink_inner(z, v)));
  r = std::max(r, std::abs(mink_inner(v, v) - 1.0));
  r = std::max(r, group_residual(q.lift, q.n));
  return r;
}

Eigen::VectorXd transport_factors(int n, double t) {
  FrameIndex fi{n};
  Eigen::VectorXd f(fi.size());
  f(fi.X()) = 1.0;
  f(fi.Vm()) = std::exp(2.0 * t);
  f(fi.Vp()) = std::exp(-2.0 * t);
  for (int j = 2; j <= n; ++j) {
    f(fi.Wm(j)) = std::exp(t);
    f(fi.Zm(j)) = std::exp(t);
    f(fi.Wp(j)) = std::exp(-t);
    f(fi.Zp(j)) = std::exp(-t);
  }
  return f;
}

FrameTangent pushforward_frame(const FrameTangent& w, double t) {
  FrameTangent out;
  out.base = geodesic_flow(w.base, t);
  out.coeffs = transport_factors(w.base.n, t).cwiseProduct(w.coeffs);
  return out;
}

Eigen::MatrixXd transport_matrix_conjugation(int n, double t) {
  auto frame = frame_basis(n);
  FrameDecomposer dec(n);
  CMat Et = subgroup_A(t, n);
  CMat Emt = subgroup_A(-t, n);
  int nf = 4 * n - 1;
  Eigen::MatrixXd M(nf, nf);
  for (int i = 0; i < nf; ++i) {
    CMat conj = Emt * frame[static_cast<std::size_t>(i)] * Et;
    auto res = dec.decompose(conj);
    if (res.complement.cwiseAbs().maxCoeff() > 1e-8 * conj.cwiseAbs().maxCoeff())
      throw std::runtime_error("transport leaked outside the frame span");
    M.col(i) = res.frame;
  }
  return M;
}

double bundle_distance(const BundlePoint& q1, const BundlePoint& q2) {
  if (q1.n != q2.n) throw std::invalid_argument("bundle points of different dimension");
  CVec z1 = q1.z(), v1 = q1.v(), z2 = q2.z(), v2 = q2.v();
  double sq = z1.squaredNorm() + z2.squaredNorm() + v1.squaredNorm() + v2.squaredNorm();
  // min_theta -2 Re(e^{-i theta} S) = -2 |S| with S the total Hermitian overlap
  cxd S = z1.dot(z2) + v1.dot(v2);  // Eigen dot conjugates the first argument
  double d2 = sq - 2.0 * std::abs(S);
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace chl
