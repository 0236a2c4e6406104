#include "chl/mink.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace chl {

namespace {
constexpr cxd I_UNIT(0.0, 1.0);

void require_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
}

void require_slow_index(int j, int n) {
  if (j < 2 || j > n) throw std::invalid_argument("slow index out of range 2..n");
}
}  // namespace

void require_dim(int n) {
  if (n < 2) throw std::invalid_argument("complex dimension must satisfy n >= 2");
}

CMat unit_entry(int j, int k, int m) {
  CMat E = CMat::Zero(m, m);
  E(j, k) = 1.0;
  return E;
}

CMat signature_matrix(int n) {
  require_dim(n);
  CMat J = CMat::Identity(n + 1, n + 1);
  J(0, 0) = -1.0;
  return J;
}

cxd mink_inner(const CVec& z, const CVec& w) {
  if (z.size() != w.size()) throw std::invalid_argument("vector dimension mismatch");
  cxd acc = -z(0) * std::conj(w(0));
  for (Eigen::Index j = 1; j < z.size(); ++j) acc += z(j) * std::conj(w(j));
  return acc;
}

CMat basis_X(int n) {
  require_dim(n);
  int m = n + 1;
  return unit_entry(0, 1, m) + unit_entry(1, 0, m);
}

CMat basis_V(int sign, int n) {
  require_dim(n);
  require_sign(sign);
  int m = n + 1;
  double s = static_cast<double>(sign);
  return I_UNIT * (unit_entry(0, 0, m) - s * unit_entry(0, 1, m) + s * unit_entry(1, 0, m) -
                   unit_entry(1, 1, m));
}

CMat basis_W(int sign, int j, int n) {
  require_dim(n);
  require_sign(sign);
  require_slow_index(j, n);
  int m = n + 1;
  double s = static_cast<double>(sign);
  return unit_entry(0, j, m) + s * unit_entry(1, j, m) + unit_entry(j, 0, m) -
         s * unit_entry(j, 1, m);
}

CMat basis_Z(int sign, int j, int n) {
  require_dim(n);
  require_sign(sign);
  require_slow_index(j, n);
  int m = n + 1;
  double s = static_cast<double>(sign);
  return I_UNIT * (unit_entry(0, j, m) + s * unit_entry(1, j, m) - unit_entry(j, 0, m) +
                   s * unit_entry(j, 1, m));
}

CMat basis_R(int j, int k, int n) {
  require_dim(n);
  if (!(2 <= j && j < k && k <= n)) throw std::invalid_argument("need 2 <= j < k <= n");
  int m = n + 1;
  return unit_entry(j, k, m) - unit_entry(k, j, m);
}

CMat basis_Rprime(int j, int k, int n) {
  require_dim(n);
  if (!(2 <= j && j <= k && k <= n)) throw std::invalid_argument("need 2 <= j <= k <= n");
  int m = n + 1;
  CMat M = unit_entry(j, k, m) + unit_entry(k, j, m);
  if (j == k) M -= unit_entry(0, 0, m) + unit_entry(1, 1, m);
  return I_UNIT * M;
}

std::vector<CMat> frame_basis(int n) {
  require_dim(n);
  std::vector<CMat> out;
  out.reserve(4 * n - 1);
  out.push_back(basis_X(n));
  out.push_back(basis_V(-1, n));
  out.push_back(basis_V(+1, n));
  for (int j = 2; j <= n; ++j) out.push_back(basis_W(-1, j, n));
  for (int j = 2; j <= n; ++j) out.push_back(basis_Z(-1, j, n));
  for (int j = 2; j <= n; ++j) out.push_back(basis_W(+1, j, n));
  for (int j = 2; j <= n; ++j) out.push_back(basis_Z(+1, j, n));
  return out;
}

std::vector<CMat> isotropy_basis(int n) {
  require_dim(n);
  std::vector<CMat> out;
  for (int j = 2; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) out.push_back(basis_R(j, k, n));
  for (int j = 2; j <= n; ++j)
    for (int k = j; k <= n; ++k) out.push_back(basis_Rprime(j, k, n));
  return out;
}

std::vector<int> FrameIndex::slow_minus() const {
  std::vector<int> idx;
  for (int j = 2; j <= n; ++j) idx.push_back(Wm(j));
  for (int j = 2; j <= n; ++j) idx.push_back(Zm(j));
  return idx;
}

std::vector<int> FrameIndex::slow_plus() const {
  std::vector<int> idx;
  for (int j = 2; j <= n; ++j) idx.push_back(Wp(j));
  for (int j = 2; j <= n; ++j) idx.push_back(Zp(j));
  return idx;
}

CMat bracket(const CMat& A, const CMat& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("matrix dimension mismatch");
  return A * B - B * A;
}

CMat kappa_E(int sign, const CVec& w, int n) {
  require_dim(n);
  require_sign(sign);
  if (w.size() != n - 1) throw std::invalid_argument("slow vector must have length n-1");
  CMat M = CMat::Zero(n + 1, n + 1);
  for (int j = 2; j <= n; ++j) {
    cxd wj = w(j - 2);
    M += wj.real() * basis_W(sign, j, n) - wj.imag() * basis_Z(sign, j, n);
  }
  return M;
}

CMat nilpotent_exp(double c, int sign, const CVec& w, int n) {
  CMat N = c * basis_V(sign, n) + kappa_E(sign, w, n);
  CMat N2 = N * N;
  return CMat::Identity(n + 1, n + 1) + N + 0.5 * N2;
}

CMat expm(const CMat& A) { return A.exp(); }

CMat logm(const CMat& A) { return A.log(); }

CMat frechet_exp(const CMat& A, const CMat& B) {
  Eigen::Index m = A.rows();
  CMat aug = CMat::Zero(2 * m, 2 * m);
  aug.topLeftCorner(m, m) = A;
  aug.topRightCorner(m, m) = B;
  aug.bottomRightCorner(m, m) = A;
  CMat e = aug.exp();
  return e.topRightCorner(m, m);
}

CMat subgroup_U(int sign, double s, int n) {
  require_dim(n);
  require_sign(sign);
  CMat g = CMat::Identity(n + 1, n + 1);
  cxd is = I_UNIT * s;
  double sg = static_cast<double>(sign);
  g(0, 0) = 1.0 + is;
  g(0, 1) = -sg * is;
  g(1, 0) = sg * is;
  g(1, 1) = 1.0 - is;
  return g;
}

CMat subgroup_A(double t, int n) {
  require_dim(n);
  CMat g = CMat::Identity(n + 1, n + 1);
  g(0, 0) = std::cosh(t);
  g(0, 1) = std::sinh(t);
  g(1, 0) = std::sinh(t);
  g(1, 1) = std::cosh(t);
  return g;
}

CMat subgroup_K(const CMat& B) {
  int n = static_cast<int>(B.rows());
  require_dim(n);
  if (B.cols() != n) throw std::invalid_argument("K parameter must be square n x n");
  double unit_res = (B.adjoint() * B - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unit_res > 1e-10) throw std::invalid_argument("K parameter must be unitary");
  CMat g = CMat::Zero(n + 1, n + 1);
  g(0, 0) = 1.0 / B.determinant();
  g.bottomRightCorner(n, n) = B;
  return g;
}

CMat subgroup_R(double theta, const CMat& B) {
  int nm1 = static_cast<int>(B.rows());
  int n = nm1 + 1;
  require_dim(n);
  if (B.cols() != nm1) throw std::invalid_argument("R parameter must be square (n-1)x(n-1)");
  double unit_res = (B.adjoint() * B - CMat::Identity(nm1, nm1)).cwiseAbs().maxCoeff();
  if (unit_res > 1e-10) throw std::invalid_argument("R parameter must be unitary");
  cxd want = std::exp(cxd(0.0, -2.0 * theta));
  if (std::abs(B.determinant() - want) > 1e-10)
    throw std::invalid_argument("R parameter needs det(B) = exp(-2 i theta)");
  CMat g = CMat::Zero(n + 1, n + 1);
  cxd ph = std::exp(cxd(0.0, theta));
  g(0, 0) = ph;
  g(1, 1) = ph;
  g.bottomRightCorner(nm1, nm1) = B;
  return g;
}

bool in_X_W_U(const CMat& g, int ell, int n, double tol) {
  require_dim(n);
  if (ell < 1 || ell > n) throw std::invalid_argument("block index out of range 1..n");
  CVec y = g.col(0) + g.col(1);  // g (e0 + e1)
  for (int c = ell + 1; c <= n; ++c)
    if (std::abs(y(c)) > tol) return false;
  return true;
}

double su_residual(const CMat& M, int n) {
  CMat J = signature_matrix(n);
  double form = (M.adjoint() * J + J * M).cwiseAbs().maxCoeff();
  double tr = std::abs(M.trace());
  return std::max(form, tr);
}

double group_residual(const CMat& g, int n) {
  CMat J = signature_matrix(n);
  double form = (g.adjoint() * J * g - J).cwiseAbs().maxCoeff();
  double det = std::abs(g.determinant() - 1.0);
  return std::max(form, det);
}

CMat random_su(int n, std::mt19937_64& rng, double scale) {
  require_dim(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int m = n + 1;
  CMat A(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) A(r, c) = cxd(gauss(rng), gauss(rng));
  CMat J = signature_matrix(n);
  CMat M = A - J * A.adjoint() * J;  // M^* J + J M = 0 by construction
  cxd tr = M.trace();                // purely imaginary, so the shift stays inside
  M -= (tr / static_cast<double>(m)) * CMat::Identity(m, m);
  double norm = M.cwiseAbs().maxCoeff();
  if (norm > 0) M *= scale / norm;
  return M;
}

CMat random_group(int n, std::mt19937_64& rng, double scale) {
  return expm(random_su(n, rng, scale));
}

CVec random_cvec(int len, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(len);
  for (int i = 0; i < len; ++i) v(i) = scale * cxd(gauss(rng), gauss(rng));
  return v;
}

namespace {
Eigen::VectorXd vectorize_real(const CMat& M) {
  Eigen::Index m = M.rows();
  Eigen::VectorXd v(2 * m * m);
  Eigen::Index p = 0;
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      v(p++) = M(r, c).real();
      v(p++) = M(r, c).imag();
    }
  return v;
}
}  // namespace

FrameDecomposer::FrameDecomposer(int n) : n_(n) {
  require_dim(n);
  auto fr = frame_basis(n);
  auto iso = isotropy_basis(n);
  int m = n + 1;
  int cols = static_cast<int>(fr.size() + iso.size());
  basis_mat_.resize(2 * m * m, cols);
  int c = 0;
  for (const auto& B : fr) basis_mat_.col(c++) = vectorize_real(B);
  for (const auto& B : iso) basis_mat_.col(c++) = vectorize_real(B);
  qr_.compute(basis_mat_);
}

FrameDecomposer::Result FrameDecomposer::decompose(const CMat& M) const {
  Eigen::VectorXd rhs = vectorize_real(M);
  Eigen::VectorXd sol = qr_.solve(rhs);
  Result res;
  int nf = 4 * n_ - 1;
  res.frame = sol.head(nf);
  res.complement = sol.tail(sol.size() - nf);
  res.residual = (basis_mat_ * sol - rhs).cwiseAbs().maxCoeff();
  return res;
}

}  // namespace chl
