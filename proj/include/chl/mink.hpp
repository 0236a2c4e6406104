#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

namespace chl {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// All matrices live on C^{n,1}: (n+1)x(n+1) complex, n >= 2.
// The indefinite form is <z,w> = -z0 conj(w0) + sum_{j>=1} zj conj(wj).

void require_dim(int n);  // throws std::invalid_argument unless n >= 2

CMat unit_entry(int j, int k, int m);  // m x m matrix with a single 1 at (j,k)
CMat signature_matrix(int n);          // diag(-1, 1, ..., 1), size n+1

cxd mink_inner(const CVec& z, const CVec& w);

// --- distinguished algebra elements (sizes n+1; j ranges over 2..n) ---
CMat basis_X(int n);
CMat basis_V(int sign, int n);               // sign = +1 or -1
CMat basis_W(int sign, int j, int n);
CMat basis_Z(int sign, int j, int n);
CMat basis_R(int j, int k, int n);           // 2 <= j < k <= n
CMat basis_Rprime(int j, int k, int n);      // 2 <= j <= k <= n

// Ordered frame: [X, V-, V+, W-_2..W-_n, Z-_2..Z-_n, W+_2..W+_n, Z+_2..Z+_n],
// 4n-1 elements. Index helpers below refer to this order.
std::vector<CMat> frame_basis(int n);
// Complement of the frame inside the full algebra: R_jk (j<k) then R'_jk (j<=k),
// (n-1)^2 elements; together with the frame this spans the whole algebra.
std::vector<CMat> isotropy_basis(int n);

struct FrameIndex {
  int n;
  int X() const { return 0; }
  int Vm() const { return 1; }
  int Vp() const { return 2; }
  int Wm(int j) const { return 3 + (j - 2); }             // j in 2..n
  int Zm(int j) const { return 3 + (n - 1) + (j - 2); }
  int Wp(int j) const { return 3 + 2 * (n - 1) + (j - 2); }
  int Zp(int j) const { return 3 + 3 * (n - 1) + (j - 2); }
  int size() const { return 4 * n - 1; }
  // Slow blocks: minus-sign (expanding, e^{t}) and plus-sign (contracting, e^{-t}).
  std::vector<int> slow_minus() const;
  std::vector<int> slow_plus() const;
};

CMat bracket(const CMat& A, const CMat& B);

// kappa(sign, w) = sum_j (Re w_j) W^sign_j - (Im w_j) Z^sign_j, w in C^{n-1}.
CMat kappa_E(int sign, const CVec& w, int n);

// exp(c V^sign + kappa(sign, w)) via the exact three-term expansion
// I + N + N^2/2 (N is nilpotent of order 3).
CMat nilpotent_exp(double c, int sign, const CVec& w, int n);

// Generic matrix exponential / principal logarithm (scaling-and-squaring Pade,
// via Eigen's matrix-function kernels).
CMat expm(const CMat& A);
CMat logm(const CMat& A);
// d/ds exp(A + s B) at s = 0, computed exactly through the augmented-block
// exponential exp([[A, B], [0, A]]) whose top-right block is the derivative.
CMat frechet_exp(const CMat& A, const CMat& B);

// --- one-parameter subgroups and stabilizer factors ---
CMat subgroup_U(int sign, double s, int n);   // equals exp(s V^sign)
CMat subgroup_A(double t, int n);             // equals exp(t X)
CMat subgroup_K(const CMat& B);               // B: n x n unitary -> diag(det(B)^{-1}, B)
CMat subgroup_R(double theta, const CMat& B); // B: (n-1)x(n-1), det B = e^{-2 i theta}

// True iff components l+1..n of g (e0 + e1) vanish below tol.
bool in_X_W_U(const CMat& g, int ell, int n, double tol = 1e-10);

// --- membership residuals ---
double su_residual(const CMat& M, int n);     // max(|M^* J + J M|_max, |tr M|)
double group_residual(const CMat& g, int n);  // max(|g^* J g - J|_max, |det g - 1|)

// Random algebra/group elements (deterministic given the engine state).
CMat random_su(int n, std::mt19937_64& rng, double scale = 1.0);
CMat random_group(int n, std::mt19937_64& rng, double scale = 0.5);
CVec random_cvec(int len, std::mt19937_64& rng, double scale = 1.0);

// Decomposes an algebra element into frame + complement coefficients
// (real-linear least squares over the full basis; residual reported).
class FrameDecomposer {
 public:
  explicit FrameDecomposer(int n);
  struct Result {
    Eigen::VectorXd frame;       // 4n-1
    Eigen::VectorXd complement;  // (n-1)^2
    double residual;             // reconstruction error, max-norm
  };
  Result decompose(const CMat& M) const;
  int n() const { return n_; }

 private:
  int n_;
  Eigen::MatrixXd basis_mat_;  // 2(n+1)^2 x ((n+1)^2 - 1), real-vectorized basis
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

}  // namespace chl
