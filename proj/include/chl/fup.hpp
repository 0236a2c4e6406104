#pragma once

#include "chl/porous.hpp"

#include <string>
#include <vector>

namespace chl {

// Subset of Z_N as a bit mask.
struct DiscreteSet {
  int N = 0;
  std::vector<bool> mask;

  DiscreteSet() = default;
  DiscreteSet(int N_, std::vector<bool> mask_);
  static DiscreteSet full(int N);
  static DiscreteSet empty_set(int N);
  int count() const;
};

// Indices k whose grid cell [k/N, (k+1)/N] lies inside an interval of the
// set (small tolerance at endpoints), so a depth-d base-b construction on the
// matching grid N = b^d keeps exactly the digit-selected residues.
DiscreteSet discretize(const PorousSet& set, int N);

struct FupParams {
  double nu = 0.0;
  double alpha0 = 0.0, alpha1 = 0.0;  // scale window
  double gamma0 = 1.0, gamma1 = 0.0;  // exponent window
  double eps0 = 0.0;
  double rho = 2.0 / 3.0;             // = (2/3)(1 - eps0)

  FupParams(double nu_, double alpha0_, double alpha1_, double gamma0_, double gamma1_,
            double eps0_);
};

struct NormResult {
  double value = 0.0;
  std::string method;      // "dense-svd" or "power-iteration"
  int iterations = 0;
  double residual = 0.0;
  bool under_resolved = false;  // continuous model: spacing coarser than h/64
};

// Operator norm of the submatrix of the unitary N-point discrete Fourier
// matrix with rows in omega_minus and columns in omega_plus.  Dense singular
// values for N <= 4096, power iteration on the normal operator with fast
// transforms beyond.
NormResult discrete_norm(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus);

// Same quantity via the FFT-based power iteration regardless of grid size;
// exposed so the two solvers can be cross-checked on grids where both run.
NormResult discrete_norm_power(const DiscreteSet& omega_minus,
                               const DiscreteSet& omega_plus);

// sqrt(|omega_minus| |omega_plus| / N): Frobenius bound on discrete_norm.
double discrete_frobenius_bound(const DiscreteSet& omega_minus,
                                const DiscreteSet& omega_plus);

// Norm of the kernel (2 pi h)^{-1/2} e^{-i x xi / h} restricted to the two
// sets, by composite midpoint quadrature (quad_points per set) and dense
// singular values.  Throws when the grid spacing exceeds h/8.
NormResult continuous_norm(const PorousSet& omega_minus, const PorousSet& omega_plus,
                           double h, int quad_points);

// Frobenius bound for the continuous kernel from the same quadrature grid.
double continuous_frobenius_bound(const PorousSet& omega_minus,
                                  const PorousSet& omega_plus, double h, int quad_points);

struct BetaFit {
  double beta_hat = 0.0;
  double log_C = 0.0;
  double r_squared = 0.0;
};

// Least-squares fit of log norm = log C + beta log scale.  Requires at least
// 4 samples with positive norms and non-identical scales.
BetaFit beta_regression(const std::vector<std::pair<double, double>>& samples);

// Confirms that restricting frequency and position in coordinate 1 only, on
// an N x transverse_dim grid, gives exactly the 1D norm (tensor
// factorization).  Returns the 2D norm.
double tensor_factor_norm(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus,
                          int transverse_dim);
bool tensor_factor_check(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus,
                         int transverse_dim, double tol = 1e-8);

}  // namespace chl
