#include "chl/fup.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace chl {

namespace {

using cxd = std::complex<double>;
using CMatD = Eigen::MatrixXcd;
using CVecD = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;

// Largest singular value: dense decomposition when small, deterministic
// power iteration on the normal operator when large.
double largest_singular_value(const CMatD& M, std::string* method, int* iterations,
                              double* residual) {
  if (M.rows() == 0 || M.cols() == 0) {
    if (method) *method = "dense-svd";
    return 0.0;
  }
  if (std::max(M.rows(), M.cols()) <= 700) {
    Eigen::BDCSVD<CMatD> svd(M);
    if (method) *method = "dense-svd";
    return svd.singularValues()(0);
  }
  CVecD v = CVecD::Ones(M.cols());
  v /= v.norm();
  double lambda = 0.0, rel_err = 0.0;
  int it = 0;
  for (; it < 20000; ++it) {
    CVecD w = M.adjoint() * (M * v);
    double nrm = w.norm();
    if (nrm == 0.0) {
      lambda = 0.0;
      rel_err = 0.0;
      break;
    }
    double rayleigh = v.dot(w).real();
    lambda = rayleigh;
    rel_err = (w - rayleigh * v).norm() / rayleigh;
    v = w / nrm;
    if (rel_err <= 1e-9) {
      ++it;
      break;
    }
  }
  if (method) *method = "power-iteration";
  if (iterations) *iterations = it;
  if (residual) *residual = rel_err;
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

DiscreteSet::DiscreteSet(int N_, std::vector<bool> mask_) : N(N_), mask(std::move(mask_)) {
  if (N <= 0) throw std::invalid_argument("grid size must be positive");
  if (static_cast<int>(mask.size()) != N) {
    throw std::invalid_argument("mask length must equal the grid size");
  }
}

DiscreteSet DiscreteSet::full(int N) {
  return DiscreteSet(N, std::vector<bool>(static_cast<std::size_t>(N), true));
}

DiscreteSet DiscreteSet::empty_set(int N) {
  return DiscreteSet(N, std::vector<bool>(static_cast<std::size_t>(N), false));
}

int DiscreteSet::count() const {
  int c = 0;
  for (bool b : mask) c += b ? 1 : 0;
  return c;
}

DiscreteSet discretize(const PorousSet& set, int N) {
  if (N <= 0) throw std::invalid_argument("grid size must be positive");
  std::vector<bool> mask(static_cast<std::size_t>(N), false);
  for (const Interval& iv : set.intervals()) {
    long lo = static_cast<long>(std::ceil(iv.a * N - 1e-9));
    long hi = static_cast<long>(std::floor(iv.b * N + 1e-9)) - 1;
    for (long k = std::max(0L, lo); k <= std::min<long>(N - 1, hi); ++k) {
      mask[static_cast<std::size_t>(k)] = true;
    }
  }
  return DiscreteSet(N, std::move(mask));
}

FupParams::FupParams(double nu_, double alpha0_, double alpha1_, double gamma0_,
                     double gamma1_, double eps0_)
    : nu(nu_), alpha0(alpha0_), alpha1(alpha1_), gamma0(gamma0_), gamma1(gamma1_),
      eps0(eps0_) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("porosity must lie in (0,1)");
  if (!(alpha0 > 0.0 && alpha0 <= alpha1)) {
    throw std::invalid_argument("scale window must satisfy 0 < alpha0 <= alpha1");
  }
  if (!(gamma1 >= 0.0 && gamma1 < 0.5 && 0.5 < gamma0 && gamma0 <= 1.0)) {
    throw std::invalid_argument("exponent window must satisfy 0 <= gamma1 < 1/2 < gamma0 <= 1");
  }
  if (!(eps0 > 0.0 && eps0 < 0.25)) {
    throw std::invalid_argument("the slack parameter must lie in (0, 1/4)");
  }
  rho = (2.0 / 3.0) * (1.0 - eps0);
  if (!(rho > 0.5 && rho < 2.0 / 3.0)) {
    throw std::invalid_argument("scale exponent must lie in (1/2, 2/3)");
  }
}

namespace {

NormResult power_iteration_fft(const DiscreteSet& om, const DiscreteSet& op) {
  int N = om.N;
  std::vector<int> plus_idx, minus_idx;
  for (int k = 0; k < N; ++k) {
    if (op.mask[static_cast<std::size_t>(k)]) plus_idx.push_back(k);
    if (om.mask[static_cast<std::size_t>(k)]) minus_idx.push_back(k);
  }
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(N));
  fftw_plan fwd = fftw_plan_dft_1d(N, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(N, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  auto clear = [&]() {
    for (int k = 0; k < N; ++k) buf[k][0] = buf[k][1] = 0.0;
  };
  std::vector<cxd> v(plus_idx.size(), cxd(1.0, 0.0));
  {
    double nrm = std::sqrt(static_cast<double>(v.size()));
    for (cxd& z : v) z /= nrm;
  }
  double scale = 1.0 / N;  // forward and backward each carry 1/sqrt(N)
  auto apply_normal = [&](const std::vector<cxd>& in, std::vector<cxd>& out) {
    clear();
    for (std::size_t i = 0; i < plus_idx.size(); ++i) {
      buf[plus_idx[i]][0] = in[i].real();
      buf[plus_idx[i]][1] = in[i].imag();
    }
    fftw_execute(fwd);
    // Restrict to the frequency-side set, zero the rest.
    std::vector<cxd> mid(minus_idx.size());
    for (std::size_t i = 0; i < minus_idx.size(); ++i) {
      mid[i] = cxd(buf[minus_idx[i]][0], buf[minus_idx[i]][1]);
    }
    clear();
    for (std::size_t i = 0; i < minus_idx.size(); ++i) {
      buf[minus_idx[i]][0] = mid[i].real();
      buf[minus_idx[i]][1] = mid[i].imag();
    }
    fftw_execute(bwd);
    out.resize(plus_idx.size());
    for (std::size_t i = 0; i < plus_idx.size(); ++i) {
      out[i] = cxd(buf[plus_idx[i]][0], buf[plus_idx[i]][1]) * scale;
    }
  };
  NormResult res;
  res.method = "power-iteration";
  double lambda = 0.0;
  std::vector<cxd> w;
  int it = 0;
  for (; it < 10000; ++it) {
    apply_normal(v, w);
    double rayleigh = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      rayleigh += (std::conj(v[i]) * w[i]).real();
      nrm += std::norm(w[i]);
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      lambda = 0.0;
      res.residual = 0.0;
      break;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) err += std::norm(w[i] - rayleigh * v[i]);
    err = std::sqrt(err);
    lambda = rayleigh;
    res.residual = err / rayleigh;
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nrm;
    if (res.residual <= 1e-9) {
      ++it;
      break;
    }
  }
  res.iterations = it;
  res.value = std::sqrt(std::max(0.0, lambda));
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(buf);
  return res;
}

}  // namespace

NormResult discrete_norm_power(const DiscreteSet& omega_minus,
                               const DiscreteSet& omega_plus) {
  if (omega_minus.N != omega_plus.N) {
    throw std::invalid_argument("the two sets must share one grid size");
  }
  NormResult res;
  if (omega_minus.count() == 0 || omega_plus.count() == 0) {
    res.method = "power-iteration";
    res.value = 0.0;
    return res;
  }
  return power_iteration_fft(omega_minus, omega_plus);
}

NormResult discrete_norm(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus) {
  if (omega_minus.N != omega_plus.N) {
    throw std::invalid_argument("the two sets must share one grid size");
  }
  int N = omega_minus.N;
  int cm = omega_minus.count(), cp = omega_plus.count();
  NormResult res;
  if (cm == 0 || cp == 0) {
    res.method = "dense-svd";
    res.value = 0.0;
    return res;
  }
  if (cm == N && cp == N) {
    res.method = "dense-svd";
    res.value = 1.0;  // the full transform is unitary
    return res;
  }
  if (N > 4096) return power_iteration_fft(omega_minus, omega_plus);
  CMatD M(cm, cp);
  int r = 0;
  double root = 1.0 / std::sqrt(static_cast<double>(N));
  for (int j = 0; j < N; ++j) {
    if (!omega_minus.mask[static_cast<std::size_t>(j)]) continue;
    int c = 0;
    for (int k = 0; k < N; ++k) {
      if (!omega_plus.mask[static_cast<std::size_t>(k)]) continue;
      double phase = -2.0 * kPi * static_cast<double>(j) * static_cast<double>(k) / N;
      M(r, c) = root * cxd(std::cos(phase), std::sin(phase));
      ++c;
    }
    ++r;
  }
  Eigen::BDCSVD<CMatD> svd(M);
  res.method = "dense-svd";
  res.value = svd.singularValues()(0);
  return res;
}

double discrete_frobenius_bound(const DiscreteSet& omega_minus,
                                const DiscreteSet& omega_plus) {
  if (omega_minus.N != omega_plus.N) {
    throw std::invalid_argument("the two sets must share one grid size");
  }
  return std::sqrt(static_cast<double>(omega_minus.count()) *
                   static_cast<double>(omega_plus.count()) / omega_minus.N);
}

namespace {

struct QuadGrid {
  std::vector<double> x, w;
  double max_spacing = 0.0;
};

QuadGrid midpoint_grid(const PorousSet& set, int quad_points) {
  QuadGrid g;
  double total = set.measure();
  if (total <= 0.0) return g;
  double target = total / quad_points;
  for (const Interval& iv : set.intervals()) {
    double len = iv.b - iv.a;
    int ni = std::max(1, static_cast<int>(std::lround(len / target)));
    double step = len / ni;
    g.max_spacing = std::max(g.max_spacing, step);
    for (int q = 0; q < ni; ++q) {
      g.x.push_back(iv.a + (q + 0.5) * step);
      g.w.push_back(step);
    }
  }
  return g;
}

}  // namespace

NormResult continuous_norm(const PorousSet& omega_minus, const PorousSet& omega_plus,
                           double h, int quad_points) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must lie in (0,1)");
  if (quad_points < 1) throw std::invalid_argument("quadrature needs at least one point");
  NormResult res;
  if (omega_minus.empty() || omega_plus.empty()) {
    res.method = "dense-svd";
    return res;
  }
  QuadGrid gm = midpoint_grid(omega_minus, quad_points);
  QuadGrid gp = midpoint_grid(omega_plus, quad_points);
  double spacing = std::max(gm.max_spacing, gp.max_spacing);
  if (spacing > h / 8.0) {
    throw std::invalid_argument("quadrature grid is coarser than h/8");
  }
  res.under_resolved = spacing > h / 64.0;
  CMatD M(gm.x.size(), gp.x.size());
  double pref = 1.0 / std::sqrt(2.0 * kPi * h);
  for (std::size_t i = 0; i < gm.x.size(); ++i) {
    for (std::size_t j = 0; j < gp.x.size(); ++j) {
      double phase = -gm.x[i] * gp.x[j] / h;
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          pref * std::sqrt(gm.w[i] * gp.w[j]) * cxd(std::cos(phase), std::sin(phase));
    }
  }
  res.value = largest_singular_value(M, &res.method, &res.iterations, &res.residual);
  return res;
}

double continuous_frobenius_bound(const PorousSet& omega_minus,
                                  const PorousSet& omega_plus, double h,
                                  int quad_points) {
  QuadGrid gm = midpoint_grid(omega_minus, quad_points);
  QuadGrid gp = midpoint_grid(omega_plus, quad_points);
  double wm = 0.0, wp = 0.0;
  for (double w : gm.w) wm += w;
  for (double w : gp.w) wp += w;
  return std::sqrt(wm * wp / (2.0 * kPi * h));
}

BetaFit beta_regression(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("at least 4 samples are required");
  std::vector<double> xs, ys;
  for (const auto& [scale, norm] : samples) {
    if (!(scale > 0.0)) throw std::invalid_argument("scales must be positive");
    if (!(norm > 0.0)) throw std::invalid_argument("norms must be positive");
    xs.push_back(std::log(scale));
    ys.push_back(std::log(norm));
  }
  double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 1e-30) throw std::invalid_argument("all scales are equal");
  BetaFit fit;
  fit.beta_hat = sxy / sxx;
  fit.log_C = my - fit.beta_hat * mx;
  double ss_res = syy - sxy * sxy / sxx;
  fit.r_squared = (syy <= 1e-30) ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

double tensor_factor_norm(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus,
                          int transverse_dim) {
  if (omega_minus.N != omega_plus.N) {
    throw std::invalid_argument("the two sets must share one grid size");
  }
  if (transverse_dim < 1) throw std::invalid_argument("transverse dimension must be positive");
  int N = omega_minus.N;
  int T = transverse_dim;
  long rows = static_cast<long>(omega_minus.count()) * T;
  long cols = static_cast<long>(omega_plus.count()) * T;
  if (rows * cols > (1L << 24)) throw std::invalid_argument("tensor grid exceeds the size cap");
  if (rows == 0 || cols == 0) return 0.0;
  CMatD M(rows, cols);
  double root = 1.0 / std::sqrt(static_cast<double>(N) * T);
  long r = 0;
  for (int k1 = 0; k1 < N; ++k1) {
    if (!omega_minus.mask[static_cast<std::size_t>(k1)]) continue;
    for (int k2 = 0; k2 < T; ++k2, ++r) {
      long c = 0;
      for (int j1 = 0; j1 < N; ++j1) {
        if (!omega_plus.mask[static_cast<std::size_t>(j1)]) continue;
        for (int j2 = 0; j2 < T; ++j2, ++c) {
          double phase = -2.0 * kPi * (static_cast<double>(k1) * j1 / N +
                                       static_cast<double>(k2) * j2 / T);
          M(r, c) = root * cxd(std::cos(phase), std::sin(phase));
        }
      }
    }
  }
  return largest_singular_value(M, nullptr, nullptr, nullptr);
}

bool tensor_factor_check(const DiscreteSet& omega_minus, const DiscreteSet& omega_plus,
                         int transverse_dim, double tol) {
  double two_d = tensor_factor_norm(omega_minus, omega_plus, transverse_dim);
  double one_d = discrete_norm(omega_minus, omega_plus).value;
  return std::abs(two_d - one_d) <= tol;
}

}  // namespace chl
