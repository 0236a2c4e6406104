#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chl/mink.hpp"
#include "chl/util.hpp"

#include <cmath>

using namespace chl;

namespace {
double max_abs(const CMat& M) { return M.cwiseAbs().maxCoeff(); }

CVec unit_vec(int idx, int len) {
  CVec e = CVec::Zero(len);
  e(idx) = 1.0;
  return e;
}

// Random special-unitary 2x2 block (det = 1) from a unit quaternion.
CMat random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double a = gauss(rng), b = gauss(rng), c = gauss(rng), d = gauss(rng);
  double norm = std::sqrt(a * a + b * b + c * c + d * d);
  a /= norm; b /= norm; c /= norm; d /= norm;
  CMat Q(2, 2);
  Q(0, 0) = cxd(a, b);
  Q(0, 1) = cxd(c, d);
  Q(1, 0) = cxd(-c, d);
  Q(1, 1) = cxd(a, -b);
  return Q;
}
}  // namespace

TEST_CASE("indefinite inner product") {
  CVec e0 = unit_vec(0, 3), e1 = unit_vec(1, 3);
  CHECK(mink_inner(e0, e0) == cxd(-1.0, 0.0));
  CHECK(mink_inner(e1, e1) == cxd(1.0, 0.0));
  CVec s = e0 + e1;
  CHECK(mink_inner(s, s) == cxd(0.0, 0.0));
  CHECK_THROWS_AS(mink_inner(e0, unit_vec(0, 4)), std::invalid_argument);
}

TEST_CASE("printed 3x3 basis matrices") {
  const cxd i(0.0, 1.0);
  CMat X = basis_X(2);
  CMat Xref(3, 3);
  Xref << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  CHECK(max_abs(X - Xref) == 0.0);

  CMat Vp = basis_V(+1, 2);
  CMat Vpref(3, 3);
  Vpref << i, -i, 0, i, -i, 0, 0, 0, 0;
  CHECK(max_abs(Vp - Vpref) == 0.0);

  CMat Rp = basis_Rprime(2, 2, 2);
  CMat Rpref = CMat::Zero(3, 3);
  Rpref(0, 0) = -i;
  Rpref(1, 1) = -i;
  Rpref(2, 2) = 2.0 * i;
  CHECK(max_abs(Rp - Rpref) == 0.0);
}

TEST_CASE("dimension and index guards") {
  CHECK_THROWS_AS(basis_X(1), std::invalid_argument);
  CHECK_THROWS_AS(basis_V(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(basis_W(+1, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(basis_W(+1, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(basis_R(2, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(basis_Rprime(3, 2, 3), std::invalid_argument);
}

TEST_CASE("all basis elements satisfy the algebra membership residual") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& B : frame_basis(n)) CHECK(su_residual(B, n) <= 1e-13);
    for (const auto& B : isotropy_basis(n)) CHECK(su_residual(B, n) <= 1e-13);
    CHECK(static_cast<int>(frame_basis(n).size()) == 4 * n - 1);
    CHECK(static_cast<int>(isotropy_basis(n).size()) == (n - 1) * (n - 1));
  }
}

TEST_CASE("eigenrelations of the flow generator") {
  for (int n = 2; n <= 5; ++n) {
    CMat X = basis_X(n);
    for (int sign : {+1, -1}) {
      double s = sign;
      CHECK(max_abs(bracket(X, basis_V(sign, n)) - 2.0 * s * basis_V(sign, n)) <= 1e-13);
      for (int j = 2; j <= n; ++j) {
        CHECK(max_abs(bracket(X, basis_W(sign, j, n)) - s * basis_W(sign, j, n)) <= 1e-13);
        CHECK(max_abs(bracket(X, basis_Z(sign, j, n)) - s * basis_Z(sign, j, n)) <= 1e-13);
      }
    }
    CHECK(max_abs(bracket(X, X)) == 0.0);
  }
}

TEST_CASE("stabilizer directions commute with X and the fast directions") {
  for (int n = 2; n <= 4; ++n) {
    std::vector<CMat> targets = {basis_X(n), basis_V(+1, n), basis_V(-1, n)};
    for (const auto& R : isotropy_basis(n))
      for (const auto& Y : targets) CHECK(max_abs(bracket(R, Y)) <= 1e-13);
  }
}

TEST_CASE("slow-direction packaging") {
  // kappa(+1, (1)) = W^+_2 and kappa(-1, (i)) = -Z^-_2 at n = 2.
  CVec w1(1), wi(1);
  w1(0) = 1.0;
  wi(0) = cxd(0.0, 1.0);
  CHECK(max_abs(kappa_E(+1, w1, 2) - basis_W(+1, 2, 2)) == 0.0);
  CHECK(max_abs(kappa_E(-1, wi, 2) + basis_Z(-1, 2, 2)) == 0.0);
  CHECK(max_abs(kappa_E(+1, CVec::Zero(1), 2)) == 0.0);
}

TEST_CASE("nilpotency identities and commutators of the slow block") {
  auto rng = make_rng(11);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 100; ++rep) {
      for (int sign : {+1, -1}) {
        CVec w = random_cvec(n - 1, rng);
        CVec wt = random_cvec(n - 1, rng);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double c = unif(rng);
        CMat V = basis_V(sign, n);
        CMat N = c * V + kappa_E(sign, w, n);
        // square collapses onto the fast direction, cube vanishes
        cxd wnorm2 = 0.0;
        for (int k = 0; k < n - 1; ++k) wnorm2 += w(k) * std::conj(w(k));
        CHECK(max_abs(N * N - (-cxd(0, 1) * wnorm2) * V) <= 1e-12);
        CHECK(max_abs(N * N * N) <= 1e-12);
        // fast direction commutes with the packaged slow directions
        CHECK(max_abs(bracket(V, kappa_E(sign, w, n))) <= 1e-12);
        // slow-slow commutator closes onto the fast direction
        cxd inner = 0.0;
        for (int k = 0; k < n - 1; ++k) inner += w(k) * std::conj(wt(k));
        CMat lhs = bracket(kappa_E(sign, w, n), kappa_E(sign, wt, n));
        CHECK(max_abs(lhs - (-2.0 * inner.imag()) * V) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exact unipotent exponential matches the generic exponential") {
  auto rng = make_rng(12);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 20; ++rep) {
      for (int sign : {+1, -1}) {
        CVec w = random_cvec(n - 1, rng);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double c = unif(rng);
        CMat N = c * basis_V(sign, n) + kappa_E(sign, w, n);
        CHECK(max_abs(nilpotent_exp(c, sign, w, n) - expm(N)) <= 1e-12);
        CHECK(group_residual(nilpotent_exp(c, sign, w, n), n) <= 1e-12);
      }
    }
  }
  CHECK(max_abs(nilpotent_exp(0.0, +1, CVec::Zero(1), 2) - CMat::Identity(3, 3)) == 0.0);
}

TEST_CASE("matrix action closed form on ambient vectors") {
  auto rng = make_rng(13);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 50; ++rep) {
      for (int sign : {+1, -1}) {
        double s = sign;
        CVec w = random_cvec(n - 1, rng);
        CVec z = random_cvec(n + 1, rng);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double c = unif(rng);
        CVec es = unit_vec(0, n + 1) + s * unit_vec(1, n + 1);
        CVec w_amb = CVec::Zero(n + 1);
        for (int k = 2; k <= n; ++k) w_amb(k) = w(k - 2);
        CVec lhs = (c * basis_V(sign, n) + kappa_E(sign, w, n)) * z;
        CVec rhs = mink_inner(z, w_amb) * es - mink_inner(z, es) * w_amb -
                   cxd(0, 1) * c * mink_inner(z, es) * es;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("rotation equivariance of the slow packaging") {
  auto rng = make_rng(14);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    {  // n = 2: the block is the scalar e^{-2 i theta}
      double theta = ang(rng);
      CMat B(1, 1);
      B(0, 0) = std::exp(cxd(0, -2.0 * theta));
      CMat r = subgroup_R(theta, B);
      for (int sign : {+1, -1}) {
        CVec w = random_cvec(1, rng);
        CVec wrot = std::exp(cxd(0, -theta)) * (B * w);
        CHECK(max_abs(r * kappa_E(sign, w, 2) * r.inverse() - kappa_E(sign, wrot, 2)) <= 1e-11);
      }
    }
    {  // n = 3: B = e^{-i theta} Q with Q special unitary
      double theta = ang(rng);
      CMat B = std::exp(cxd(0, -theta)) * random_su2(rng);
      CMat r = subgroup_R(theta, B);
      for (int sign : {+1, -1}) {
        CVec w = random_cvec(2, rng);
        CVec wrot = std::exp(cxd(0, -theta)) * (B * w);
        CHECK(max_abs(r * kappa_E(sign, w, 3) * r.inverse() - kappa_E(sign, wrot, 3)) <= 1e-11);
      }
    }
  }
}

TEST_CASE("one-parameter subgroups") {
  CMat A = subgroup_A(0.7, 2);
  CHECK(std::abs(A(0, 0) - std::cosh(0.7)) <= 1e-15);
  CHECK(std::abs(A(0, 1) - std::sinh(0.7)) <= 1e-15);
  CHECK(std::abs(A(2, 2) - 1.0) == 0.0);
  CHECK(max_abs(subgroup_A(0.0, 2) - CMat::Identity(3, 3)) == 0.0);
  CHECK(max_abs(subgroup_A(0.9, 3) - expm(0.9 * basis_X(3))) <= 1e-12);

  const cxd i(0, 1);
  CMat Up = subgroup_U(+1, 0.4, 2);
  CHECK(std::abs(Up(0, 0) - (1.0 + 0.4 * i)) == 0.0);
  CHECK(std::abs(Up(0, 1) - (-0.4 * i)) == 0.0);
  CHECK(std::abs(Up(1, 0) - 0.4 * i) == 0.0);
  CHECK(std::abs(Up(1, 1) - (1.0 - 0.4 * i)) == 0.0);
  for (int n : {2, 3}) {
    for (int sign : {+1, -1}) {
      for (double s : {-1.3, 0.25, 2.0}) {
        CHECK(max_abs(subgroup_U(sign, s, n) - expm(s * basis_V(sign, n))) <= 1e-12);
        CHECK(group_residual(subgroup_U(sign, s, n), n) <= 1e-12);
      }
    }
  }
}

TEST_CASE("compact and stabilizer factors validate their parameters") {
  auto rng = make_rng(15);
  CMat Q = random_su2(rng);
  CHECK(group_residual(subgroup_K(Q), 2) <= 1e-12);
  CMat notunitary = 2.0 * Q;
  CHECK_THROWS_AS(subgroup_K(notunitary), std::invalid_argument);
  CMat B(1, 1);
  B(0, 0) = std::exp(cxd(0, -2.0 * 0.3));
  CHECK(group_residual(subgroup_R(0.3, B), 2) <= 1e-12);
  B(0, 0) = std::exp(cxd(0, -2.0 * 0.3 + 0.5));
  CHECK_THROWS_AS(subgroup_R(0.3, B), std::invalid_argument);
}

TEST_CASE("membership test for the block subgroups") {
  CMat id = CMat::Identity(3, 3);
  for (int ell : {1, 2}) CHECK(in_X_W_U(id, ell, 2));
  // swap of e1 and e2 inside the compact factor moves e0+e1 out of the flag
  CMat B(2, 2);
  B << 0, 1, 1, 0;
  CMat g = subgroup_K(B);
  CHECK_FALSE(in_X_W_U(g, 1, 2));
  CHECK(in_X_W_U(g, 2, 2));
  CHECK_THROWS_AS(in_X_W_U(id, 0, 2), std::invalid_argument);
}

TEST_CASE("random algebra elements and exponentials") {
  auto rng = make_rng(16);
  for (int n : {2, 3, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      CMat M = random_su(n, rng);
      CHECK(su_residual(M, n) <= 1e-12);
      CMat g = expm(M);
      CHECK(group_residual(g, n) <= 1e-11);
      CMat back = logm(g);
      CHECK(max_abs(back - M) <= 1e-10);
    }
  }
}

TEST_CASE("Jacobi identity on random basis triples") {
  auto rng = make_rng(17);
  for (int n : {2, 3, 4}) {
    auto fr = frame_basis(n);
    auto iso = isotropy_basis(n);
    std::vector<CMat> all = fr;
    all.insert(all.end(), iso.begin(), iso.end());
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int rep = 0; rep < 60; ++rep) {
      const CMat &A = all[pick(rng)], &B = all[pick(rng)], &C = all[pick(rng)];
      CMat J = bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B));
      CHECK(max_abs(J) <= 1e-12);
    }
  }
}

TEST_CASE("frame decomposition inverts the coefficient map") {
  auto rng = make_rng(18);
  for (int n : {2, 3}) {
    FrameDecomposer dec(n);
    auto fr = frame_basis(n);
    for (std::size_t i = 0; i < fr.size(); ++i) {
      auto res = dec.decompose(fr[i]);
      for (Eigen::Index k = 0; k < res.frame.size(); ++k) {
        double want = (static_cast<std::size_t>(k) == i) ? 1.0 : 0.0;
        CHECK(std::abs(res.frame(k) - want) <= 1e-12);
      }
      CHECK(res.complement.cwiseAbs().maxCoeff() <= 1e-12);
    }
    for (int rep = 0; rep < 10; ++rep) {
      CMat M = random_su(n, rng);
      auto res = dec.decompose(M);
      CHECK(res.residual <= 1e-12);
    }
  }
}

TEST_CASE("derivative of the exponential map") {
  auto rng = make_rng(19);
  for (int n : {2, 3}) {
    CMat A = random_su(n, rng, 0.7);
    CMat B = random_su(n, rng, 0.9);
    CMat D = frechet_exp(A, B);
    double h = 1e-6;
    CMat fd = (expm(A + h * B) - expm(A - h * B)) / (2.0 * h);
    CHECK(max_abs(D - fd) <= 1e-9);
  }
}
