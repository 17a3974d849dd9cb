#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blochhom/macro.hpp"

using namespace blochhom;

namespace {
constexpr double pi = std::numbers::pi;
}  // namespace

TEST_CASE("epsilon decomposition") {
  const auto zero = decompose_epsilon(1.0, 0.0, 0.01);
  CHECK(zero.h == 0);
  CHECK(zero.l == 0.0);

  const auto d = decompose_epsilon(1.0, 0.3, 1.0 / 12.0);
  CHECK(d.h == 3);
  CHECK(d.l == doctest::Approx(0.6).epsilon(1e-12));

  const auto exact = decompose_epsilon(1.0, 0.16, 1.0 / 50.0);
  CHECK(exact.h == 8);
  CHECK(exact.l == 0.0);

  CHECK_THROWS_AS((void)decompose_epsilon(1.0, -0.1, 0.01), Error);
  CHECK_THROWS_AS((void)decompose_epsilon(1.0, 0.3, -0.5), Error);

  // invariant h + l = alpha k / eps over random draws
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> kd(0.0, 0.5), ed(0.005, 0.2), ad(0.5, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = ad(gen), k = kd(gen), eps = ed(gen);
    const auto dec = decompose_epsilon(alpha, k, eps);
    const double t = alpha * k / eps;
    CHECK(std::abs(dec.h + dec.l - t) <= 1e-12 * std::max(1.0, t));
    CHECK(dec.l >= 0.0);
    CHECK(dec.l < 1.0);
  }
}

TEST_CASE("k != 0 eigenpair: lambda1 = 0 iff ell = 2 l^k, affine in ell") {
  const cplx c(0.0, -10.0);
  const cplx phi0(0.9, 0.1);
  // l^k = 0.5 makes 2 l^k = 1 an admissible integer ell
  const auto s = macro_eigenpair_k(c, 1.0, phi0, std::conj(phi0), 1.0, 0.5, 1, 1.0);
  CHECK(std::abs(s.lambda1) < 1e-12);
  CHECK(std::abs(s.u_plus(0.3) - s.u_plus(0.9)) < 1e-14);  // constant envelope

  const auto s0 = macro_eigenpair_k(c, 1.0, phi0, std::conj(phi0), 1.0, 0.5, 0, 1.0);
  const auto s2 = macro_eigenpair_k(c, 1.0, phi0, std::conj(phi0), 1.0, 0.5, 2, 1.0);
  CHECK(std::abs(s0.lambda1 + s2.lambda1) < 1e-12);  // symmetric about the root
  const double slope = (s2.lambda1 - s0.lambda1) / 2.0;
  CHECK(slope == doctest::Approx(pi * c.imag()).epsilon(1e-12));
}

TEST_CASE("k != 0 eigenpair: free-coefficient closed form") {
  // a = rho = 1, band m at wavenumber k: c = 4 i pi (m+k)
  const double k = 0.3, alpha = 1.0, l_k = 0.6;
  const int m = -1;
  const cplx c(0.0, 4.0 * pi * (m + k));
  for (long ell : {-2L, 0L, 1L, 5L}) {
    const auto s = macro_eigenpair_k(c, 1.0, cplx(1.0, 0.0), cplx(1.0, 0.0), alpha, l_k, ell, 1.0);
    const double expect = -(4.0 * pi * pi / alpha) * (2.0 * l_k - ell) * (m + k);
    CHECK(s.lambda1 == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("k != 0 eigenpair: residual and conjugacy properties (random draws)") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> cd(0.5, 30.0), ld(0.0, 1.0), phd(-pi, pi), ad(0.5, 2.0);
  std::uniform_int_distribution<long> elld(-20, 20);
  std::uniform_real_distribution<double> deltad(0.2, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double cim = (trial % 2 ? 1.0 : -1.0) * cd(gen);
    const cplx c(0.0, cim);
    const cplx phi0 = std::polar(1.0, phd(gen));
    const double alpha = ad(gen), l_k = ld(gen), delta = deltad(gen);
    const long ell = elld(gen);
    const auto s = macro_eigenpair_k(c, 1.0, phi0, std::conj(phi0), alpha, l_k, ell, delta);

    CHECK(std::abs(s.lambda1_full.imag()) <= 1e-9 * std::max(1.0, std::abs(s.lambda1)));
    for (int i = 0; i <= 100; ++i) {
      const double x = alpha * i / 100.0;
      CHECK(s.ode_residual(x) <= 1e-9 * std::max(1.0, std::abs(s.u_plus(x))));
      // u^k and u^-k conjugate (Dirichlet pair)
      CHECK(std::abs(s.u_plus(x) - std::conj(s.u_minus(x))) < 1e-12);
    }
    CHECK(s.boundary_residual(0.0) <= 1e-9);
    CHECK(s.boundary_residual(alpha) <= 1e-9);
  }
}

TEST_CASE("k != 0 error branches") {
  CHECK_THROWS_AS(
      (void)macro_eigenpair_k(cplx(0.0, 0.0), 1.0, cplx(1.0, 0.0), cplx(1.0, 0.0), 1.0, 0.0, 1, 1.0),
      Error);
  CHECK_THROWS_AS(
      (void)macro_eigenpair_k(cplx(0.0, 5.0), 1.0, cplx(0.0, 0.0), cplx(0.0, 0.0), 1.0, 0.0, 1, 1.0),
      Error);
}

TEST_CASE("k = 0 eigenpair: ell = 0 gives constants") {
  const auto s = macro_eigenpair_0(cplx(4.0 * pi, 0.0), 1.2, 0.7, 1.0, 0, cplx(0.7, 0.0));
  CHECK(s.branch == MacroBranch::k_zero_lambda1_zero);
  CHECK(s.lambda1 == 0.0);
  CHECK(std::abs(s.u_n(0.1) - s.u_n(0.9)) < 1e-14);
  CHECK(std::abs(s.u_m(0.1) - s.u_m(0.9)) < 1e-14);
  CHECK(s.boundary_residual(0.0) < 1e-12);
}

TEST_CASE("k = 0 eigenpair: cos/sin oracle") {
  // normalized pair sqrt(2)cos(2 pi m y), sqrt(2)sin(2 pi m y): c(n,m) = 4 pi m
  const int m = 2;
  const double alpha = 1.0;
  const cplx c(4.0 * pi * m, 0.0);
  for (long ell : {1L, 3L}) {
    // phi_m(0) = 0 sub-branch: d2 = 0, d1 free
    const auto s = macro_eigenpair_0(c, std::sqrt(2.0), 0.0, alpha, ell, cplx(0.0, 0.0));
    CHECK(s.lambda1 == doctest::Approx(4.0 * m * ell * pi * pi / alpha).epsilon(1e-12));
    // u_n = d1 sin(ell pi x / alpha), u_m = d1 cos(ell pi x / alpha)
    for (double x : {0.0, 0.3, 0.85}) {
      CHECK(std::abs(s.u_n(x) - s.d1 * std::sin(ell * pi * x / alpha)) < 1e-12);
      CHECK(std::abs(s.u_m(x) - s.d1 * std::cos(ell * pi * x / alpha)) < 1e-12);
    }
    CHECK(s.boundary_residual(0.0) <= 1e-10);
    CHECK(s.boundary_residual(alpha) <= 1e-10);
  }
}

TEST_CASE("k = 0 eigenpair: generic boundary and ODE residuals") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> cd(0.5, 20.0), pd(-2.0, 2.0), ad(0.5, 2.0);
  std::uniform_int_distribution<long> elld(-10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx c(cd(gen) * (trial % 2 ? 1.0 : -1.0), 0.0);
    double pn = pd(gen), pm = pd(gen);
    if (std::abs(pm) < 0.1) pm = 0.5;
    const double alpha = ad(gen);
    const long ell = elld(gen);
    const auto s = macro_eigenpair_0(c, pn, pm, alpha, ell, cplx(pm, 0.0));
    CHECK(s.boundary_residual(0.0) <= 1e-9);
    CHECK(s.boundary_residual(alpha) <= 1e-9);
    for (int i = 0; i <= 100; ++i) {
      const double x = alpha * i / 100.0;
      CHECK(s.ode_residual(x) <=
            1e-9 * std::max(1.0, std::max(std::abs(s.u_n(x)), std::abs(s.u_m(x)))));
    }
    CHECK(std::abs(s.lambda1_full.imag()) <= 1e-9 * std::max(1.0, std::abs(s.lambda1)));
  }
}

TEST_CASE("k = 0 error branches") {
  CHECK_THROWS_AS((void)macro_eigenpair_0(cplx(0.0, 0.0), 1.0, 1.0, 1.0, 1, cplx(1.0, 0.0)),
                  Error);
  CHECK_THROWS_AS((void)macro_eigenpair_0(cplx(2.0, 0.0), 0.0, 0.0, 1.0, 1, cplx(0.0, 0.0)),
                  Error);
}

TEST_CASE("Neumann boundary variant vanishes for derivative-valued traces") {
  // cos-type data: phi'(0) plays the role of phi(0)
  const cplx c(0.0, 8.0);
  const cplx dphi0(0.0, 2.3);
  const auto s = macro_eigenpair_k(c, 1.0, dphi0, std::conj(dphi0), 1.0, 0.25, 3, 1.0);
  // the same cancellation algebra applies to any conjugate trace pair
  CHECK(neumann_boundary_residual(s, dphi0, std::conj(dphi0), 0.0) <= 1e-9);
  CHECK(neumann_boundary_residual(s, dphi0, std::conj(dphi0), 1.0) <= 1e-9);
}

TEST_CASE("analytic two-scale oracle") {
  // k=0, ell=0, m=1: psi is proportional to sin(2 pi x / eps)
  const auto o0 = analytic_two_scale_oracle(1.0, 0.1, 0.0, 1, 0);
  for (double x : {0.0, 0.05, 0.31, 1.0}) {
    const double expect = o0.amplitude * std::sin(2.0 * pi * x / 0.1);
    CHECK(o0.psi(x) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(o0.gamma == doctest::Approx(4.0 * pi * pi).epsilon(1e-14));

  // k != 0: gamma = 4 pi^2 (m+k)^2 + eps * lambda1, Dirichlet ends exactly
  const double k = 0.3, eps = 1.0 / 12.0;
  const auto o = analytic_two_scale_oracle(1.0, eps, k, -1, 1);
  const double l_k = 0.6;
  const double lam1 = -(4.0 * pi * pi) * (2.0 * l_k - 1.0) * (-1 + k);
  CHECK(o.lambda1 == doctest::Approx(lam1).epsilon(1e-12));
  CHECK(o.gamma == doctest::Approx(4.0 * pi * pi * 0.49 + eps * lam1).epsilon(1e-12));
  CHECK(std::abs(o.psi(0.0)) < 1e-12);
  CHECK(std::abs(o.psi(1.0)) < 1e-10);
}
