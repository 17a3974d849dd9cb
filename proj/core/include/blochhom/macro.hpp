#pragma once

#include <complex>

#include "blochhom/errors.hpp"

namespace blochhom {

using cplx = std::complex<double>;

/// alpha*k/eps = h + l with h = floor and l in [0,1); h=l=0 for k=0.
struct EpsilonDecomposition {
  long h = 0;
  double l = 0.0;
  double k = 0.0;
  double alpha = 1.0;
  double epsilon = 1.0;
};

EpsilonDecomposition decompose_epsilon(double alpha, double k, double epsilon);

enum class MacroBranch { k_nonzero, k_zero_lambda1_zero, k_zero_lambda1_nonzero };

/// Closed-form macroscopic eigenpair (lambda1, {u^sigma}) for rho = 1.
///
/// k != 0:  lambda1 = c_nn/alpha (2 i pi l_k - i ell pi),
///          u^k(x)  = d^k exp(-lambda1 x / c_nn),   d^k  =  i delta / phi_n^k(0),
///          u^-k(x) = d^-k exp(+lambda1 x / c_nn),  d^-k = -i delta / phi_n^-k(0).
/// k == 0:  lambda1 = ell pi c_nm / alpha,
///          u_m(x) = d1 cos(mu x) + d2 sin(mu x),  mu = lambda1 / c_nm,
///          u_n(x) = -c_nm u_m'(x) / lambda1  (= d1 sin - d2 cos),
///          d1 chosen so the boundary condition u_n phi_n(0) + u_m phi_m(0) = 0 holds.
struct MacroSolution {
  MacroBranch branch = MacroBranch::k_nonzero;
  double k = 0.0;
  double alpha = 1.0;
  long ell = 0;
  double lambda1 = 0.0;
  cplx lambda1_full = 0.0;  // before taking the real part (reality check)

  // k != 0 data
  cplx c_nn = 0.0;
  cplx phi0_plus = 0.0, phi0_minus = 0.0;
  cplx d_plus = 0.0, d_minus = 0.0;
  cplx rate_plus = 0.0, rate_minus = 0.0;
  double l_k = 0.0;
  double delta = 1.0;

  // k == 0 data
  cplx c_nm = 0.0;
  cplx d1 = 0.0, d2 = 0.0;
  double phi_n0 = 0.0, phi_m0 = 0.0;
  cplx mu = 0.0;

  cplx u_plus(double x) const;   // u^k
  cplx u_minus(double x) const;  // u^-k
  cplx u_n(double x) const;      // k=0 pair
  cplx u_m(double x) const;

  /// |boundary condition| at x (Eq. for k!=0 uses the l^k-modulated phases).
  double boundary_residual(double x) const;
  /// max over both macroscopic ODE components of |c u' + lambda1 b u| at x.
  double ode_residual(double x) const;
};

MacroSolution macro_eigenpair_k(cplx c_nn, double b_nn, cplx phi0_k, cplx phi0_mk, double alpha,
                                double l_k, long ell, double delta);

MacroSolution macro_eigenpair_0(cplx c_nm, double phi_n0, double phi_m0, double alpha, long ell,
                                cplx d2);

/// Neumann variant of the macroscopic boundary condition (derivative traces
/// replace the values phi(0)); recorded for reference, not used by pipelines.
double neumann_boundary_residual(const MacroSolution& s, cplx dphi0_plus, cplx dphi0_minus,
                                 double x);

/// Fully analytic two-scale mode for a = rho = 1: the brute-force oracle.
///   k != 0: psi(x) = -2 delta sin(pi(ell - 2 l^k) x / alpha + 2 pi (m+k) x / eps)
///   k == 0: psi(x) = d0 sin(ell pi x / alpha + 2 pi m x / eps)
struct AnalyticTwoScaleMode {
  double alpha = 1.0, epsilon = 1.0, k = 0.0;
  int m = 0;
  long ell = 0;
  double l_k = 0.0;
  double lambda_cell = 0.0;  // 4 pi^2 (m+k)^2
  double lambda1 = 0.0;
  double gamma = 0.0;        // lambda_cell + eps * lambda1
  double amplitude = 1.0;

  double psi(double x) const;
};

AnalyticTwoScaleMode analytic_two_scale_oracle(double alpha, double epsilon, double k, int m,
                                               long ell);

}  // namespace blochhom
