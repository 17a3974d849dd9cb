#include "blochhom/macro.hpp"

#include <cmath>
#include <numbers>

namespace blochhom {

namespace {
constexpr double pi = std::numbers::pi;
constexpr cplx iu{0.0, 1.0};
}  // namespace

EpsilonDecomposition decompose_epsilon(double alpha, double k, double epsilon) {
  if (!(alpha > 0.0) || !(epsilon > 0.0))
    fail(ErrorCode::invalid_argument, "decompose_epsilon: alpha and epsilon must be positive");
  if (k < 0.0 || k >= 0.5)
    fail(ErrorCode::invalid_wavenumber,
         "decompose_epsilon: k must lie in [0, 1/2); negative k by conjugation");

  EpsilonDecomposition d;
  d.k = k;
  d.alpha = alpha;
  d.epsilon = epsilon;
  if (k == 0.0) return d;

  const double t = alpha * k / epsilon;
  double h = std::floor(t);
  double l = t - h;
  // snap near-integer ratios so exact cell alignments give l = 0
  if (l > 1.0 - 1e-9 * std::max(1.0, t)) {
    h += 1.0;
    l = 0.0;
  } else if (l < 1e-9 * std::max(1.0, t)) {
    l = 0.0;
  }
  d.h = static_cast<long>(h);
  d.l = l;
  return d;
}

MacroSolution macro_eigenpair_k(cplx c_nn, double b_nn, cplx phi0_k, cplx phi0_mk, double alpha,
                                double l_k, long ell, double delta) {
  if (std::abs(c_nn) < 1e-10)
    fail(ErrorCode::degenerate_macro_model,
         "macro_eigenpair_k: c(k,n,n) vanishes, no macroscopic equation");
  if (std::abs(phi0_k) < 1e-10 || std::abs(phi0_mk) < 1e-10)
    fail(ErrorCode::periodic_degenerate_mode,
         "macro_eigenpair_k: phi_n^k(0) vanishes, mode is effectively periodic");
  if (!(b_nn > 0.0)) fail(ErrorCode::invalid_argument, "macro_eigenpair_k: b_nn must be positive");

  MacroSolution s;
  s.branch = MacroBranch::k_nonzero;
  s.alpha = alpha;
  s.ell = ell;
  s.l_k = l_k;
  s.delta = delta;
  s.c_nn = c_nn;
  s.phi0_plus = phi0_k;
  s.phi0_minus = phi0_mk;
  s.lambda1_full = c_nn / (alpha * b_nn) * (2.0 * iu * pi * l_k - iu * pi * static_cast<double>(ell));
  s.lambda1 = s.lambda1_full.real();
  s.d_plus = iu * delta / phi0_k;
  s.d_minus = -iu * delta / phi0_mk;
  s.rate_plus = -s.lambda1_full * b_nn / c_nn;
  s.rate_minus = s.lambda1_full * b_nn / c_nn;
  return s;
}

MacroSolution macro_eigenpair_0(cplx c_nm, double phi_n0, double phi_m0, double alpha, long ell,
                                cplx d2) {
  if (std::abs(c_nm) < 1e-10)
    fail(ErrorCode::degenerate_macro_model,
         "macro_eigenpair_0: c(0,n,m) vanishes, no macroscopic equation");
  const bool m_zero = std::abs(phi_m0) < 1e-10;
  const bool n_zero = std::abs(phi_n0) < 1e-10;
  if (m_zero && n_zero)
    fail(ErrorCode::underdetermined_boundary,
         "macro_eigenpair_0: phi_n(0) = phi_m(0) = 0, boundary conditions vanish");

  MacroSolution s;
  s.k = 0.0;
  s.alpha = alpha;
  s.ell = ell;
  s.c_nm = c_nm;
  s.phi_n0 = phi_n0;
  s.phi_m0 = phi_m0;
  s.lambda1_full = static_cast<double>(ell) * pi * c_nm / alpha;
  s.lambda1 = s.lambda1_full.real();
  s.branch = ell == 0 ? MacroBranch::k_zero_lambda1_zero : MacroBranch::k_zero_lambda1_nonzero;
  if (m_zero) {
    // alternative sub-branch: d2 = 0, d1 free
    s.d2 = 0.0;
    s.d1 = 1.0;
  } else {
    s.d2 = d2;
    s.d1 = d2 * phi_n0 / phi_m0;
  }
  s.mu = s.lambda1_full / c_nm;  // = ell*pi/alpha, real
  return s;
}

cplx MacroSolution::u_plus(double x) const { return d_plus * std::exp(rate_plus * x); }
cplx MacroSolution::u_minus(double x) const { return d_minus * std::exp(rate_minus * x); }

cplx MacroSolution::u_m(double x) const {
  return d1 * std::cos(mu.real() * x) + d2 * std::sin(mu.real() * x);
}

cplx MacroSolution::u_n(double x) const {
  return d1 * std::sin(mu.real() * x) - d2 * std::cos(mu.real() * x);
}

double MacroSolution::boundary_residual(double x) const {
  if (branch == MacroBranch::k_nonzero) {
    const cplx phase = std::exp(2.0 * iu * pi * l_k * x / alpha);
    return std::abs(u_plus(x) * phi0_plus * phase + u_minus(x) * phi0_minus / phase);
  }
  return std::abs(u_n(x) * phi_n0 + u_m(x) * phi_m0);
}

double MacroSolution::ode_residual(double x) const {
  if (branch == MacroBranch::k_nonzero) {
    const cplx rp = c_nn * rate_plus * u_plus(x) + lambda1 * u_plus(x);
    const cplx rm = -c_nn * rate_minus * u_minus(x) + lambda1 * u_minus(x);
    return std::max(std::abs(rp), std::abs(rm));
  }
  const double m = mu.real();
  const cplx dum = m * (-d1 * std::sin(m * x) + d2 * std::cos(m * x));
  const cplx dun = m * (d1 * std::cos(m * x) + d2 * std::sin(m * x));
  const cplx r1 = c_nm * dum + lambda1 * u_n(x);
  const cplx r2 = -c_nm * dun + lambda1 * u_m(x);
  return std::max(std::abs(r1), std::abs(r2));
}

double neumann_boundary_residual(const MacroSolution& s, cplx dphi0_plus, cplx dphi0_minus,
                                 double x) {
  const cplx phase = std::exp(2.0 * iu * pi * s.l_k * x / s.alpha);
  return std::abs(s.u_plus(x) * dphi0_plus * phase + s.u_minus(x) * dphi0_minus / phase);
}

double AnalyticTwoScaleMode::psi(double x) const {
  if (k == 0.0)
    return amplitude * std::sin(static_cast<double>(ell) * pi * x / alpha +
                                2.0 * pi * m * x / epsilon);
  return -2.0 * amplitude *
         std::sin(pi * (static_cast<double>(ell) - 2.0 * l_k) * x / alpha +
                  2.0 * pi * (m + k) * x / epsilon);
}

AnalyticTwoScaleMode analytic_two_scale_oracle(double alpha, double epsilon, double k, int m,
                                               long ell) {
  AnalyticTwoScaleMode o;
  o.alpha = alpha;
  o.epsilon = epsilon;
  o.k = k;
  o.m = m;
  o.ell = ell;
  if (k == 0.0) {
    o.lambda_cell = 4.0 * pi * pi * m * m;
    o.lambda1 = 4.0 * m * static_cast<double>(ell) * pi * pi / alpha;
  } else {
    o.l_k = decompose_epsilon(alpha, k, epsilon).l;
    o.lambda_cell = 4.0 * pi * pi * (m + k) * (m + k);
    o.lambda1 = -(4.0 * pi * pi / alpha) * (2.0 * o.l_k - static_cast<double>(ell)) * (m + k);
  }
  o.gamma = o.lambda_cell + epsilon * o.lambda1;
  return o;
}

}  // namespace blochhom
