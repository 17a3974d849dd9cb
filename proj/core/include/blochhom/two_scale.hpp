#pragma once

#include <Eigen/SparseCholesky>
#include <vector>

#include "blochhom/bloch_cell.hpp"
#include "blochhom/macro.hpp"
#include "blochhom/physical.hpp"

namespace blochhom {

/// Quasi-periodic extension of a cell mode phi to the physical axis:
/// with t = x/eps, cell = floor(t), y = t - cell,
///   value = phi(y) * exp(2 i pi k cell).
/// Caches the nodal values of phi for repeated evaluation.
class QuasiPeriodicEvaluator {
 public:
  QuasiPeriodicEvaluator(const FEFunction& phi, double k, double epsilon);
  cplx operator()(double x) const;

 private:
  Mesh1D mesh_;
  Eigen::VectorXcd nodal_;
  double k_;
  double epsilon_;
};

cplx eval_quasiperiodic(const FEFunction& phi, double k, double epsilon, double x);

/// Assembled two-scale approximation (gamma, psi) sampled on the physical mesh.
struct TwoScaleMode {
  double k = 0.0;
  int n = 0;      // 0-based band index in the cell spectrum
  long ell = 0;   // report index of the macroscopic eigenvalue
  double epsilon = 1.0;
  double lambda_nk = 0.0;
  double lambda1 = 0.0;
  double gamma = 0.0;  // lambda_n^k + eps*lambda1
  Mesh1D mesh;
  Eigen::VectorXcd samples;  // nodal values of psi

  FEFunction as_fe() const { return FEFunction::from_node_values(mesh, samples); }
};

/// psi(x) = sum_sigma sum_m u_m^sigma(x) phi_m^sigma(x/eps), sampled at the
/// physical nodes. For k != 0 the sigma = -k term uses conjugated cell data;
/// for k = 0 the sum runs over the multiplicity pair (n, partner).
TwoScaleMode build_two_scale_mode(const CellSpectrum& cell, int n, const MacroSolution& macro,
                                  double epsilon, const Mesh1D& physical_mesh);

/// Conjugate-pair mode psi(x) = 2 Re(d e^{rate x} phi_n(x/eps)) with explicit
/// envelope amplitude and rate (the pipelines' candidate assembler, k != 0).
TwoScaleMode assemble_pair_mode(const CellSpectrum& cell, int n, cplx d, cplx rate, double lambda1,
                                long ell, double epsilon, const Mesh1D& physical_mesh);

/// Modulated two-scale transform S_k^eps u on the cell tensor grid:
/// values(l, j) = u(eps*l + eps*y_j) * exp(-2 i pi k l).
struct TwoScaleField {
  double k = 0.0;
  double epsilon = 1.0;
  Mesh1D y_mesh;             // unit cell grid carrying the y samples
  double x_start = 0.0;
  Eigen::MatrixXcd values;   // one row per cell, one column per y node
};

/// y_elements = 0 uses the per-cell restriction of u's mesh (which makes the
/// isometry check quadrature-exact).
TwoScaleField two_scale_transform(const FEFunction& u, double k, double epsilon,
                                  int y_elements = 0);

double field_l2_norm(const TwoScaleField& field);

/// Discrete weak-form residual ratio of Eq. eps^2 P^eps psi = gamma psi:
/// interior test functions applied to the unclamped psi, measured in the
/// inverse-mass norm, divided by the same norm of gamma*M*psi.
class ResidualContext {
 public:
  explicit ResidualContext(const PhysicalProblem& problem);
  double residual(const TwoScaleMode& mode) const;

 private:
  HermitianPencil free_pencil_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<cplx>> interior_mass_;
  double epsilon_;
};

double residual_F(const TwoScaleMode& mode, const PhysicalProblem& problem);

}  // namespace blochhom
