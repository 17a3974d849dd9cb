#pragma once

#include <vector>

#include "blochhom/fem.hpp"

namespace blochhom {

/// The eps-periodic spectral problem on Omega = (0, alpha):
///   -(a(x/eps) w')' = lambda rho(x/eps) w,  Dirichlet or Neumann ends.
/// Omega must be a whole number of eps-cells and the mesh must align with them.
struct PhysicalProblem {
  double alpha = 1.0;
  double epsilon = 0.02;
  CoefficientProfile a = CoefficientProfile::constant(1.0);
  CoefficientProfile rho = CoefficientProfile::constant(1.0);
  BoundaryTreatment::Kind bc = BoundaryTreatment::Kind::dirichlet;
  int n_elements = 2000;

  int cell_count() const;
  Mesh1D mesh() const { return Mesh1D(0.0, alpha, n_elements); }
  void validate() const;
};

/// 1-based rank interval [first, last] in ascending eigenvalue order.
struct ModeRange {
  int first = 1;
  int last = 1;
};

struct PhysicalSpectrum {
  PhysicalProblem problem;
  int first_index = 1;             // p of eigenvalues[0]
  Eigen::VectorXd eigenvalues;     // ascending slice
  std::vector<FEFunction> modes;   // L2(Omega)-normalized, phase-fixed

  bool has(int p) const { return p >= first_index && p < first_index + eigenvalues.size(); }
  double eigenvalue(int p) const;
  const FEFunction& mode(int p) const;
};

PhysicalSpectrum solve_physical(const PhysicalProblem& problem, const ModeRange& range);

/// eps^2 * lambda_p, the renormalized eigenvalue whose limit is a Bloch eigenvalue.
double renormalized_eigenvalue(const PhysicalSpectrum& s, int p);

/// || eps * d/dx w_p ||_{L2(Omega)} — diagnostic for the uniform gradient bound.
double gradient_bound_check(const PhysicalSpectrum& s, int p);

}  // namespace blochhom
