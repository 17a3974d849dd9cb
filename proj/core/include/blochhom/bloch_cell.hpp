#pragma once

#include <vector>

#include "blochhom/fem.hpp"

namespace blochhom {

/// Bloch cell spectrum at one wavenumber k: ascending eigenvalues lambda_n^k
/// with L2(Y)-normalized, phase-fixed eigenvectors on the unit cell.
struct CellSpectrum {
  double k = 0.0;
  Mesh1D mesh;
  Eigen::VectorXd eigenvalues;
  std::vector<FEFunction> modes;
  /// Indices (0-based) partitioned by equal eigenvalue within relative tolerance.
  std::vector<std::vector<int>> multiplicity_groups;

  int mode_count() const { return static_cast<int>(modes.size()); }
  /// The group containing 0-based index n.
  const std::vector<int>& group_of(int n) const;
};

/// c(k,n,m) and b(k,n,m) over a set of mode indices:
///   c = int_Y a (phi_m' conj(phi_n) - phi_m conj(phi_n')) dy   (skew-Hermitian)
///   b = int_Y rho phi_m conj(phi_n) dy                          (Hermitian, b_nn > 0)
struct CouplingCoefficients {
  double k = 0.0;
  std::vector<int> indices;  // 0-based mode indices the matrices refer to
  Eigen::MatrixXcd c;
  Eigen::MatrixXcd b;
};

CellSpectrum solve_cell(const CoefficientProfile& a, const CoefficientProfile& rho, double k,
                        int n_elements, int num_modes);

/// The -k spectrum by conjugation (no second eigensolve): identical eigenvalues,
/// conjugated eigenvectors.
CellSpectrum conjugate_spectrum(const CellSpectrum& s);

CouplingCoefficients coupling(const CellSpectrum& s, const CoefficientProfile& a,
                              const CoefficientProfile& rho, const std::vector<int>& indices);

std::vector<CellSpectrum> band_sweep(const CoefficientProfile& a, const CoefficientProfile& rho,
                                     const std::vector<double>& k_grid, int n_elements,
                                     int num_modes, int workers = 1);

}  // namespace blochhom
