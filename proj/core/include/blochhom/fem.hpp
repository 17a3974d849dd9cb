#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "blochhom/coefficient.hpp"
#include "blochhom/mesh.hpp"

namespace blochhom {

using cplx = std::complex<double>;

/// Boundary treatment of the 1D spectral pencil.
///   dirichlet      - both endpoint dofs eliminated
///   quasi_periodic - last nodal dof folded onto the first with phase e^{2i pi k}
///   neumann/free   - all dofs kept (natural boundary)
struct BoundaryTreatment {
  enum class Kind { dirichlet, neumann, quasi_periodic, free_ends };
  Kind kind = Kind::free_ends;
  double k = 0.0;  // quasi-periodic wavenumber, k in [-1/2, 1/2)

  static BoundaryTreatment dirichlet() { return {Kind::dirichlet, 0.0}; }
  static BoundaryTreatment neumann() { return {Kind::neumann, 0.0}; }
  static BoundaryTreatment free_ends() { return {Kind::free_ends, 0.0}; }
  static BoundaryTreatment quasi_periodic(double k);

  bool operator==(const BoundaryTreatment& o) const { return kind == o.kind && k == o.k; }
  bool eliminates_endpoints() const { return kind == Kind::dirichlet; }
  bool folds_last_dof() const { return kind == Kind::quasi_periodic; }
};

/// Discrete generalized Hermitian pencil (K, M) for one boundary treatment.
/// K and M are sparse (bandwidth 2 except for the quasi-periodic fold).
struct HermitianPencil {
  Eigen::SparseMatrix<cplx> stiffness;
  Eigen::SparseMatrix<cplx> mass;
  Mesh1D mesh;
  BoundaryTreatment bc;

  int dof_count() const { return static_cast<int>(stiffness.rows()); }
  /// True when the active matrices keep the element band structure
  /// (no wrap-around coupling), so a banded eigensolver applies.
  bool is_banded() const { return !bc.folds_last_dof(); }
};

HermitianPencil assemble(const Mesh1D& mesh, const CoefficientProfile& a,
                         const CoefficientProfile& rho, const BoundaryTreatment& bc);

/// A P2 finite-element function: active-dof coefficients plus the boundary
/// treatment needed to reconstruct the eliminated nodal values.
struct FEFunction {
  Mesh1D mesh;
  BoundaryTreatment bc;
  Eigen::VectorXcd coeffs;  // one entry per active dof

  static int active_dof_count(const Mesh1D& mesh, const BoundaryTreatment& bc);

  FEFunction() = default;
  FEFunction(const Mesh1D& mesh_, const BoundaryTreatment& bc_, Eigen::VectorXcd coeffs_);

  /// All 2N+1 nodal values, eliminated dofs reconstructed
  /// (Dirichlet zeros, quasi-periodic phase copy of the first node).
  Eigen::VectorXcd node_values() const;

  cplx evaluate(double x) const;
  cplx derivative(double x) const;

  /// Build from explicit nodal values (free boundary treatment).
  static FEFunction from_node_values(const Mesh1D& mesh, Eigen::VectorXcd values);
  /// Nodal interpolant of a callable f(x).
  template <class F>
  static FEFunction interpolate(const Mesh1D& mesh, F&& f) {
    Eigen::VectorXcd v(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) v[i] = cplx(f(mesh.node(i)));
    return from_node_values(mesh, std::move(v));
  }
};

struct EigenModes {
  Eigen::VectorXd eigenvalues;     // real, ascending
  std::vector<FEFunction> modes;   // M-orthonormal: v_i^H M v_j = delta_ij
};

/// First num_modes eigenpairs of K v = lambda M v, ascending.
/// Banded LAPACK backend for Dirichlet/Neumann/free pencils, dense Hermitian
/// backend for quasi-periodic ones.
EigenModes solve_pencil(const HermitianPencil& pencil, int num_modes);

double l2_norm(const FEFunction& f);
cplx l2_inner(const FEFunction& f, const FEFunction& g);

/// Integral of rho * f * conj(g) with the assembly quadrature.
cplx weighted_inner(const FEFunction& f, const FEFunction& g, const CoefficientProfile& rho);

/// L2 norm of f' (same quadrature).
double h1_seminorm(const FEFunction& f);

namespace fem_detail {
/// Evaluate a nodal-value vector (2N+1 entries) and its derivative at x.
cplx eval_nodal(const Mesh1D& mesh, const Eigen::VectorXcd& nodal, double x);
cplx eval_nodal_deriv(const Mesh1D& mesh, const Eigen::VectorXcd& nodal, double x);
}  // namespace fem_detail

}  // namespace blochhom
