#include "blochhom/two_scale.hpp"

#include <cmath>
#include <numbers>

#include "blochhom/quadrature.hpp"

namespace blochhom {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

QuasiPeriodicEvaluator::QuasiPeriodicEvaluator(const FEFunction& phi, double k, double epsilon)
    : mesh_(phi.mesh), nodal_(phi.node_values()), k_(k), epsilon_(epsilon) {
  if (!phi.bc.folds_last_dof() && phi.bc.kind != BoundaryTreatment::Kind::free_ends)
    fail(ErrorCode::parameter_mismatch,
         "QuasiPeriodicEvaluator: phi must carry a quasi-periodic (or free) treatment on Y");
}

cplx QuasiPeriodicEvaluator::operator()(double x) const {
  const double t = x / epsilon_;
  const double cell = std::floor(t);
  const double y = t - cell;
  const cplx value = fem_detail::eval_nodal(mesh_, nodal_, mesh_.start + y * mesh_.length);
  if (k_ == 0.0) return value;
  return value * std::polar(1.0, two_pi * k_ * cell);
}

cplx eval_quasiperiodic(const FEFunction& phi, double k, double epsilon, double x) {
  return QuasiPeriodicEvaluator(phi, k, epsilon)(x);
}

TwoScaleMode assemble_pair_mode(const CellSpectrum& cell, int n, cplx d, cplx rate, double lambda1,
                                long ell, double epsilon, const Mesh1D& physical_mesh) {
  if (n < 0 || n >= cell.mode_count())
    fail(ErrorCode::parameter_mismatch, "assemble_pair_mode: band index outside cell spectrum");
  TwoScaleMode mode;
  mode.k = cell.k;
  mode.n = n;
  mode.ell = ell;
  mode.epsilon = epsilon;
  mode.lambda_nk = cell.eigenvalues[n];
  mode.lambda1 = lambda1;
  mode.gamma = mode.lambda_nk + epsilon * lambda1;
  mode.mesh = physical_mesh;
  mode.samples.resize(physical_mesh.node_count());
  const QuasiPeriodicEvaluator phi(cell.modes[n], cell.k, epsilon);
  for (int j = 0; j < physical_mesh.node_count(); ++j) {
    const double x = physical_mesh.node(j);
    mode.samples[j] = 2.0 * std::real(d * std::exp(rate * x) * phi(x));
  }
  return mode;
}

TwoScaleMode build_two_scale_mode(const CellSpectrum& cell, int n, const MacroSolution& macro,
                                  double epsilon, const Mesh1D& physical_mesh) {
  if (n < 0 || n >= cell.mode_count())
    fail(ErrorCode::parameter_mismatch, "build_two_scale_mode: band index outside cell spectrum");

  TwoScaleMode mode;
  mode.k = cell.k;
  mode.n = n;
  mode.ell = macro.ell;
  mode.epsilon = epsilon;
  mode.lambda_nk = cell.eigenvalues[n];
  mode.lambda1 = macro.lambda1;
  mode.gamma = mode.lambda_nk + epsilon * macro.lambda1;
  mode.mesh = physical_mesh;
  mode.samples.resize(physical_mesh.node_count());

  if (macro.branch == MacroBranch::k_nonzero) {
    if (cell.k == 0.0)
      fail(ErrorCode::parameter_mismatch, "build_two_scale_mode: k_nonzero macro with k=0 cell");
    const QuasiPeriodicEvaluator phi(cell.modes[n], cell.k, epsilon);
    for (int j = 0; j < physical_mesh.node_count(); ++j) {
      const double x = physical_mesh.node(j);
      const cplx ph = phi(x);
      mode.samples[j] = macro.u_plus(x) * ph + macro.u_minus(x) * std::conj(ph);
    }
    return mode;
  }

  // k = 0: sum over the multiplicity pair (n, m)
  if (cell.k != 0.0)
    fail(ErrorCode::parameter_mismatch, "build_two_scale_mode: k=0 macro with k!=0 cell");
  const auto& group = cell.group_of(n);
  if (group.size() < 2)
    fail(ErrorCode::parameter_mismatch,
         "build_two_scale_mode: k=0 macro needs a multiplicity pair");
  const int m = group[0] == n ? group[1] : group[0];
  const QuasiPeriodicEvaluator phi_n(cell.modes[n], 0.0, epsilon);
  const QuasiPeriodicEvaluator phi_m(cell.modes[m], 0.0, epsilon);
  for (int j = 0; j < physical_mesh.node_count(); ++j) {
    const double x = physical_mesh.node(j);
    mode.samples[j] = macro.u_n(x) * phi_n(x) + macro.u_m(x) * phi_m(x);
  }
  return mode;
}

TwoScaleField two_scale_transform(const FEFunction& u, double k, double epsilon, int y_elements) {
  const double cells_real = u.mesh.length / epsilon;
  const long cells = std::lround(cells_real);
  if (cells < 1 || std::abs(cells_real - static_cast<double>(cells)) > 1e-9 * cells_real)
    fail(ErrorCode::mesh_cell_mismatch,
         "two_scale_transform: domain must be a whole number of eps-cells");

  if (y_elements == 0) {
    if (u.mesh.elements % cells != 0)
      fail(ErrorCode::mesh_cell_mismatch,
           "two_scale_transform: mesh elements not divisible by cell count; pass y_elements");
    y_elements = static_cast<int>(u.mesh.elements / cells);
  }

  TwoScaleField field;
  field.k = k;
  field.epsilon = epsilon;
  field.x_start = u.mesh.start;
  field.y_mesh = Mesh1D::unit_cell(y_elements);
  field.values.resize(cells, field.y_mesh.node_count());

  const Eigen::VectorXcd nodal = u.node_values();
  for (long l = 0; l < cells; ++l) {
    const cplx phase = std::polar(1.0, -two_pi * k * static_cast<double>(l));
    for (int j = 0; j < field.y_mesh.node_count(); ++j) {
      const double y = field.y_mesh.node(j);
      const double x = u.mesh.start + epsilon * (static_cast<double>(l) + y);
      field.values(l, j) = fem_detail::eval_nodal(u.mesh, nodal, x) * phase;
    }
  }
  return field;
}

double field_l2_norm(const TwoScaleField& field) {
  // ||S u||^2 over Omega x Y: piecewise constant in x (cell width eps) times
  // the P2 quadrature of |values|^2 in y.
  double total = 0.0;
  const double h = field.y_mesh.h();
  for (Eigen::Index l = 0; l < field.values.rows(); ++l) {
    double cell_sum = 0.0;
    for (int e = 0; e < field.y_mesh.elements; ++e)
      for (const auto& q : quad::gauss3) {
        const auto N = quad::shapes(q.xi);
        const cplx v = field.values(l, 2 * e) * N[0] + field.values(l, 2 * e + 1) * N[1] +
                       field.values(l, 2 * e + 2) * N[2];
        cell_sum += q.w * h * std::norm(v);
      }
    total += field.epsilon * cell_sum;
  }
  return std::sqrt(total);
}

ResidualContext::ResidualContext(const PhysicalProblem& problem)
    : free_pencil_(assemble(problem.mesh(), problem.a.scaled(problem.epsilon),
                            problem.rho.scaled(problem.epsilon), BoundaryTreatment::free_ends())),
      epsilon_(problem.epsilon) {
  const auto interior = assemble(problem.mesh(), problem.a.scaled(problem.epsilon),
                                 problem.rho.scaled(problem.epsilon),
                                 BoundaryTreatment::dirichlet());
  interior_mass_.compute(interior.mass);
  if (interior_mass_.info() != Eigen::Success)
    fail(ErrorCode::solver_failure, "ResidualContext: interior mass factorization failed");
}

double ResidualContext::residual(const TwoScaleMode& mode) const {
  if (!mode.mesh.same_as(free_pencil_.mesh))
    fail(ErrorCode::mesh_mismatch, "residual_F: mode not sampled on the problem mesh");
  if (mode.gamma == 0.0)
    fail(ErrorCode::degenerate_normalization, "residual_F: gamma vanishes");

  const double eps2 = epsilon_ * epsilon_;
  const Eigen::VectorXcd kpsi = free_pencil_.stiffness * mode.samples;
  const Eigen::VectorXcd mpsi = free_pencil_.mass * mode.samples;
  const int nn = mode.mesh.node_count();
  const Eigen::VectorXcd r = (eps2 * kpsi - mode.gamma * mpsi).segment(1, nn - 2);
  const Eigen::VectorXcd den = (mode.gamma * mpsi).segment(1, nn - 2);

  const double num2 = std::real(r.dot(interior_mass_.solve(r)));
  const double den2 = std::real(den.dot(interior_mass_.solve(den)));
  if (!(den2 > 0.0))
    fail(ErrorCode::degenerate_normalization, "residual_F: zero denominator");
  return std::sqrt(std::max(0.0, num2) / den2);
}

double residual_F(const TwoScaleMode& mode, const PhysicalProblem& problem) {
  return ResidualContext(problem).residual(mode);
}

}  // namespace blochhom
