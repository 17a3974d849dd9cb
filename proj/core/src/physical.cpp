#include "blochhom/physical.hpp"

#include <cmath>

namespace blochhom {

int PhysicalProblem::cell_count() const {
  double cells = alpha / epsilon;
  long rounded = std::lround(cells);
  if (rounded < 1 || std::abs(cells - static_cast<double>(rounded)) > 1e-9 * cells)
    fail(ErrorCode::mesh_cell_mismatch,
         "PhysicalProblem: alpha/epsilon must be a whole number of cells");
  return static_cast<int>(rounded);
}

void PhysicalProblem::validate() const {
  if (!(alpha > 0.0) || !(epsilon > 0.0))
    fail(ErrorCode::invalid_argument, "PhysicalProblem: alpha and epsilon must be positive");
  const int cells = cell_count();
  if (n_elements % cells != 0)
    fail(ErrorCode::mesh_cell_mismatch,
         "PhysicalProblem: n_elements must be divisible by the cell count so element "
         "boundaries align with cell boundaries");
  if (bc != BoundaryTreatment::Kind::dirichlet && bc != BoundaryTreatment::Kind::neumann)
    fail(ErrorCode::invalid_argument, "PhysicalProblem: bc must be dirichlet or neumann");
}

namespace {

// Unit phase so that the first interior nodal value is real positive.
void fix_phase(FEFunction& f) {
  const Eigen::VectorXcd nodal = f.node_values();
  const double vmax = nodal.cwiseAbs().maxCoeff();
  cplx anchor = 0.0;
  for (int i = 1; i < nodal.size(); ++i)
    if (std::abs(nodal[i]) > 1e-8 * vmax) {
      anchor = nodal[i];
      break;
    }
  if (std::abs(anchor) > 0.0) f.coeffs *= std::abs(anchor) / anchor;
}

}  // namespace

PhysicalSpectrum solve_physical(const PhysicalProblem& problem, const ModeRange& range) {
  problem.validate();
  if (range.first < 1 || range.last < range.first)
    fail(ErrorCode::invalid_argument, "solve_physical: bad mode range");

  const auto bc = problem.bc == BoundaryTreatment::Kind::dirichlet
                      ? BoundaryTreatment::dirichlet()
                      : BoundaryTreatment::neumann();
  const auto pencil = assemble(problem.mesh(), problem.a.scaled(problem.epsilon),
                               problem.rho.scaled(problem.epsilon), bc);
  if (range.last > pencil.dof_count())
    fail(ErrorCode::invalid_argument, "solve_physical: mode range exceeds dof count");

  auto sol = solve_pencil(pencil, range.last);

  PhysicalSpectrum s;
  s.problem = problem;
  s.first_index = range.first;
  const int count = range.last - range.first + 1;
  s.eigenvalues = sol.eigenvalues.segment(range.first - 1, count);
  s.modes.reserve(count);
  for (int p = range.first; p <= range.last; ++p) {
    FEFunction& m = sol.modes[p - 1];
    const double nrm = l2_norm(m);
    if (nrm > 0.0) m.coeffs /= nrm;
    fix_phase(m);
    s.modes.push_back(std::move(m));
  }
  return s;
}

double PhysicalSpectrum::eigenvalue(int p) const {
  if (!has(p)) fail(ErrorCode::invalid_argument, "PhysicalSpectrum: index outside solved range");
  return eigenvalues[p - first_index];
}

const FEFunction& PhysicalSpectrum::mode(int p) const {
  if (!has(p)) fail(ErrorCode::invalid_argument, "PhysicalSpectrum: index outside solved range");
  return modes[static_cast<size_t>(p - first_index)];
}

double renormalized_eigenvalue(const PhysicalSpectrum& s, int p) {
  return s.problem.epsilon * s.problem.epsilon * s.eigenvalue(p);
}

double gradient_bound_check(const PhysicalSpectrum& s, int p) {
  return s.problem.epsilon * h1_seminorm(s.mode(p));
}

}  // namespace blochhom
