#include "blochhom/fem.hpp"

#include <cmath>
#include <numbers>

#include "blochhom/quadrature.hpp"

namespace blochhom {

BoundaryTreatment BoundaryTreatment::quasi_periodic(double k) {
  if (k < -0.5 || k >= 0.5)
    fail(ErrorCode::invalid_wavenumber, "quasi_periodic: k must lie in [-1/2, 1/2)");
  return {Kind::quasi_periodic, k};
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps a full nodal index to (active dof, weight) under the boundary treatment;
// weight 0 marks an eliminated Dirichlet dof.
struct DofMap {
  int index;
  cplx weight;
};

DofMap map_dof(int node, int node_count, const BoundaryTreatment& bc) {
  switch (bc.kind) {
    case BoundaryTreatment::Kind::dirichlet:
      if (node == 0 || node == node_count - 1) return {-1, 0.0};
      return {node - 1, 1.0};
    case BoundaryTreatment::Kind::quasi_periodic:
      if (node == node_count - 1) return {0, std::polar(1.0, two_pi * bc.k)};
      return {node, 1.0};
    default:
      return {node, 1.0};
  }
}

}  // namespace

int FEFunction::active_dof_count(const Mesh1D& mesh, const BoundaryTreatment& bc) {
  int nn = mesh.node_count();
  switch (bc.kind) {
    case BoundaryTreatment::Kind::dirichlet:
      return nn - 2;
    case BoundaryTreatment::Kind::quasi_periodic:
      return nn - 1;
    default:
      return nn;
  }
}

HermitianPencil assemble(const Mesh1D& mesh, const CoefficientProfile& a,
                         const CoefficientProfile& rho, const BoundaryTreatment& bc) {
  if (!(a.lower_bound() > 0.0) || !(rho.lower_bound() > 0.0))
    fail(ErrorCode::invalid_coefficient, "assemble: coefficient bounds must be positive");

  const int nn = mesh.node_count();
  const int ndof = FEFunction::active_dof_count(mesh, bc);
  const double h = mesh.h();

  std::vector<Eigen::Triplet<cplx>> kt, mt;
  kt.reserve(static_cast<size_t>(9) * mesh.elements);
  mt.reserve(static_cast<size_t>(9) * mesh.elements);

  for (int e = 0; e < mesh.elements; ++e) {
    const double xl = mesh.start + e * h;
    double ke[3][3] = {};
    double me[3][3] = {};
    for (const auto& q : quad::gauss3) {
      const double x = xl + q.xi * h;
      const auto N = quad::shapes(q.xi);
      const auto dN = quad::shape_derivs(q.xi);
      const double wa = q.w * h * a(x);
      const double wr = q.w * h * rho(x);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          ke[i][j] += wa * dN[i] * dN[j] / (h * h);
          me[i][j] += wr * N[i] * N[j];
        }
    }
    const int base = 2 * e;
    for (int i = 0; i < 3; ++i) {
      const auto di = map_dof(base + i, nn, bc);
      if (di.index < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const auto dj = map_dof(base + j, nn, bc);
        if (dj.index < 0) continue;
        // entry (row=i, col=j) of the sesquilinear form: test weight conjugated
        const cplx w = std::conj(di.weight) * dj.weight;
        kt.emplace_back(di.index, dj.index, w * ke[i][j]);
        mt.emplace_back(di.index, dj.index, w * me[i][j]);
      }
    }
  }

  HermitianPencil p;
  p.mesh = mesh;
  p.bc = bc;
  p.stiffness.resize(ndof, ndof);
  p.mass.resize(ndof, ndof);
  p.stiffness.setFromTriplets(kt.begin(), kt.end());
  p.mass.setFromTriplets(mt.begin(), mt.end());
  return p;
}

FEFunction::FEFunction(const Mesh1D& mesh_, const BoundaryTreatment& bc_, Eigen::VectorXcd coeffs_)
    : mesh(mesh_), bc(bc_), coeffs(std::move(coeffs_)) {
  if (coeffs.size() != active_dof_count(mesh, bc))
    fail(ErrorCode::invalid_argument, "FEFunction: coefficient length does not match dof count");
}

FEFunction FEFunction::from_node_values(const Mesh1D& mesh, Eigen::VectorXcd values) {
  if (values.size() != mesh.node_count())
    fail(ErrorCode::invalid_argument, "from_node_values: need one value per node");
  return FEFunction(mesh, BoundaryTreatment::free_ends(), std::move(values));
}

Eigen::VectorXcd FEFunction::node_values() const {
  const int nn = mesh.node_count();
  Eigen::VectorXcd v(nn);
  switch (bc.kind) {
    case BoundaryTreatment::Kind::dirichlet:
      v[0] = 0.0;
      v.segment(1, nn - 2) = coeffs;
      v[nn - 1] = 0.0;
      break;
    case BoundaryTreatment::Kind::quasi_periodic:
      v.head(nn - 1) = coeffs;
      v[nn - 1] = coeffs[0] * std::polar(1.0, two_pi * bc.k);
      break;
    default:
      v = coeffs;
  }
  return v;
}

namespace fem_detail {

cplx eval_nodal(const Mesh1D& mesh, const Eigen::VectorXcd& nodal, double x) {
  const int e = mesh.element_of(x);
  const double xi = (x - mesh.start) / mesh.h() - e;
  const auto N = quad::shapes(xi);
  return nodal[2 * e] * N[0] + nodal[2 * e + 1] * N[1] + nodal[2 * e + 2] * N[2];
}

cplx eval_nodal_deriv(const Mesh1D& mesh, const Eigen::VectorXcd& nodal, double x) {
  const int e = mesh.element_of(x);
  const double xi = (x - mesh.start) / mesh.h() - e;
  const auto dN = quad::shape_derivs(xi);
  return (nodal[2 * e] * dN[0] + nodal[2 * e + 1] * dN[1] + nodal[2 * e + 2] * dN[2]) / mesh.h();
}

}  // namespace fem_detail

cplx FEFunction::evaluate(double x) const {
  if (!mesh.contains(x)) fail(ErrorCode::out_of_domain, "evaluate: x outside mesh domain");
  return fem_detail::eval_nodal(mesh, node_values(), x);
}

cplx FEFunction::derivative(double x) const {
  if (!mesh.contains(x)) fail(ErrorCode::out_of_domain, "derivative: x outside mesh domain");
  return fem_detail::eval_nodal_deriv(mesh, node_values(), x);
}

namespace {

void require_same_layout(const FEFunction& f, const FEFunction& g) {
  if (!f.mesh.same_as(g.mesh) || !(f.bc == g.bc))
    fail(ErrorCode::mesh_mismatch, "inner product requires identical mesh and boundary treatment");
}

template <class Kernel>
cplx quadrature_sum(const Mesh1D& mesh, Kernel&& kernel) {
  cplx total = 0.0;
  const double h = mesh.h();
  for (int e = 0; e < mesh.elements; ++e) {
    const double xl = mesh.start + e * h;
    for (const auto& q : quad::gauss3) total += q.w * h * kernel(e, q.xi, xl + q.xi * h);
  }
  return total;
}

}  // namespace

cplx l2_inner(const FEFunction& f, const FEFunction& g) {
  require_same_layout(f, g);
  const Eigen::VectorXcd fv = f.node_values();
  const Eigen::VectorXcd gv = g.node_values();
  return quadrature_sum(f.mesh, [&](int e, double xi, double) {
    const auto N = quad::shapes(xi);
    cplx fx = fv[2 * e] * N[0] + fv[2 * e + 1] * N[1] + fv[2 * e + 2] * N[2];
    cplx gx = gv[2 * e] * N[0] + gv[2 * e + 1] * N[1] + gv[2 * e + 2] * N[2];
    return fx * std::conj(gx);
  });
}

double l2_norm(const FEFunction& f) {
  const Eigen::VectorXcd fv = f.node_values();
  cplx s = quadrature_sum(f.mesh, [&](int e, double xi, double) {
    const auto N = quad::shapes(xi);
    cplx fx = fv[2 * e] * N[0] + fv[2 * e + 1] * N[1] + fv[2 * e + 2] * N[2];
    return cplx(std::norm(fx), 0.0);
  });
  return std::sqrt(std::max(0.0, s.real()));
}

cplx weighted_inner(const FEFunction& f, const FEFunction& g, const CoefficientProfile& rho) {
  require_same_layout(f, g);
  const Eigen::VectorXcd fv = f.node_values();
  const Eigen::VectorXcd gv = g.node_values();
  return quadrature_sum(f.mesh, [&](int e, double xi, double x) {
    const auto N = quad::shapes(xi);
    cplx fx = fv[2 * e] * N[0] + fv[2 * e + 1] * N[1] + fv[2 * e + 2] * N[2];
    cplx gx = gv[2 * e] * N[0] + gv[2 * e + 1] * N[1] + gv[2 * e + 2] * N[2];
    return rho(x) * fx * std::conj(gx);
  });
}

double h1_seminorm(const FEFunction& f) {
  const Eigen::VectorXcd fv = f.node_values();
  const double h = f.mesh.h();
  cplx s = quadrature_sum(f.mesh, [&](int e, double xi, double) {
    const auto dN = quad::shape_derivs(xi);
    cplx dx = (fv[2 * e] * dN[0] + fv[2 * e + 1] * dN[1] + fv[2 * e + 2] * dN[2]) / h;
    return cplx(std::norm(dx), 0.0);
  });
  return std::sqrt(std::max(0.0, s.real()));
}

}  // namespace blochhom
