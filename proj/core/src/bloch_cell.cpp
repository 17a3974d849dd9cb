#include "blochhom/bloch_cell.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "blochhom/quadrature.hpp"

namespace blochhom {

namespace {

// Rotate by a unit scalar so that phi(0) is real and >= 0; if phi(0) is
// negligible, make the largest-magnitude nodal value real positive instead.
void fix_phase(FEFunction& f) {
  const Eigen::VectorXcd nodal = f.node_values();
  double vmax = nodal.cwiseAbs().maxCoeff();
  cplx anchor = nodal[0];
  if (std::abs(anchor) < 1e-8 * vmax) {
    int imax = 0;
    nodal.cwiseAbs().maxCoeff(&imax);
    anchor = nodal[imax];
  }
  if (std::abs(anchor) > 0.0) f.coeffs *= std::abs(anchor) / anchor;
}

// Rotate a double eigenspace at k=0 to real-valued M-orthonormal vectors:
// modified Gram-Schmidt over the real/imaginary parts in the rho-weighted
// inner product.
void realify_group(std::vector<FEFunction>& modes, const std::vector<int>& group,
                   const CoefficientProfile& rho) {
  std::vector<Eigen::VectorXcd> candidates;
  for (int idx : group) {
    candidates.push_back(modes[idx].coeffs.real().cast<cplx>());
    candidates.push_back((-modes[idx].coeffs.imag()).cast<cplx>());
  }
  const Mesh1D& mesh = modes[group[0]].mesh;
  const BoundaryTreatment bc = modes[group[0]].bc;
  std::vector<Eigen::VectorXcd> basis;
  for (auto& cand : candidates) {
    FEFunction f(mesh, bc, cand);
    for (const auto& bvec : basis) {
      FEFunction b(mesh, bc, bvec);
      cand -= weighted_inner(f, b, rho) * bvec;
      f = FEFunction(mesh, bc, cand);
    }
    double nrm = std::sqrt(std::abs(weighted_inner(f, f, rho).real()));
    if (nrm > 1e-6) {
      basis.push_back(cand / nrm);
      if (basis.size() == group.size()) break;
    }
  }
  if (basis.size() != group.size()) return;  // keep the solver's vectors
  for (size_t j = 0; j < group.size(); ++j) modes[group[j]].coeffs = basis[j];
}

}  // namespace

const std::vector<int>& CellSpectrum::group_of(int n) const {
  for (const auto& g : multiplicity_groups)
    if (std::find(g.begin(), g.end(), n) != g.end()) return g;
  fail(ErrorCode::invalid_argument, "group_of: index outside spectrum");
}

CellSpectrum solve_cell(const CoefficientProfile& a, const CoefficientProfile& rho, double k,
                        int n_elements, int num_modes) {
  if (num_modes < 1) fail(ErrorCode::invalid_argument, "solve_cell: num_modes must be >= 1");
  const Mesh1D mesh = Mesh1D::unit_cell(n_elements);
  const auto pencil = assemble(mesh, a, rho, BoundaryTreatment::quasi_periodic(k));
  auto sol = solve_pencil(pencil, num_modes);

  CellSpectrum s;
  s.k = k;
  s.mesh = mesh;
  s.eigenvalues = std::move(sol.eigenvalues);
  s.modes = std::move(sol.modes);

  // group by eigenvalue gap, relative tolerance 1e-8
  std::vector<int> current{0};
  for (int i = 1; i < s.mode_count(); ++i) {
    if (std::abs(s.eigenvalues[i] - s.eigenvalues[i - 1]) <=
        1e-8 * std::max(1.0, std::abs(s.eigenvalues[i])))
      current.push_back(i);
    else {
      s.multiplicity_groups.push_back(std::move(current));
      current = {i};
    }
  }
  s.multiplicity_groups.push_back(std::move(current));

  if (k == 0.0)
    for (const auto& g : s.multiplicity_groups)
      if (g.size() > 1) realify_group(s.modes, g, rho);

  for (auto& m : s.modes) {
    double nrm = l2_norm(m);
    if (nrm > 0.0) m.coeffs /= nrm;
    fix_phase(m);
  }
  return s;
}

CellSpectrum conjugate_spectrum(const CellSpectrum& s) {
  CellSpectrum out;
  out.k = (s.k == 0.0) ? 0.0 : -s.k;
  out.mesh = s.mesh;
  out.eigenvalues = s.eigenvalues;
  out.multiplicity_groups = s.multiplicity_groups;
  const BoundaryTreatment bc = BoundaryTreatment::quasi_periodic(out.k);
  out.modes.reserve(s.modes.size());
  for (const auto& m : s.modes) out.modes.emplace_back(s.mesh, bc, m.coeffs.conjugate());
  return out;
}

CouplingCoefficients coupling(const CellSpectrum& s, const CoefficientProfile& a,
                              const CoefficientProfile& rho, const std::vector<int>& indices) {
  for (int idx : indices)
    if (idx < 0 || idx >= s.mode_count())
      fail(ErrorCode::invalid_argument, "coupling: index outside spectrum");

  const Mesh1D& mesh = s.mesh;
  const double h = mesh.h();
  const int nm = static_cast<int>(indices.size());

  // cache nodal values once; evaluate per quadrature point
  std::vector<Eigen::VectorXcd> nodal;
  nodal.reserve(nm);
  for (int idx : indices) nodal.push_back(s.modes[idx].node_values());

  CouplingCoefficients cc;
  cc.k = s.k;
  cc.indices = indices;
  cc.c = Eigen::MatrixXcd::Zero(nm, nm);
  cc.b = Eigen::MatrixXcd::Zero(nm, nm);

  Eigen::VectorXcd vals(nm), ders(nm);
  for (int e = 0; e < mesh.elements; ++e) {
    const double xl = mesh.start + e * h;
    for (const auto& q : quad::gauss3) {
      const double y = xl + q.xi * h;
      const auto N = quad::shapes(q.xi);
      const auto dN = quad::shape_derivs(q.xi);
      for (int i = 0; i < nm; ++i) {
        const auto& nv = nodal[i];
        vals[i] = nv[2 * e] * N[0] + nv[2 * e + 1] * N[1] + nv[2 * e + 2] * N[2];
        ders[i] = (nv[2 * e] * dN[0] + nv[2 * e + 1] * dN[1] + nv[2 * e + 2] * dN[2]) / h;
      }
      const double wa = q.w * h * a(y);
      const double wr = q.w * h * rho(y);
      for (int n = 0; n < nm; ++n)
        for (int m = 0; m < nm; ++m) {
          cc.c(n, m) += wa * (ders[m] * std::conj(vals[n]) - vals[m] * std::conj(ders[n]));
          cc.b(n, m) += wr * vals[m] * std::conj(vals[n]);
        }
    }
  }
  return cc;
}

std::vector<CellSpectrum> band_sweep(const CoefficientProfile& a, const CoefficientProfile& rho,
                                     const std::vector<double>& k_grid, int n_elements,
                                     int num_modes, int workers) {
  for (double k : k_grid)
    if (k < -0.5 || k >= 0.5)
      fail(ErrorCode::invalid_wavenumber, "band_sweep: k grid must lie in [-1/2, 1/2)");

  std::vector<CellSpectrum> out(k_grid.size());
  if (workers <= 1 || k_grid.size() < 2) {
    for (size_t i = 0; i < k_grid.size(); ++i)
      out[i] = solve_cell(a, rho, k_grid[i], n_elements, num_modes);
    return out;
  }

  std::atomic<size_t> next{0};
  std::vector<std::string> errors(k_grid.size());
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < k_grid.size(); i = next.fetch_add(1)) {
      try {
        out[i] = solve_cell(a, rho, k_grid[i], n_elements, num_modes);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  std::string aggregated;
  for (size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty())
      aggregated += "k=" + std::to_string(k_grid[i]) + ": " + errors[i] + "; ";
  if (!aggregated.empty()) fail(ErrorCode::solver_failure, "band_sweep: " + aggregated);
  return out;
}

}  // namespace blochhom
