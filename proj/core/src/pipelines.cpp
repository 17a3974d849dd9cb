#include "blochhom/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "blochhom/quadrature.hpp"

namespace blochhom {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx iu{0.0, 1.0};

struct Candidate {
  int n = 0;  // 0-based band
  long ell_window = 0;
  long ell_macro = 0;
  double lambda1 = 0.0;
  double gamma = 0.0;
  double er_value = 0.0;
  bool k_zero_pair = false;
  int partner = -1;  // k=0 pair index
};

// Mirrored macroscopic eigenvalue family, window-indexed:
//   lambda1(ell_w) = Re[ (conj(c)/alpha) (2 i pi l - i pi (ell_w - 2h)) ]
double mirrored_lambda1(cplx c, double alpha, const EpsilonDecomposition& dec, long ell_window) {
  const long ell_macro = ell_window - 2 * dec.h;
  const cplx v = std::conj(c) / alpha *
                 (2.0 * iu * pi * dec.l - iu * pi * static_cast<double>(ell_macro));
  return v.real();
}

// Stage 1 at one k: minimize |target - gamma| / |target| over bands and the
// ell window; ties resolved by smaller n, then smaller |lambda1|.
std::optional<Candidate> stage1(const KCellData& kd, double alpha, double epsilon, int r,
                                double target) {
  std::optional<Candidate> best;
  auto consider = [&](const Candidate& c) {
    if (!best || std::make_tuple(c.er_value, c.n, std::abs(c.lambda1)) <
                     std::make_tuple(best->er_value, best->n, std::abs(best->lambda1)))
      best = c;
  };

  if (kd.k != 0.0) {
    const auto dec = decompose_epsilon(alpha, kd.k, epsilon);
    const long center = static_cast<long>(std::floor(2.0 * kd.k * alpha / epsilon + 1e-12));
    for (int n = 0; n < kd.c_diag.size(); ++n) {
      const cplx c = kd.c_diag[n];
      if (std::abs(c) < 1e-9) continue;  // degenerate macroscopic model, no candidates
      if (std::abs(kd.phi0[n]) < 1e-8) continue;
      for (long lw = center - r; lw <= center + r; ++lw) {
        Candidate cand;
        cand.n = n;
        cand.ell_window = lw;
        cand.ell_macro = lw - 2 * dec.h;
        cand.lambda1 = mirrored_lambda1(c, alpha, dec, lw);
        cand.gamma = kd.spectrum.eigenvalues[n] + epsilon * cand.lambda1;
        cand.er_value = std::abs(target - cand.gamma) / std::abs(target);
        consider(cand);
      }
    }
    return best;
  }

  // k = 0: only genuine multiplicity pairs carry a macroscopic family
  for (const auto& group : kd.spectrum.multiplicity_groups) {
    if (group.size() < 2) continue;
    const int n = group[0], m = group[1];
    if (m >= kd.c_full.rows()) continue;
    const cplx c_nm = kd.c_full(n, m);
    if (std::abs(c_nm) < 1e-9) continue;
    for (long ell = -r; ell <= r; ++ell) {
      Candidate cand;
      cand.n = n;
      cand.partner = m;
      cand.k_zero_pair = true;
      cand.ell_window = ell;
      cand.ell_macro = ell;
      cand.lambda1 = static_cast<double>(ell) * pi * c_nm.real() / alpha;
      cand.gamma = kd.spectrum.eigenvalues[n] + epsilon * cand.lambda1;
      cand.er_value = std::abs(target - cand.gamma) / std::abs(target);
      consider(cand);
    }
  }
  return best;
}

TwoScaleMode realize(const KCellData& kd, const Candidate& cand, double alpha, double epsilon,
                     const Mesh1D& mesh, EnvelopeConvention convention) {
  if (cand.k_zero_pair) {
    const auto macro =
        macro_eigenpair_0(kd.c_full(cand.n, cand.partner), kd.phi0[cand.n].real(),
                          kd.phi0[cand.partner].real(), alpha, cand.ell_macro,
                          kd.phi0[cand.partner].real());
    auto mode = build_two_scale_mode(kd.spectrum, cand.n, macro, epsilon, mesh);
    mode.ell = cand.ell_window;
    return mode;
  }
  const cplx c = kd.c_diag[cand.n];
  const cplx c_env = convention == EnvelopeConvention::table_matched ? c : std::conj(c);
  const cplx rate = -cand.lambda1 / c_env;
  const cplx d = iu / kd.phi0[cand.n];  // delta = 1
  auto mode = assemble_pair_mode(kd.spectrum, cand.n, d, rate, cand.lambda1, cand.ell_window,
                                 epsilon, mesh);
  return mode;
}

struct VectorFit {
  double er_vector = 0.0;
  cplx alignment = 0.0;
};

// er_vector = || w - s* psi ||_L2 / ||w||_inf with the least-squares scalar
// s* = <w, psi> / ||psi||^2, in one quadrature pass.
VectorFit fit_vector(const Eigen::VectorXcd& w_nodal, double w_inf, const TwoScaleMode& mode) {
  const Mesh1D& mesh = mode.mesh;
  const double h = mesh.h();
  cplx ip = 0.0;
  double np2 = 0.0, nw2 = 0.0;
  for (int e = 0; e < mesh.elements; ++e) {
    for (const auto& q : quad::gauss3) {
      const auto N = quad::shapes(q.xi);
      const int b = 2 * e;
      const cplx wv = w_nodal[b] * N[0] + w_nodal[b + 1] * N[1] + w_nodal[b + 2] * N[2];
      const cplx pv =
          mode.samples[b] * N[0] + mode.samples[b + 1] * N[1] + mode.samples[b + 2] * N[2];
      const double wq = q.w * h;
      ip += wq * wv * std::conj(pv);
      np2 += wq * std::norm(pv);
      nw2 += wq * std::norm(wv);
    }
  }
  VectorFit fit;
  if (!(np2 > 0.0)) {
    fit.er_vector = std::sqrt(nw2) / w_inf;
    return fit;
  }
  fit.alignment = ip / np2;
  fit.er_vector = std::sqrt(std::max(0.0, nw2 - std::norm(ip) / np2)) / w_inf;
  return fit;
}

}  // namespace

std::vector<double> SearchSpace::uniform_grid(double step) {
  if (!(step > 0.0)) fail(ErrorCode::invalid_argument, "uniform_grid: step must be positive");
  std::vector<double> grid;
  for (int j = 0;; ++j) {
    const double k = j * step;
    if (k >= 0.5 - 1e-12) break;
    grid.push_back(k);
  }
  return grid;
}

KCellData prepare_cell(const CoefficientProfile& a, const CoefficientProfile& rho, double k,
                       int n_elements, int num_bands) {
  KCellData kd;
  kd.k = k;
  kd.spectrum = solve_cell(a, rho, k, n_elements, num_bands);
  std::vector<int> all(num_bands);
  for (int i = 0; i < num_bands; ++i) all[i] = i;
  const auto cc = coupling(kd.spectrum, a, rho, all);
  kd.c_full = cc.c;
  kd.c_diag = cc.c.diagonal();
  kd.phi0.resize(num_bands);
  for (int i = 0; i < num_bands; ++i) kd.phi0[i] = kd.spectrum.modes[i].evaluate(0.0);
  return kd;
}

std::vector<KCellData> prepare_bands(const CoefficientProfile& a, const CoefficientProfile& rho,
                                     const std::vector<double>& k_grid, int n_elements,
                                     int num_bands, int workers) {
  std::vector<KCellData> out(k_grid.size());
  auto run = [&](size_t i) { out[i] = prepare_cell(a, rho, k_grid[i], n_elements, num_bands); };
  if (workers <= 1 || k_grid.size() < 2) {
    for (size_t i = 0; i < k_grid.size(); ++i) run(i);
  } else {
    std::atomic<size_t> next{0};
    auto work = [&] {
      for (size_t i = next.fetch_add(1); i < k_grid.size(); i = next.fetch_add(1)) run(i);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

MatchReport match_mode(int p, const PhysicalSpectrum& physical, const std::vector<KCellData>& bands,
                       const SearchSpace& space, EnvelopeConvention convention) {
  if (bands.empty()) fail(ErrorCode::empty_search, "match_mode: empty k grid");
  const double alpha = physical.problem.alpha;
  const double epsilon = physical.problem.epsilon;
  const double target = renormalized_eigenvalue(physical, p);
  const Eigen::VectorXcd w_nodal = physical.mode(p).node_values();
  const double w_inf = w_nodal.cwiseAbs().maxCoeff();
  const Mesh1D mesh = physical.problem.mesh();

  std::optional<MatchReport> best;
  for (const auto& kd : bands) {
    const auto cand = stage1(kd, alpha, epsilon, space.r, target);
    if (!cand) continue;
    const auto mode = realize(kd, *cand, alpha, epsilon, mesh, convention);
    const auto fit = fit_vector(w_nodal, w_inf, mode);
    if (!best || fit.er_vector < best->er_vector) {
      MatchReport r;
      r.p = p;
      r.best_k = kd.k;
      r.best_n = cand->n + 1;
      r.best_ell = cand->ell_window;
      r.lambda_nk = kd.spectrum.eigenvalues[cand->n];
      r.lambda1 = cand->lambda1;
      r.gamma = cand->gamma;
      r.er_value = cand->er_value;
      r.er_vector = fit.er_vector;
      r.alignment = fit.alignment;
      best = r;
    }
  }
  if (!best) fail(ErrorCode::empty_search, "match_mode: no candidate at any k");
  if (best->er_vector > 0.2) {
    best->excluded = true;
    best->exclusion_reason = "boundary-spectrum heuristic";
  }
  return *best;
}

std::vector<MatchReport> sweep_match(const std::vector<int>& index_set,
                                     const PhysicalSpectrum& physical,
                                     const std::vector<KCellData>& bands, const SearchSpace& space,
                                     int workers, EnvelopeConvention convention) {
  std::vector<MatchReport> out(index_set.size());
  auto run = [&](size_t i) { out[i] = match_mode(index_set[i], physical, bands, space, convention); };
  if (workers <= 1 || index_set.size() < 2) {
    for (size_t i = 0; i < index_set.size(); ++i) run(i);
    return out;
  }
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < index_set.size(); i = next.fetch_add(1)) run(i);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

ModelReport modeling_search(const KCellData& cell, int n, const PhysicalSpectrum& physical,
                            const SearchSpace& space) {
  const int n0 = n - 1;
  if (n0 < 0 || n0 >= cell.c_diag.size())
    fail(ErrorCode::invalid_argument, "modeling_search: band index outside prepared data");
  if (cell.k == 0.0)
    fail(ErrorCode::invalid_argument, "modeling_search: use a nonzero wavenumber");
  if (std::abs(cell.c_diag[n0]) < 1e-9)
    fail(ErrorCode::degenerate_macro_model, "modeling_search: c(k,n,n) vanishes");

  const double alpha = physical.problem.alpha;
  const double epsilon = physical.problem.epsilon;
  const Mesh1D mesh = physical.problem.mesh();
  const auto dec = decompose_epsilon(alpha, cell.k, epsilon);
  const long center = static_cast<long>(std::floor(2.0 * cell.k * alpha / epsilon + 1e-12));
  const ResidualContext residual(physical.problem);

  struct Best {
    double F;
    double lambda1;
    Candidate cand;
    TwoScaleMode mode;
  };
  std::optional<Best> best;
  for (long lw = center - space.r; lw <= center + space.r; ++lw) {
    Candidate cand;
    cand.n = n0;
    cand.ell_window = lw;
    cand.ell_macro = lw - 2 * dec.h;
    cand.lambda1 = mirrored_lambda1(cell.c_diag[n0], alpha, dec, lw);
    cand.gamma = cell.spectrum.eigenvalues[n0] + epsilon * cand.lambda1;
    auto mode = realize(cell, cand, alpha, epsilon, mesh, EnvelopeConvention::table_matched);
    const double F = residual.residual(mode);
    if (!best || std::make_tuple(F, std::abs(cand.lambda1)) <
                     std::make_tuple(best->F, best->lambda1)) {
      best = Best{F, std::abs(cand.lambda1), cand, std::move(mode)};
    }
  }
  if (!best || best->F > 1.0)
    fail(ErrorCode::no_physical_counterpart,
         "modeling_search: no ell yields a residual below 1 (spurious mode?)");

  ModelReport report;
  report.k = cell.k;
  report.n = n;
  report.best_ell = best->cand.ell_window;
  report.lambda_nk = cell.spectrum.eigenvalues[n0];
  report.lambda1 = best->cand.lambda1;
  report.gamma = best->cand.gamma;
  report.F_min = best->F;

  // identify the physical counterpart by er_value, then report its er_vector
  std::vector<int> ps = space.physical_indices;
  if (ps.empty())
    for (int p = physical.first_index;
         p < physical.first_index + static_cast<int>(physical.modes.size()); ++p)
      ps.push_back(p);
  std::optional<std::pair<double, int>> best_p;
  for (int p : ps) {
    const double target = renormalized_eigenvalue(physical, p);
    const double er = std::abs(target - report.gamma) / std::abs(target);
    if (!best_p || er < best_p->first) best_p = {er, p};
  }
  report.p = best_p->second;
  report.er_value = best_p->first;
  const Eigen::VectorXcd w_nodal = physical.mode(report.p).node_values();
  report.er_vector = fit_vector(w_nodal, w_nodal.cwiseAbs().maxCoeff(), best->mode).er_vector;
  return report;
}

ConvergenceReport convergence_study(double k, double l, const std::vector<int>& h_list, int n,
                                    const ConvergenceConfig& cfg) {
  if (!(k > 0.0)) fail(ErrorCode::invalid_argument, "convergence_study: need k > 0");
  ConvergenceReport report;
  report.k = k;
  report.l = l;
  report.n = n;

  for (int h : h_list) {
    const double inv_eps = (static_cast<double>(h) + l) / k;
    const long cells_l = std::lround(cfg.alpha * inv_eps);
    if (cells_l < 1 ||
        std::abs(cfg.alpha * inv_eps - static_cast<double>(cells_l)) > 1e-9 * inv_eps)
      fail(ErrorCode::invalid_subsequence,
           "convergence_study: (h+l)/k must give a whole number of cells (h=" +
               std::to_string(h) + ")");
    const int cells = static_cast<int>(cells_l);
    const double epsilon = cfg.alpha / cells;

    PhysicalProblem problem;
    problem.alpha = cfg.alpha;
    problem.epsilon = epsilon;
    problem.a = cfg.a;
    problem.rho = cfg.rho;
    problem.n_elements = cells * cfg.elements_per_cell;

    const int p_lo = cfg.p_min > 0 ? cfg.p_min : cells / 2 + 1;
    const int p_hi = cfg.p_max > 0 ? cfg.p_max : 2 * cells + 20;
    const auto physical = solve_physical(problem, ModeRange{p_lo, p_hi});
    const auto kd = prepare_cell(cfg.a, cfg.rho, k, cfg.n_bloch, std::max(n, 4));

    const int n0 = n - 1;
    if (std::abs(kd.c_diag[n0]) < 1e-9)
      fail(ErrorCode::degenerate_macro_model, "convergence_study: c(k,n,n) vanishes");
    const auto dec = decompose_epsilon(cfg.alpha, k, epsilon);
    const long center = static_cast<long>(std::floor(2.0 * k * cfg.alpha / epsilon + 1e-12));

    // per p: er_value = min over the ell window; then the best p overall
    std::optional<std::tuple<double, int, Candidate>> best;
    for (int p = p_lo; p <= p_hi; ++p) {
      const double target = renormalized_eigenvalue(physical, p);
      for (long lw = center - cfg.r; lw <= center + cfg.r; ++lw) {
        Candidate cand;
        cand.n = n0;
        cand.ell_window = lw;
        cand.ell_macro = lw - 2 * dec.h;
        cand.lambda1 = mirrored_lambda1(kd.c_diag[n0], cfg.alpha, dec, lw);
        cand.gamma = kd.spectrum.eigenvalues[n0] + epsilon * cand.lambda1;
        cand.er_value = std::abs(target - cand.gamma) / std::abs(target);
        if (!best || cand.er_value < std::get<0>(*best)) best = {cand.er_value, p, cand};
      }
    }
    const auto& [er_value, p_star, cand] = *best;
    const auto mode =
        realize(kd, cand, cfg.alpha, epsilon, problem.mesh(), EnvelopeConvention::conjugate_pair);
    const Eigen::VectorXcd w_nodal = physical.mode(p_star).node_values();
    const auto fit = fit_vector(w_nodal, w_nodal.cwiseAbs().maxCoeff(), mode);

    report.rows.push_back({h, epsilon, er_value, fit.er_vector, p_star});
  }

  for (size_t i = 1; i < report.rows.size(); ++i) {
    const auto& r0 = report.rows[i - 1];
    const auto& r1 = report.rows[i];
    const double le = std::log(r0.epsilon / r1.epsilon);
    const double qv = std::log(r0.er_value / r1.er_value) / le;
    const double qw = std::log(r0.er_vector / r1.er_vector) / le;
    report.q_value.push_back(qv);
    report.q_vector.push_back(qw);
    report.c_value.push_back(r0.er_value / std::pow(r0.epsilon, qv));
    report.c_vector.push_back(r0.er_vector / std::pow(r0.epsilon, qw));
  }
  return report;
}

}  // namespace blochhom
