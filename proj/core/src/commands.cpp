#include "blochhom/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "blochhom/pipelines.hpp"

namespace blochhom {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  std::ofstream echo(dir / "config.resolved.ini");
  echo << cfg.serialize();
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

SearchSpace search_space(const RunConfig& cfg) {
  SearchSpace space;
  space.k_grid = cfg.k_grid();
  space.r = cfg.r;
  space.num_bands = cfg.n_bands;
  return space;
}

PhysicalProblem physical_problem(const RunConfig& cfg) {
  PhysicalProblem p;
  p.alpha = cfg.alpha;
  p.epsilon = cfg.epsilon();
  p.a = cfg.a;
  p.rho = cfg.rho;
  p.bc = cfg.bc;
  p.n_elements = cfg.n_phys;
  return p;
}

void write_mode_profile(const fs::path& path, const Mesh1D& mesh, const Eigen::VectorXcd& psi,
                        const Eigen::VectorXcd& w, cplx s) {
  std::ofstream out(path);
  out << "x,re_psi,im_psi,re_w,im_w,abs_w_minus_spsi\n";
  for (int i = 0; i < mesh.node_count(); ++i) {
    const cplx d = w[i] - s * psi[i];
    out << fmt(mesh.node(i)) << ',' << fmt(psi[i].real()) << ',' << fmt(psi[i].imag()) << ','
        << fmt(w[i].real()) << ',' << fmt(w[i].imag()) << ',' << fmt(std::abs(d)) << "\n";
  }
}

}  // namespace

void command_band(const RunConfig& cfg, std::ostream& log) {
  const auto grid = cfg.k_grid();
  if (grid.empty()) fail(ErrorCode::empty_search, "band: empty k grid");
  const auto dir = prepare_out_dir(cfg);
  log << "band: " << grid.size() << " k-points, " << cfg.n_bands << " bands\n";

  const auto spectra = band_sweep(cfg.a, cfg.rho, grid, cfg.n_bloch, cfg.n_bands, cfg.workers);

  std::ofstream csv(dir / "bands.csv");
  csv << "k,n,lambda\n";
  json bands = json::array();
  for (int n = 0; n < cfg.n_bands; ++n) {
    json points = json::array();
    for (size_t i = 0; i < grid.size(); ++i) {
      csv << fmt(grid[i]) << ',' << (n + 1) << ',' << fmt(spectra[i].eigenvalues[n]) << "\n";
      points.push_back({{"k", grid[i]}, {"lambda", spectra[i].eigenvalues[n]}});
    }
    csv.flush();
    bands.push_back({{"n", n + 1}, {"points", points}});
  }
  write_json(dir / "bands.json", json{{"bands", bands}});
  log << "band: wrote " << grid.size() * cfg.n_bands << " rows\n";
}

void command_physical(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out_dir(cfg);
  const auto problem = physical_problem(cfg);
  log << "physical: solving modes " << cfg.phys_p_min << ".." << cfg.phys_p_max << "\n";
  const auto spectrum = solve_physical(problem, ModeRange{cfg.phys_p_min, cfg.phys_p_max});

  std::ofstream csv(dir / "physical.csv");
  csv << "p,lambda,eps2_lambda\n";
  json rows = json::array();
  for (int p = cfg.phys_p_min; p <= cfg.phys_p_max; ++p) {
    const double lam = spectrum.eigenvalue(p);
    const double renorm = renormalized_eigenvalue(spectrum, p);
    csv << p << ',' << fmt(lam) << ',' << fmt(renorm) << "\n";
    csv.flush();
    rows.push_back({{"p", p}, {"lambda", lam}, {"eps2_lambda", renorm}});
  }
  write_json(dir / "physical.json", json{{"modes", rows}});

  for (int p : cfg.phys_write_modes) {
    if (!spectrum.has(p)) continue;
    const auto nodal = spectrum.mode(p).node_values();
    std::ofstream out(dir / ("mode_" + std::to_string(p) + ".csv"));
    out << "x,re_w,im_w\n";
    const Mesh1D mesh = problem.mesh();
    for (int i = 0; i < mesh.node_count(); ++i)
      out << fmt(mesh.node(i)) << ',' << fmt(nodal[i].real()) << ',' << fmt(nodal[i].imag())
          << "\n";
  }
}

void command_match(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out_dir(cfg);
  const auto problem = physical_problem(cfg);
  const auto space = search_space(cfg);
  const auto indices = cfg.match_indices();
  if (indices.empty()) fail(ErrorCode::empty_search, "match: empty p set");

  log << "match: solving physical spectrum up to p=" << cfg.match_p_max << "\n";
  const auto spectrum = solve_physical(problem, ModeRange{1, cfg.match_p_max});
  log << "match: preparing " << space.k_grid.size() << " cell spectra\n";
  const auto bands =
      prepare_bands(cfg.a, cfg.rho, space.k_grid, cfg.n_bloch, cfg.n_bands, cfg.workers);

  std::ofstream csv(dir / "match.csv");
  csv << "p,k,n,ell,lambda_nk,lambda1,er_value,er_vector,excluded\n";
  json rows = json::array();

  // chunked sweep so completed rows land on disk as the run progresses
  const size_t chunk = std::max<size_t>(1, cfg.workers * 4);
  std::vector<MatchReport> all;
  for (size_t begin = 0; begin < indices.size(); begin += chunk) {
    const size_t end = std::min(indices.size(), begin + chunk);
    std::vector<int> slice(indices.begin() + begin, indices.begin() + end);
    auto reports = sweep_match(slice, spectrum, bands, space, cfg.workers);
    for (const auto& r : reports) {
      csv << r.p << ',' << fmt(r.best_k) << ',' << r.best_n << ',' << r.best_ell << ','
          << fmt(r.lambda_nk) << ',' << fmt(r.lambda1) << ',' << fmt(r.er_value) << ','
          << fmt(r.er_vector) << ',' << (r.excluded ? 1 : 0) << "\n";
      rows.push_back({{"p", r.p},
                      {"k", r.best_k},
                      {"n", r.best_n},
                      {"ell", r.best_ell},
                      {"lambda_nk", r.lambda_nk},
                      {"lambda1", r.lambda1},
                      {"gamma", r.gamma},
                      {"er_value", r.er_value},
                      {"er_vector", r.er_vector},
                      {"alignment_re", r.alignment.real()},
                      {"alignment_im", r.alignment.imag()},
                      {"excluded", r.excluded},
                      {"exclusion_reason", r.exclusion_reason}});
      all.push_back(r);
    }
    csv.flush();
    log << "match: " << end << "/" << indices.size() << " modes done\n";
  }
  write_json(dir / "match.json", json{{"matches", rows}});

  if (!cfg.match_write_modes.empty()) {
    const Mesh1D mesh = problem.mesh();
    for (int p : cfg.match_write_modes) {
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const MatchReport& r) { return r.p == p; });
      if (it == all.end() || !spectrum.has(p)) continue;
      // rebuild the winning candidate's mode for the profile file
      const auto kd = prepare_cell(cfg.a, cfg.rho, it->best_k, cfg.n_bloch, cfg.n_bands);
      const cplx c = kd.c_diag[it->best_n - 1];
      const cplx d = cplx(0.0, 1.0) / kd.phi0[it->best_n - 1];
      const auto mode = assemble_pair_mode(kd.spectrum, it->best_n - 1, d, -it->lambda1 / c,
                                           it->lambda1, it->best_ell, cfg.epsilon(), mesh);
      write_mode_profile(dir / ("mode_" + std::to_string(p) + ".csv"), mesh, mode.samples,
                         spectrum.mode(p).node_values(), it->alignment);
    }
  }
}

void command_model(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out_dir(cfg);
  const auto problem = physical_problem(cfg);
  auto space = search_space(cfg);

  // default physical scan window (alpha/(2 eps), ...] for the identification step
  const int p_lo = cfg.cells / 2 + 1;
  const int p_hi = std::min(3 * cfg.cells + 20, 2 * cfg.n_phys - 1);
  for (int p = p_lo; p <= p_hi; ++p) space.physical_indices.push_back(p);

  log << "model: k=" << cfg.model_k << " n=" << cfg.model_n << "\n";
  const auto spectrum = solve_physical(problem, ModeRange{1, p_hi});
  const auto kd = prepare_cell(cfg.a, cfg.rho, cfg.model_k, cfg.n_bloch, cfg.n_bands);
  const auto report = modeling_search(kd, cfg.model_n, spectrum, space);

  std::ofstream csv(dir / "model.csv");
  csv << "k,n,ell,lambda_nk,lambda1,F,p,er_value,er_vector\n";
  csv << fmt(report.k) << ',' << report.n << ',' << report.best_ell << ','
      << fmt(report.lambda_nk) << ',' << fmt(report.lambda1) << ',' << fmt(report.F_min) << ','
      << report.p << ',' << fmt(report.er_value) << ',' << fmt(report.er_vector) << "\n";
  write_json(dir / "model.json", json{{"k", report.k},
                                      {"n", report.n},
                                      {"ell", report.best_ell},
                                      {"lambda_nk", report.lambda_nk},
                                      {"lambda1", report.lambda1},
                                      {"gamma", report.gamma},
                                      {"F", report.F_min},
                                      {"p", report.p},
                                      {"er_value", report.er_value},
                                      {"er_vector", report.er_vector}});
  log << "model: F=" << report.F_min << " p=" << report.p << "\n";
}

void command_converge(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out_dir(cfg);
  ConvergenceConfig ccfg;
  ccfg.a = cfg.a;
  ccfg.rho = cfg.rho;
  ccfg.alpha = cfg.alpha;
  ccfg.elements_per_cell = cfg.conv_per_cell;
  ccfg.n_bloch = cfg.n_bloch;
  ccfg.r = cfg.r;

  log << "converge: k=" << cfg.conv_k << " l=" << cfg.conv_l << "\n";
  const auto report = convergence_study(cfg.conv_k, cfg.conv_l, cfg.conv_h_list, cfg.conv_n, ccfg);

  std::ofstream csv(dir / "converge.csv");
  csv << "h,epsilon,er_value,er_vector,p,q_value,q_vector\n";
  json rows = json::array();
  for (size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    csv << r.h << ',' << fmt(r.epsilon) << ',' << fmt(r.er_value) << ',' << fmt(r.er_vector)
        << ',' << r.p;
    json row = {{"h", r.h},
                {"epsilon", r.epsilon},
                {"er_value", r.er_value},
                {"er_vector", r.er_vector},
                {"p", r.p}};
    if (i > 0) {
      csv << ',' << fmt(report.q_value[i - 1]) << ',' << fmt(report.q_vector[i - 1]);
      row["q_value"] = report.q_value[i - 1];
      row["q_vector"] = report.q_vector[i - 1];
      row["c_value"] = report.c_value[i - 1];
      row["c_vector"] = report.c_vector[i - 1];
    } else {
      csv << ",,";
    }
    csv << "\n";
    csv.flush();
    rows.push_back(row);
  }
  write_json(dir / "converge.json",
             json{{"k", report.k}, {"l", report.l}, {"n", report.n}, {"rows", rows}});
}

}  // namespace blochhom
