// blochhom: Bloch-wave homogenization of the 1D periodic spectral problem.
//
// Subcommands: band, physical, match, model, converge. Configuration comes
// from a key = value file (see --config); defaults reproduce the reference
// experiment. Exit codes: 0 success, 2 configuration error, 3 numerical
// failure.

#include <CLI11.hpp>
#include <iostream>

#include "blochhom/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bloch-wave homogenization of 1D periodic spectral problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--workers", workers, "worker count (overrides config)");

  auto* band = app.add_subcommand("band", "Bloch band structure over the k grid");
  auto* physical = app.add_subcommand("physical", "physical spectrum and renormalized eigenvalues");
  auto* match = app.add_subcommand("match", "approximate physical modes by two-scale modes");
  auto* model = app.add_subcommand("model", "modeling problem for a fixed (k, n)");
  auto* converge = app.add_subcommand("converge", "eps-convergence study along a subsequence");

  CLI11_PARSE(app, argc, argv);

  try {
    blochhom::RunConfig cfg;
    if (!config_path.empty()) cfg = blochhom::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (workers > 0) cfg.workers = workers;
    cfg.validate();

    if (band->parsed()) blochhom::command_band(cfg, std::cout);
    if (physical->parsed()) blochhom::command_physical(cfg, std::cout);
    if (match->parsed()) blochhom::command_match(cfg, std::cout);
    if (model->parsed()) blochhom::command_model(cfg, std::cout);
    if (converge->parsed()) blochhom::command_converge(cfg, std::cout);
    return 0;
  } catch (const blochhom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
