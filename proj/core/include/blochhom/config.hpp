#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blochhom/coefficient.hpp"
#include "blochhom/fem.hpp"

namespace blochhom {

/// Configuration file problem: carries the 1-based line of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

/// Resolved run configuration. Defaults reproduce the reference experiment:
/// Omega = (0,1), a(y) = sin(2 pi y) + 2, rho = 1, 50 cells, N_phys = 2000,
/// N_bloch = 50, k grid step 1/125, r = 15.
struct RunConfig {
  // [problem]
  double alpha = 1.0;
  int cells = 50;
  CoefficientProfile a = CoefficientProfile::sine(1.0, 2.0);
  CoefficientProfile rho = CoefficientProfile::constant(1.0);
  int n_phys = 2000;
  int n_bloch = 50;
  BoundaryTreatment::Kind bc = BoundaryTreatment::Kind::dirichlet;

  // [search]
  double k_step = 0.008;
  bool k_list_set = false;     // explicit k_list overrides k_step (may be empty)
  std::vector<double> k_list;
  int r = 15;
  int n_bands = 10;

  // [physical]
  int phys_p_min = 1;
  int phys_p_max = 20;
  std::vector<int> phys_write_modes;

  // [match]
  int match_p_min = 40;
  int match_p_max = 150;
  std::vector<int> match_exclude = {50};
  std::vector<int> match_write_modes;

  // [model]
  double model_k = 0.16;
  int model_n = 2;

  // [converge]
  double conv_k = 0.3;
  double conv_l = 0.6;
  int conv_n = 2;
  std::vector<int> conv_h_list = {3, 9, 15, 21};
  int conv_per_cell = 40;

  // [output]
  std::string out_dir = "out";
  int workers = 1;

  double epsilon() const { return alpha / cells; }
  std::vector<double> k_grid() const;
  std::vector<int> match_indices() const;
  void validate() const;  // throws ConfigError(0, ...) on cross-field problems
  std::string serialize() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace blochhom
