#pragma once

#include <stdexcept>
#include <string>

namespace blochhom {

enum class ErrorCode {
  invalid_coefficient,
  invalid_wavenumber,
  solver_failure,
  out_of_domain,
  mesh_mismatch,
  mesh_cell_mismatch,
  parameter_mismatch,
  degenerate_macro_model,
  periodic_degenerate_mode,
  underdetermined_boundary,
  degenerate_normalization,
  empty_search,
  no_physical_counterpart,
  invalid_subsequence,
  invalid_argument,
};

/// Library error carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace blochhom
