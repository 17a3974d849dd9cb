#pragma once

#include <string>
#include <vector>

#include "blochhom/errors.hpp"

namespace blochhom {

/// A 1-periodic, strictly positive material coefficient a(y) or rho(y).
///
/// Supported profiles: constant, sine (amp*sin(2*pi*y)+offset), piecewise
/// constant on [0,1), and linearly interpolated samples on a uniform grid.
/// scaled(period) composes with y -> y/period, producing the eps-periodic
/// coefficient a(x/eps) used by the physical problem.
class CoefficientProfile {
 public:
  enum class Kind { constant, sine, piecewise_constant, sampled };

  static CoefficientProfile constant(double value);
  static CoefficientProfile sine(double amplitude, double offset);
  /// breakpoints[0] must be 0; values[i] holds on [breakpoints[i], breakpoints[i+1]).
  static CoefficientProfile piecewise_constant(std::vector<double> breakpoints,
                                               std::vector<double> values);
  /// Samples at y_j = j/n, j=0..n-1, linearly interpolated with periodic wrap.
  static CoefficientProfile sampled(std::vector<double> samples);

  CoefficientProfile scaled(double period) const;

  double operator()(double y) const { return eval(y); }
  double eval(double y) const;

  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  double period() const { return period_; }
  Kind kind() const { return kind_; }

  std::string describe() const;
  /// Canonical config-file spec ("sine 1 2", "piecewise 0:2 0.5:4", ...).
  std::string spec() const;

 private:
  CoefficientProfile() = default;
  void finish_bounds();

  Kind kind_ = Kind::constant;
  double period_ = 1.0;
  double c0_ = 1.0, c1_ = 0.0;  // constant value / sine amplitude+offset
  std::vector<double> breaks_, values_;
  double lower_ = 1.0, upper_ = 1.0;
};

}  // namespace blochhom
