#include "blochhom/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace blochhom {

CoefficientProfile CoefficientProfile::constant(double value) {
  CoefficientProfile p;
  p.kind_ = Kind::constant;
  p.c0_ = value;
  p.finish_bounds();
  return p;
}

CoefficientProfile CoefficientProfile::sine(double amplitude, double offset) {
  CoefficientProfile p;
  p.kind_ = Kind::sine;
  p.c0_ = amplitude;
  p.c1_ = offset;
  p.finish_bounds();
  return p;
}

CoefficientProfile CoefficientProfile::piecewise_constant(std::vector<double> breakpoints,
                                                          std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size() || breakpoints.front() != 0.0)
    fail(ErrorCode::invalid_coefficient,
         "piecewise_constant: need breakpoints starting at 0, one value per piece");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) || breakpoints.back() >= 1.0)
    fail(ErrorCode::invalid_coefficient, "piecewise_constant: breakpoints must ascend within [0,1)");
  CoefficientProfile p;
  p.kind_ = Kind::piecewise_constant;
  p.breaks_ = std::move(breakpoints);
  p.values_ = std::move(values);
  p.finish_bounds();
  return p;
}

CoefficientProfile CoefficientProfile::sampled(std::vector<double> samples) {
  if (samples.size() < 2)
    fail(ErrorCode::invalid_coefficient, "sampled: need at least two samples");
  CoefficientProfile p;
  p.kind_ = Kind::sampled;
  p.values_ = std::move(samples);
  p.finish_bounds();
  return p;
}

CoefficientProfile CoefficientProfile::scaled(double period) const {
  if (!(period > 0.0)) fail(ErrorCode::invalid_coefficient, "scaled: period must be positive");
  CoefficientProfile p = *this;
  p.period_ = period_ * period;
  return p;
}

void CoefficientProfile::finish_bounds() {
  switch (kind_) {
    case Kind::constant:
      lower_ = upper_ = c0_;
      break;
    case Kind::sine:
      lower_ = c1_ - std::abs(c0_);
      upper_ = c1_ + std::abs(c0_);
      break;
    case Kind::piecewise_constant:
    case Kind::sampled: {
      auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
      lower_ = *lo;
      upper_ = *hi;
      break;
    }
  }
  if (!(lower_ > 0.0))
    fail(ErrorCode::invalid_coefficient, "coefficient must be strictly positive (" + describe() + ")");
}

double CoefficientProfile::eval(double y) const {
  double t = y / period_;
  t -= std::floor(t);  // wrap to [0,1)
  switch (kind_) {
    case Kind::constant:
      return c0_;
    case Kind::sine:
      return c0_ * std::sin(2.0 * std::numbers::pi * t) + c1_;
    case Kind::piecewise_constant: {
      auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
      return values_[static_cast<size_t>(it - breaks_.begin()) - 1];
    }
    case Kind::sampled: {
      const size_t n = values_.size();
      double s = t * static_cast<double>(n);
      size_t j = std::min(static_cast<size_t>(s), n - 1);
      double frac = s - static_cast<double>(j);
      return values_[j] * (1.0 - frac) + values_[(j + 1) % n] * frac;
    }
  }
  return c0_;
}

std::string CoefficientProfile::spec() const {
  auto num = [](double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", v);
    return std::string(b);
  };
  switch (kind_) {
    case Kind::constant:
      return "constant " + num(c0_);
    case Kind::sine:
      return "sine " + num(c0_) + " " + num(c1_);
    case Kind::piecewise_constant: {
      std::string s = "piecewise";
      for (size_t i = 0; i < values_.size(); ++i) s += " " + num(breaks_[i]) + ":" + num(values_[i]);
      return s;
    }
    case Kind::sampled: {
      std::string s = "sampled";
      for (double v : values_) s += " " + num(v);
      return s;
    }
  }
  return "";
}

std::string CoefficientProfile::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::constant:
      std::snprintf(buf, sizeof buf, "constant %.6g", c0_);
      break;
    case Kind::sine:
      std::snprintf(buf, sizeof buf, "%.6g*sin(2*pi*y) + %.6g", c0_, c1_);
      break;
    case Kind::piecewise_constant:
      std::snprintf(buf, sizeof buf, "piecewise constant, %zu pieces", values_.size());
      break;
    case Kind::sampled:
      std::snprintf(buf, sizeof buf, "sampled, %zu points", values_.size());
      break;
  }
  return buf;
}

}  // namespace blochhom
