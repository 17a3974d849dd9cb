#pragma once

#include <cmath>

#include "blochhom/errors.hpp"

namespace blochhom {

/// Uniform 1D mesh of quadratic (P2) elements: 2*elements+1 equally spaced nodes.
struct Mesh1D {
  double start = 0.0;
  double length = 1.0;
  int elements = 1;

  Mesh1D() = default;
  Mesh1D(double start_, double length_, int elements_)
      : start(start_), length(length_), elements(elements_) {
    if (!(length > 0.0) || elements < 1)
      fail(ErrorCode::invalid_argument, "Mesh1D: need positive length and at least one element");
  }

  static Mesh1D unit_cell(int elements_) { return Mesh1D(0.0, 1.0, elements_); }

  double h() const { return length / elements; }
  int node_count() const { return 2 * elements + 1; }
  double node(int i) const { return start + 0.5 * i * h(); }
  double end() const { return start + length; }

  bool same_as(const Mesh1D& o) const {
    return elements == o.elements && start == o.start && length == o.length;
  }

  /// Element index containing x (clamped to the closed domain).
  int element_of(double x) const {
    double t = (x - start) / h();
    int e = static_cast<int>(std::floor(t));
    if (e < 0) e = 0;
    if (e >= elements) e = elements - 1;
    return e;
  }

  bool contains(double x) const {
    double tol = 1e-12 * (std::abs(start) + length + 1.0);
    return x >= start - tol && x <= end() + tol;
  }
};

}  // namespace blochhom
