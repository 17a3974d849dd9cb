#pragma once

#include <array>
#include <cmath>

namespace blochhom {

/// 3-point Gauss-Legendre rule on the reference element [0,1] (exact to degree 5)
/// and the quadratic Lagrange shape functions used throughout assembly.
namespace quad {

struct Point {
  double xi;
  double w;
};

inline constexpr std::array<Point, 3> gauss3 = {{
    {0.5 - 0.5 * 0.774596669241483377035853079956, 5.0 / 18.0},
    {0.5, 8.0 / 18.0},
    {0.5 + 0.5 * 0.774596669241483377035853079956, 5.0 / 18.0},
}};

/// P2 shapes on [0,1]: nodes at 0, 1/2, 1.
inline std::array<double, 3> shapes(double xi) {
  return {(2.0 * xi - 1.0) * (xi - 1.0), 4.0 * xi * (1.0 - xi), xi * (2.0 * xi - 1.0)};
}

/// d/dxi of the P2 shapes (divide by element h for d/dx).
inline std::array<double, 3> shape_derivs(double xi) {
  return {4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0};
}

}  // namespace quad
}  // namespace blochhom
