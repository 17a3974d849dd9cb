#pragma once

#include <random>

#include "blochhom/fem.hpp"

namespace blochhom::testing {

/// The reference experiment's cell coefficient a(y) = sin(2 pi y) + 2.
inline CoefficientProfile paper_a() { return CoefficientProfile::sine(1.0, 2.0); }
inline CoefficientProfile unit() { return CoefficientProfile::constant(1.0); }

/// Deterministic random FE function with nodal values in [-1, 1].
inline FEFunction random_fe(const Mesh1D& mesh, unsigned seed, bool complex_valued = false) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXcd v(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i)
    v[i] = complex_valued ? cplx(dist(gen), dist(gen)) : cplx(dist(gen), 0.0);
  return FEFunction::from_node_values(mesh, v);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace blochhom::testing
