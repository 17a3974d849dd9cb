#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochhom/physical.hpp"
#include "test_helpers.hpp"

using namespace blochhom;
using namespace blochhom::testing;

namespace {
constexpr double pi = std::numbers::pi;

PhysicalProblem paper_problem() {
  PhysicalProblem p;
  p.alpha = 1.0;
  p.epsilon = 1.0 / 50.0;
  p.a = paper_a();
  p.rho = unit();
  p.n_elements = 2000;
  return p;
}
}  // namespace

TEST_CASE("homogeneous Dirichlet spectrum (p pi)^2 at N=2000") {
  PhysicalProblem prob;
  prob.epsilon = 0.1;
  prob.n_elements = 2000;
  const auto s = solve_physical(prob, ModeRange{1, 10});
  for (int p = 1; p <= 10; ++p) {
    const double exact = p * p * pi * pi;
    CHECK(std::abs(s.eigenvalue(p) - exact) < 1e-6 * exact);
  }
  // modes vanish at the ends exactly (eliminated dofs)
  CHECK(std::abs(s.mode(3).evaluate(0.0)) == 0.0);
  CHECK(std::abs(s.mode(3).evaluate(1.0)) == 0.0);
  CHECK(s.eigenvalue(1) > 0.0);
}

TEST_CASE("reference problem: renormalized eigenvalue near 51.1 + 58.9/50 at p=85") {
  const auto s = solve_physical(paper_problem(), ModeRange{80, 90});
  const double expected = 51.1 + 58.9 / 50.0;
  CHECK(std::abs(renormalized_eigenvalue(s, 85) - expected) < 2e-3 * expected);
}

TEST_CASE("Neumann kernel: lambda_1 = 0 with constant eigenvector") {
  PhysicalProblem prob;
  prob.epsilon = 0.25;
  prob.n_elements = 400;
  prob.bc = BoundaryTreatment::Kind::neumann;
  const auto s = solve_physical(prob, ModeRange{1, 2});
  CHECK(std::abs(s.eigenvalue(1)) < 1e-8);
  CHECK(renormalized_eigenvalue(s, 1) == doctest::Approx(0.0).epsilon(1e-8));
  const cplx v0 = s.mode(1).evaluate(0.2);
  const cplx v1 = s.mode(1).evaluate(0.8);
  CHECK(std::abs(v0 - v1) < 1e-9);
  CHECK(gradient_bound_check(s, 1) < 1e-7);
}

TEST_CASE("renormalized eigenvalue algebra: eps^2 (50 pi)^2 = pi^2") {
  PhysicalProblem prob;
  prob.epsilon = 1.0 / 50.0;
  prob.n_elements = 2000;
  const auto s = solve_physical(prob, ModeRange{50, 50});
  CHECK(renormalized_eigenvalue(s, 50) == doctest::Approx(pi * pi).epsilon(1e-6));
}

TEST_CASE("gradient bound: homogeneous mode p with eps = 1/p gives pi") {
  PhysicalProblem prob;
  prob.epsilon = 0.1;
  prob.n_elements = 1000;
  const auto s = solve_physical(prob, ModeRange{10, 10});
  CHECK(gradient_bound_check(s, 10) == doctest::Approx(pi).epsilon(1e-6));
}

TEST_CASE("gradient bound stays bounded over the high-frequency window") {
  const auto s = solve_physical(paper_problem(), ModeRange{40, 150});
  double worst = 0.0;
  for (int p = 40; p <= 150; ++p) worst = std::max(worst, gradient_bound_check(s, p));
  CHECK(worst < 15.0);
  CHECK(worst > 0.1);
}

TEST_CASE("normalization and rho-orthonormality") {
  const auto s = solve_physical(paper_problem(), ModeRange{40, 44});
  for (int p = 40; p <= 44; ++p) CHECK(std::abs(l2_norm(s.mode(p)) - 1.0) < 1e-10);
  for (int p = 40; p <= 44; ++p)
    for (int q = 40; q <= 44; ++q) {
      const cplx g = weighted_inner(s.mode(p), s.mode(q), unit());
      CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("error paths: cell alignment") {
  PhysicalProblem prob;
  prob.epsilon = 0.3;  // alpha/eps not an integer
  prob.n_elements = 300;
  CHECK_THROWS_AS((void)solve_physical(prob, ModeRange{1, 2}), Error);

  PhysicalProblem prob2;
  prob2.epsilon = 1.0 / 7.0;  // 7 cells, 300 elements: misaligned
  prob2.n_elements = 300;
  CHECK_THROWS_AS((void)solve_physical(prob2, ModeRange{1, 2}), Error);

  PhysicalProblem ok = paper_problem();
  CHECK_THROWS_AS((void)solve_physical(ok, ModeRange{0, 2}), Error);
}
