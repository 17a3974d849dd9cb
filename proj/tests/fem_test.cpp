#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochhom/quadrature.hpp"
#include "test_helpers.hpp"

using namespace blochhom;
using namespace blochhom::testing;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("P2 element mass matrix row sums (a=rho=1, one free element)") {
  const Mesh1D mesh(0.0, 1.0, 1);
  const auto p = assemble(mesh, unit(), unit(), BoundaryTreatment::free_ends());
  const Eigen::MatrixXcd M = p.mass;
  const double h = mesh.h();
  CHECK(std::abs(M.row(0).sum() - h / 6.0) < 1e-14);
  CHECK(std::abs(M.row(1).sum() - 2.0 * h / 3.0) < 1e-14);
  CHECK(std::abs(M.row(2).sum() - h / 6.0) < 1e-14);
}

TEST_CASE("constants lie in the kernel of the periodic stiffness") {
  const auto p = assemble(Mesh1D::unit_cell(7), unit(), unit(),
                          BoundaryTreatment::quasi_periodic(0.0));
  const Eigen::MatrixXcd K = p.stiffness;
  CHECK(K.rowwise().sum().cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("assembly is Hermitian for every boundary treatment") {
  const auto a = paper_a();
  for (const auto& bc : {BoundaryTreatment::dirichlet(), BoundaryTreatment::neumann(),
                         BoundaryTreatment::quasi_periodic(0.16),
                         BoundaryTreatment::quasi_periodic(-0.37)}) {
    const auto p = assemble(Mesh1D::unit_cell(50), a, unit(), bc);
    const Eigen::MatrixXcd K = p.stiffness;
    const Eigen::MatrixXcd M = p.mass;
    CHECK(max_abs(K - K.adjoint()) <= 1e-12 * max_abs(K));
    CHECK(max_abs(M - M.adjoint()) <= 1e-12 * max_abs(M));
  }
}

TEST_CASE("quasi-periodic pencil at k=0.16 is positive definite") {
  const auto p = assemble(Mesh1D::unit_cell(50), paper_a(), unit(),
                          BoundaryTreatment::quasi_periodic(0.16));
  const auto sol = solve_pencil(p, 3);
  CHECK(sol.eigenvalues[0] > 0.0);
  // oracle: a 10x finer mesh agrees on the lowest eigenvalues
  const auto pf = assemble(Mesh1D::unit_cell(500), paper_a(), unit(),
                           BoundaryTreatment::quasi_periodic(0.16));
  const auto fine = solve_pencil(pf, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(sol.eigenvalues[i] - fine.eigenvalues[i]) < 1e-5 * fine.eigenvalues[i]);
}

TEST_CASE("3-point Gauss rule integrates polynomials up to degree 5 exactly") {
  for (int d = 0; d <= 5; ++d) {
    double integral = 0.0;
    for (const auto& q : quad::gauss3) integral += q.w * std::pow(q.xi, d);
    const double exact = 1.0 / (d + 1);
    CHECK(std::abs(integral - exact) <= 1e-13 * exact);
  }
}

TEST_CASE("Dirichlet Laplacian spectrum (p*pi)^2") {
  const auto p = assemble(Mesh1D(0.0, 1.0, 200), unit(), unit(), BoundaryTreatment::dirichlet());
  const auto sol = solve_pencil(p, 5);
  for (int i = 0; i < 5; ++i) {
    const double exact = (i + 1) * (i + 1) * pi * pi;
    CHECK(std::abs(sol.eigenvalues[i] - exact) < 1e-6 * exact);
  }
}

TEST_CASE("quasi-periodic free spectrum is 4 pi^2 (m+k)^2") {
  // P2 eigenvalue error is about (2 pi (m+k) h)^4 / 720; 120 elements keep the
  // sixth band below 1e-6 relative.
  const double k = 0.3;
  const auto p = assemble(Mesh1D::unit_cell(120), unit(), unit(),
                          BoundaryTreatment::quasi_periodic(k));
  const auto sol = solve_pencil(p, 6);
  std::vector<double> exact;
  for (int m = -4; m <= 4; ++m) exact.push_back(4.0 * pi * pi * (m + k) * (m + k));
  std::sort(exact.begin(), exact.end());
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(sol.eigenvalues[i] - exact[i]) < 1e-6 * std::max(1.0, exact[i]));
}

TEST_CASE("second Bloch eigenvalue of the reference cell problem is about 51.1") {
  const auto p = assemble(Mesh1D::unit_cell(50), paper_a(), unit(),
                          BoundaryTreatment::quasi_periodic(0.16));
  const auto sol = solve_pencil(p, 2);
  CHECK(sol.eigenvalues[1] == doctest::Approx(51.1).epsilon(1e-3));
}

TEST_CASE("eigenvectors are M-orthonormal") {
  const auto p = assemble(Mesh1D::unit_cell(40), paper_a(), paper_a(),
                          BoundaryTreatment::quasi_periodic(0.21));
  const auto sol = solve_pencil(p, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const cplx g = sol.modes[i].coeffs.dot(p.mass * sol.modes[j].coeffs);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("eigenvalue error decays at fourth order under mesh refinement") {
  std::vector<double> err;
  for (int n : {50, 100, 200}) {
    const auto p = assemble(Mesh1D(0.0, 1.0, n), unit(), unit(), BoundaryTreatment::dirichlet());
    // a mid-frequency mode so the error is visible above roundoff
    const auto sol = solve_pencil(p, 8);
    err.push_back(std::abs(sol.eigenvalues[7] - 64.0 * pi * pi));
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  CHECK(order1 > 3.5);
  CHECK(order1 < 4.5);
  CHECK(order2 > 3.5);
  CHECK(order2 < 4.5);
}

TEST_CASE("evaluate: partition of unity and quadratic reproduction") {
  const Mesh1D mesh(0.0, 1.0, 1);
  const auto c = FEFunction::interpolate(mesh, [](double) { return 3.25; });
  CHECK(std::abs(c.evaluate(0.37) - 3.25) < 1e-14);

  const auto q = FEFunction::interpolate(mesh, [](double x) { return x * x; });
  CHECK(std::abs(q.evaluate(0.25) - 0.0625) < 1e-14);
  CHECK(std::abs(q.evaluate(0.9) - 0.81) < 1e-14);
}

TEST_CASE("evaluate reconstructs eliminated dofs") {
  const Mesh1D mesh(0.0, 1.0, 10);
  const auto p = assemble(mesh, unit(), unit(), BoundaryTreatment::dirichlet());
  const auto sol = solve_pencil(p, 1);
  CHECK(std::abs(sol.modes[0].evaluate(0.0)) == 0.0);
  CHECK(std::abs(sol.modes[0].evaluate(1.0)) == 0.0);

  const double k = 0.16;
  const auto pq = assemble(mesh, unit(), unit(), BoundaryTreatment::quasi_periodic(k));
  const auto qsol = solve_pencil(pq, 2);
  const cplx left = qsol.modes[1].evaluate(0.0);
  const cplx right = qsol.modes[1].evaluate(1.0);
  CHECK(std::abs(right - left * std::polar(1.0, 2.0 * pi * k)) < 1e-10);
}

TEST_CASE("cell mode value at 0 agrees with a finer solve") {
  const auto coarse = solve_pencil(assemble(Mesh1D::unit_cell(50), paper_a(), unit(),
                                            BoundaryTreatment::quasi_periodic(0.16)), 2);
  const auto fine = solve_pencil(assemble(Mesh1D::unit_cell(200), paper_a(), unit(),
                                          BoundaryTreatment::quasi_periodic(0.16)), 2);
  const double v_coarse = std::abs(coarse.modes[1].evaluate(0.0)) / l2_norm(coarse.modes[1]);
  const double v_fine = std::abs(fine.modes[1].evaluate(0.0)) / l2_norm(fine.modes[1]);
  CHECK(v_coarse > 0.0);
  CHECK(v_coarse == doctest::Approx(v_fine).epsilon(1e-4));
}

TEST_CASE("l2 norms and inner products") {
  const Mesh1D mesh(0.0, 1.0, 100);
  const auto zero = FEFunction::interpolate(mesh, [](double) { return 0.0; });
  CHECK(l2_norm(zero) == 0.0);

  const auto one = FEFunction::interpolate(mesh, [](double) { return 1.0; });
  CHECK(std::abs(l2_norm(one) - 1.0) < 1e-13);

  const auto s = FEFunction::interpolate(mesh, [](double x) { return std::sin(pi * x); });
  CHECK(std::abs(l2_norm(s) - 1.0 / std::sqrt(2.0)) < 1e-8);

  const auto f = random_fe(mesh, 7, true);
  const auto g = random_fe(mesh, 8, true);
  CHECK(std::abs(l2_inner(f, g) - std::conj(l2_inner(g, f))) < 1e-13);
  CHECK(std::abs(l2_norm(f) * l2_norm(f) - l2_inner(f, f).real()) < 1e-12);
}

TEST_CASE("error paths") {
  const Mesh1D mesh(0.0, 1.0, 4);
  CHECK_THROWS_AS((void)BoundaryTreatment::quasi_periodic(0.5), Error);
  CHECK_THROWS_AS((void)BoundaryTreatment::quasi_periodic(-0.6), Error);
  CHECK_THROWS_AS((void)CoefficientProfile::sine(2.0, 1.0), Error);  // dips below zero
  CHECK_THROWS_AS((void)CoefficientProfile::constant(-1.0), Error);

  const auto f = random_fe(mesh, 1);
  CHECK_THROWS_AS((void)f.evaluate(1.5), Error);
  const auto g = random_fe(Mesh1D(0.0, 1.0, 5), 2);
  CHECK_THROWS_AS((void)l2_inner(f, g), Error);

  const auto p = assemble(mesh, unit(), unit(), BoundaryTreatment::dirichlet());
  CHECK_THROWS_AS((void)solve_pencil(p, 100), Error);
}
