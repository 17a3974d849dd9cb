#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochhom/bloch_cell.hpp"
#include "test_helpers.hpp"

using namespace blochhom;
using namespace blochhom::testing;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> free_dispersion(double k, int count) {
  std::vector<double> v;
  for (int m = -count; m <= count; ++m) v.push_back(4.0 * pi * pi * (m + k) * (m + k));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

std::vector<int> first_indices(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  return idx;
}
}  // namespace

TEST_CASE("free cell spectrum at k=0.16") {
  const auto s = solve_cell(unit(), unit(), 0.16, 120, 3);
  const auto exact = free_dispersion(0.16, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(s.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-6));
  // normalization invariant
  for (const auto& m : s.modes) CHECK(std::abs(l2_norm(m) - 1.0) < 1e-10);
  CHECK(s.eigenvalues[0] > -1e-10);
}

TEST_CASE("free cell spectrum at k=0 has double nonzero eigenvalues") {
  const auto s = solve_cell(unit(), unit(), 0.0, 120, 5);
  CHECK(std::abs(s.eigenvalues[0]) < 1e-9);
  CHECK(s.eigenvalues[1] == doctest::Approx(4.0 * pi * pi).epsilon(1e-7));
  CHECK(s.eigenvalues[2] == doctest::Approx(4.0 * pi * pi).epsilon(1e-7));
  CHECK(s.eigenvalues[3] == doctest::Approx(16.0 * pi * pi).epsilon(1e-6));
  // multiplicity grouping: {0}, {1,2}, ...
  REQUIRE(s.multiplicity_groups.size() >= 2);
  CHECK(s.multiplicity_groups[0].size() == 1);
  CHECK(s.multiplicity_groups[1].size() == 2);
  // realified double pair: imaginary parts vanish
  for (int i : s.multiplicity_groups[1])
    CHECK(s.modes[i].coeffs.imag().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("reference cell problem: lambda_2 at k=0.16 is about 51.1") {
  const auto s = solve_cell(paper_a(), unit(), 0.16, 50, 3);
  CHECK(s.eigenvalues[1] == doctest::Approx(51.1).epsilon(1e-3));
}

TEST_CASE("conjugate_spectrum flips k and conjugates modes") {
  const auto s = solve_cell(paper_a(), unit(), 0.16, 50, 4);
  const auto c = conjugate_spectrum(s);
  CHECK(c.k == -0.16);
  CHECK((c.eigenvalues - s.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  for (int n = 0; n < 4; ++n)
    for (double y : {0.0, 0.31, 0.77}) {
      const cplx a = s.modes[n].evaluate(y);
      const cplx b = c.modes[n].evaluate(y);
      CHECK(std::abs(b - std::conj(a)) < 1e-12);
    }

  // k=0 spectra conjugate to themselves (real modes)
  const auto s0 = solve_cell(paper_a(), unit(), 0.0, 50, 3);
  const auto c0 = conjugate_spectrum(s0);
  CHECK(c0.k == 0.0);
  for (int n = 0; n < 3; ++n)
    CHECK((c0.modes[n].coeffs - s0.modes[n].coeffs.conjugate()).cwiseAbs().maxCoeff() == 0.0);

  // solving -k from scratch reproduces the eigenvalues
  const auto fresh = solve_cell(paper_a(), unit(), -0.16, 50, 4);
  for (int n = 0; n < 4; ++n)
    CHECK(std::abs(fresh.eigenvalues[n] - s.eigenvalues[n]) <= 1e-10 * s.eigenvalues[n]);
}

TEST_CASE("conjugate free mode is the opposite exponential") {
  const double k = 0.16;
  const auto s = solve_cell(unit(), unit(), k, 120, 2);
  const auto c = conjugate_spectrum(s);
  // band 1 is e^{2 i pi k y} up to gauge; its conjugate must be e^{-2 i pi k y}
  const cplx ratio = c.modes[0].evaluate(0.25) / c.modes[0].evaluate(0.0);
  CHECK(std::abs(ratio - std::polar(1.0, -2.0 * pi * k * 0.25)) < 1e-4);
}

TEST_CASE("coupling coefficients for the free cell") {
  const double k = 0.16;
  const int nb = 4;
  const auto s = solve_cell(unit(), unit(), k, 120, nb);
  const auto cc = coupling(s, unit(), unit(), first_indices(nb));

  // c(k,n,n) = 4 i pi (m+k) with band->m mapping {0,-1,1,-2}
  const int band_m[] = {0, -1, 1, -2};
  for (int n = 0; n < nb; ++n) {
    const cplx expect = cplx(0.0, 4.0 * pi * (band_m[n] + k));
    CHECK(std::abs(cc.c(n, n) - expect) < 1e-3 * std::abs(expect));
  }
  // b = identity for rho = 1
  CHECK(max_abs(cc.b - Eigen::MatrixXcd::Identity(nb, nb)) < 1e-8);
}

TEST_CASE("coupling identities") {
  const double k = 0.21;
  const int nb = 5;
  const auto s = solve_cell(paper_a(), paper_a(), k, 50, nb);
  const auto idx = first_indices(nb);
  const auto cc = coupling(s, paper_a(), paper_a(), idx);

  // skew-Hermitian c, Hermitian b, positive diagonal b
  CHECK(max_abs(cc.c + cc.c.adjoint()) < 1e-10);
  CHECK(max_abs(cc.b - cc.b.adjoint()) < 1e-10);
  for (int n = 0; n < nb; ++n) {
    CHECK(cc.b(n, n).real() > 0.0);
    CHECK(std::abs(cc.c(n, n).real()) <= 1e-10 * std::max(1e-30, std::abs(cc.c(n, n))));
  }

  // conjugation identities via conjugate_spectrum
  const auto cm = coupling(conjugate_spectrum(s), paper_a(), paper_a(), idx);
  CHECK(max_abs(cc.c - cm.c.conjugate()) < 1e-10);
  CHECK(max_abs(cc.c + cm.c.transpose()) < 1e-10);
}

TEST_CASE("c(0,n,n) = 0 for real eigenvectors") {
  const auto s = solve_cell(paper_a(), unit(), 0.0, 50, 4);
  const auto cc = coupling(s, paper_a(), unit(), first_indices(4));
  for (int n = 0; n < 4; ++n) CHECK(std::abs(cc.c(n, n)) < 1e-10);
}

TEST_CASE("weak formulation residual of computed modes") {
  const double k = 0.16;
  const auto pencil = assemble(Mesh1D::unit_cell(50), paper_a(), unit(),
                               BoundaryTreatment::quasi_periodic(k));
  const auto s = solve_cell(paper_a(), unit(), k, 50, 5);
  for (int n = 0; n < 5; ++n) {
    const Eigen::VectorXcd r =
        pencil.stiffness * s.modes[n].coeffs - s.eigenvalues[n] * (pencil.mass * s.modes[n].coeffs);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("band sweep") {
  const auto single = band_sweep(unit(), unit(), {0.0}, 30, 3);
  CHECK(single.size() == 1);

  // symmetry about k=0
  const std::vector<double> sym = {-0.3, -0.16, 0.16, 0.3};
  const auto spectra = band_sweep(paper_a(), unit(), sym, 50, 6);
  for (int i = 0; i < 2; ++i) {
    const auto& neg = spectra[i];
    const auto& pos = spectra[3 - i];
    CHECK((neg.eigenvalues - pos.eigenvalues).cwiseAbs().maxCoeff() <
          1e-9 * pos.eigenvalues.cwiseAbs().maxCoeff());
  }

  // order preserved and parallel run identical to serial
  const auto par = band_sweep(paper_a(), unit(), sym, 50, 6, 3);
  for (size_t i = 0; i < sym.size(); ++i) {
    CHECK(par[i].k == spectra[i].k);
    CHECK((par[i].eigenvalues - spectra[i].eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS((void)band_sweep(unit(), unit(), {0.7}, 30, 2), Error);
}

TEST_CASE("paper grid: 63 spectra, simple eigenvalues off k=0") {
  std::vector<double> grid;
  for (int j = 0; j < 63; ++j) grid.push_back(j / 125.0);
  const auto spectra = band_sweep(paper_a(), unit(), grid, 50, 10);
  CHECK(spectra.size() == 63);
  for (size_t i = 1; i < spectra.size(); ++i)
    for (const auto& g : spectra[i].multiplicity_groups) CHECK(g.size() == 1);
}
