#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "blochhom/fem.hpp"

namespace blochhom {

namespace {

[[noreturn]] void solver_failed(const HermitianPencil& pencil, const char* routine, int info) {
  fail(ErrorCode::solver_failure,
       std::string("solve_pencil: ") + routine + " failed with info=" + std::to_string(info) +
           " (n=" + std::to_string(pencil.dof_count()) +
           ", banded=" + (pencil.is_banded() ? "yes" : "no") + ")");
}

// Upper band width of a sparse Hermitian matrix.
int band_width(const Eigen::SparseMatrix<cplx>& m) {
  int kd = 0;
  for (int col = 0; col < m.outerSize(); ++col)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, col); it; ++it)
      if (std::abs(it.value()) > 0.0) kd = std::max(kd, std::abs(static_cast<int>(it.row()) - col));
  return kd;
}

void pack_band_upper(const Eigen::SparseMatrix<cplx>& m, int kd, std::vector<cplx>& ab) {
  const int n = static_cast<int>(m.rows());
  const int ldab = kd + 1;
  ab.assign(static_cast<size_t>(ldab) * n, cplx(0.0));
  for (int col = 0; col < n; ++col)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, col); it; ++it) {
      const int row = static_cast<int>(it.row());
      if (row > col) continue;
      ab[static_cast<size_t>(kd + row - col) + static_cast<size_t>(col) * ldab] = it.value();
    }
}

EigenModes package(const HermitianPencil& pencil, int m, const std::vector<double>& w,
                   const std::vector<cplx>& z, int n) {
  EigenModes out;
  out.eigenvalues = Eigen::Map<const Eigen::VectorXd>(w.data(), m);
  out.modes.reserve(m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd v =
        Eigen::Map<const Eigen::VectorXcd>(z.data() + static_cast<size_t>(j) * n, n);
    out.modes.emplace_back(pencil.mesh, pencil.bc, std::move(v));
  }
  return out;
}

// Banded path: eigenvalues from zhbgvx (jobz='N', O(n^2) for small bandwidth),
// eigenvectors by inverse iteration with a banded LU of K - lambda M. The
// full zhbgvx eigenvector path accumulates a dense n x n transform matrix,
// which is cubic in n; inverse iteration keeps the whole solve near-linear.
EigenModes solve_banded(const HermitianPencil& pencil, int num_modes) {
  const int n = pencil.dof_count();
  const int ka = band_width(pencil.stiffness);
  const int kb = band_width(pencil.mass);
  const int kd = std::max(ka, kb);

  std::vector<cplx> ab, bb;
  pack_band_upper(pencil.stiffness, kd, ab);
  pack_band_upper(pencil.mass, kd, bb);

  std::vector<double> w(n);
  std::vector<lapack_int> ifail(n);
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_zhbgvx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, kd, ab.data(), kd + 1,
                                   bb.data(), kd + 1, nullptr, n, 0.0, 0.0, 1, num_modes, abstol,
                                   &m, w.data(), nullptr, n, ifail.data());
  if (info != 0 || m < num_modes) solver_failed(pencil, "zhbgvx", static_cast<int>(info));

  // inverse iteration per eigenvalue
  const int kl = kd, ku = kd;
  const int ldab_lu = 2 * kl + ku + 1;
  std::vector<cplx> lu(static_cast<size_t>(ldab_lu) * n);
  std::vector<lapack_int> ipiv(n);
  std::vector<cplx> z(static_cast<size_t>(n) * num_modes);

  const auto& K = pencil.stiffness;
  const auto& M = pencil.mass;

  for (int j = 0; j < num_modes; ++j) {
    const double lambda = w[j];
    // tiny shift keeps the LU factor nonsingular at a converged eigenvalue
    const double sigma = lambda + 1e-12 * std::max(1.0, std::abs(lambda));

    // band-format A = K - sigma M (general band storage for zgbtrf)
    std::fill(lu.begin(), lu.end(), cplx(0.0));
    for (int col = 0; col < n; ++col) {
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(K, col); it; ++it)
        lu[static_cast<size_t>(kl + ku + it.row() - col) + static_cast<size_t>(col) * ldab_lu] +=
            it.value();
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(M, col); it; ++it)
        lu[static_cast<size_t>(kl + ku + it.row() - col) + static_cast<size_t>(col) * ldab_lu] -=
            sigma * it.value();
    }
    info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, lu.data(), ldab_lu, ipiv.data());
    // info > 0 (exact singularity) is fine for inverse iteration: the solve
    // still amplifies the eigen-direction; only argument errors are fatal.
    if (info < 0) solver_failed(pencil, "zgbtrf", static_cast<int>(info));

    std::mt19937 gen(0x5eed0 + static_cast<unsigned>(j));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(dist(gen), dist(gen));
    x /= x.norm();

    const auto orthogonalize_cluster = [&](Eigen::VectorXcd& v) {
      for (int i = 0; i < j; ++i) {
        if (std::abs(w[i] - lambda) > 1e-6 * std::max(1.0, std::abs(lambda))) continue;
        const Eigen::Map<const Eigen::VectorXcd> zi(z.data() + static_cast<size_t>(i) * n, n);
        v -= zi.dot(M * v) * zi;  // zi^H M v, M-orthogonal projection
      }
    };

    bool converged = false;
    for (int iter = 0; iter < 12 && !converged; ++iter) {
      Eigen::VectorXcd rhs = M * x;
      info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, lu.data(), ldab_lu, ipiv.data(),
                            rhs.data(), n);
      if (info != 0) solver_failed(pencil, "zgbtrs", static_cast<int>(info));
      x = rhs;
      orthogonalize_cluster(x);
      const double mnorm = std::sqrt(std::real(x.dot(M * x)));
      if (!(mnorm > 0.0)) solver_failed(pencil, "inverse iteration (collapse)", j);
      x /= mnorm;
      if (iter >= 1) {
        const Eigen::VectorXcd r = K * x - lambda * (M * x);
        const double scale = std::max(1.0, std::abs(lambda));
        converged = r.cwiseAbs().maxCoeff() <= 1e-9 * scale;
      }
    }
    if (!converged) solver_failed(pencil, "inverse iteration (no convergence)", j);
    Eigen::Map<Eigen::VectorXcd>(z.data() + static_cast<size_t>(j) * n, n) = x;
  }
  return package(pencil, num_modes, w, z, n);
}

EigenModes solve_dense(const HermitianPencil& pencil, int num_modes) {
  const int n = pencil.dof_count();
  Eigen::MatrixXcd A = pencil.stiffness;
  Eigen::MatrixXcd B = pencil.mass;
  std::vector<double> w(n);
  std::vector<cplx> z(static_cast<size_t>(n) * num_modes);
  std::vector<lapack_int> ifail(n);
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info =
      LAPACKE_zhegvx(LAPACK_COL_MAJOR, 1, 'V', 'I', 'L', n, A.data(), n, B.data(), n, 0.0, 0.0, 1,
                     num_modes, abstol, &m, w.data(), z.data(), n, ifail.data());
  if (info != 0 || m < num_modes) solver_failed(pencil, "zhegvx", static_cast<int>(info));
  return package(pencil, num_modes, w, z, n);
}

}  // namespace

EigenModes solve_pencil(const HermitianPencil& pencil, int num_modes) {
  if (num_modes < 1 || num_modes > pencil.dof_count())
    fail(ErrorCode::invalid_argument,
         "solve_pencil: num_modes must lie in [1, dof_count]");
  return pencil.is_banded() ? solve_banded(pencil, num_modes) : solve_dense(pencil, num_modes);
}

}  // namespace blochhom
