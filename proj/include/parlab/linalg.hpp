#ifndef PARLAB_LINALG_HPP
#define PARLAB_LINALG_HPP

// Thin LAPACK wrappers for real symmetric eigenproblems, using the MRRR
// drivers (dsyevr / dstemr).
//
// OpenBLAS 0.3.20 selects its Cooperlake kernels on recent Xeons, and those
// return non-orthogonal eigenvectors for degenerate spectra. Executables call
// select_safe_blas_kernel() first thing in main, and every solver runs a
// one-time self-check so a broken BLAS fails loudly instead of silently.

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>
#include <lapacke.h>

#include "parlab/errors.hpp"

extern "C" char* openblas_get_corename(void);
extern "C" void openblas_set_num_threads(int);

namespace parlab::linalg {

/// Re-executes the current process with OPENBLAS_CORETYPE=SkylakeX when
/// OpenBLAS picked its Cooperlake kernels and no core type was forced.
inline void select_safe_blas_kernel(char** argv) {
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  const char* core = openblas_get_corename();
  if (core == nullptr || std::strcmp(core, "Cooperlake") != 0) return;
  ::setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
  ::execv("/proc/self/exe", argv);
  // execv only returns on failure; the self-check will then report it.
}

/// Keeps each LAPACK call on the calling thread. Sweeps parallelize over grid
/// points instead, which also makes results independent of the worker count.
inline void single_threaded_blas() { openblas_set_num_threads(1); }

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k belongs to values[k]; empty when not requested
};

/// True when every entry off the three central diagonals is exactly zero.
inline bool is_tridiagonal(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if ((i > j + 1 || j > i + 1) && a(i, j) != 0.0) return false;
  return true;
}

namespace detail {

inline EigenSystem dsyevr(const Eigen::MatrixXd& a, bool want_vectors);

// Diagonalizes a 190-site periodic ring, whose spectrum is doubly degenerate,
// and checks orthonormality of the eigenvectors.
inline void self_check() {
  static std::once_flag once;
  static std::string failure;
  std::call_once(once, [] {
    const int n = 190;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, (i + 1) % n) = h((i + 1) % n, i) = -1.0;
    const EigenSystem sys = dsyevr(h, true);
    const double err = (sys.vectors.transpose() * sys.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err < 1e-10))
      failure = "eigensolver self-check failed (orthogonality error " + std::to_string(err) +
                "); the BLAS kernels are unreliable on this CPU, set OPENBLAS_CORETYPE=Haswell";
  });
  if (!failure.empty()) throw NumericalError(failure);
}

}  // namespace detail

/// Dense symmetric eigensolver (lower triangle is referenced).
inline EigenSystem symmetric_eigen(const Eigen::MatrixXd& a, bool want_vectors = true) {
  detail::self_check();
  return detail::dsyevr(a, want_vectors);
}

inline EigenSystem detail::dsyevr(const Eigen::MatrixXd& a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.rows() != a.cols()) throw ConfigError("symmetric_eigen: matrix is not square");
  EigenSystem out;
  out.values.resize(n);
  if (n == 0) return out;
  Eigen::MatrixXd work = a;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  if (want_vectors) out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', 'L', n, work.data(), n, 0.0, 0.0, 0, 0, 0.0,
      &found, out.values.data(), want_vectors ? out.vectors.data() : nullptr, n, support.data());
  if (info != 0 || found != n)
    throw NumericalError("dsyevr failed for a " + std::to_string(n) + "x" + std::to_string(n) +
                         " matrix (info=" + std::to_string(info) + ")");
  return out;
}

/// Symmetric tridiagonal eigensolver; `off` holds the n-1 sub-diagonal entries.
inline EigenSystem tridiagonal_eigen(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                                     bool want_vectors = true) {
  detail::self_check();
  const lapack_int n = static_cast<lapack_int>(diag.size());
  if (n > 0 && off.size() != n - 1) throw ConfigError("tridiagonal_eigen: off-diagonal length mismatch");
  EigenSystem out;
  out.values.resize(n);
  if (n == 0) return out;
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e(n);  // dstemr needs length n
  e.head(n - 1) = off;
  e(n - 1) = 0.0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  if (want_vectors) out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_dstemr(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &found,
      out.values.data(), want_vectors ? out.vectors.data() : nullptr, n, n, support.data(), &tryrac);
  if (info != 0 || found != n)
    throw NumericalError("dstemr failed for a " + std::to_string(n) + "-site tridiagonal matrix (info=" +
                         std::to_string(info) + ")");
  return out;
}

/// Eigenvalues only, ascending.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  return symmetric_eigen(a, false).values;
}

}  // namespace parlab::linalg

#endif  // PARLAB_LINALG_HPP
