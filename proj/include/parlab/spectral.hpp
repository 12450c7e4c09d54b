#ifndef PARLAB_SPECTRAL_HPP
#define PARLAB_SPECTRAL_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "parlab/errors.hpp"
#include "parlab/linalg.hpp"

namespace parlab {

/// Single-particle spectrum and orbitals, plus the number of filled levels.
struct SpectralData {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd orbitals;  // column k is the orbital of energies[k]
  int n_occupied = 0;

  int n_sites() const { return static_cast<int>(energies.size()); }
};

/// Diagonalizes a real symmetric single-particle Hamiltonian. Open chains
/// (tridiagonal matrices) take the tridiagonal MRRR path; everything else the
/// dense one. Both produce identical contracts.
inline SpectralData diagonalize(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw ConfigError("Hamiltonian must be square");
  const Eigen::Index n = h.rows();
  linalg::EigenSystem sys;
  if (n > 2 && linalg::is_tridiagonal(h)) {
    Eigen::VectorXd off(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) off(i) = h(i + 1, i);
    sys = linalg::tridiagonal_eigen(h.diagonal(), off);
  } else {
    sys = linalg::symmetric_eigen(h);
  }
  return SpectralData{std::move(sys.values), std::move(sys.vectors), 0};
}

/// Fills the lowest `n_particles` levels. Throws DegenerateFermiLevel when the
/// highest filled and lowest empty level coincide (within 1e-12 of the
/// bandwidth), since the ground state is then ambiguous.
inline SpectralData occupy(SpectralData spectral, int n_particles) {
  const int n = spectral.n_sites();
  if (n_particles < 0 || n_particles > n)
    throw ConfigError("cannot place " + std::to_string(n_particles) + " particles on " +
                      std::to_string(n) + " sites");
  if (n_particles > 0 && n_particles < n) {
    const double bandwidth = spectral.energies(n - 1) - spectral.energies(0);
    const double gap = spectral.energies(n_particles) - spectral.energies(n_particles - 1);
    if (gap < 1e-12 * bandwidth)
      throw DegenerateFermiLevel("degenerate Fermi level: " + std::to_string(n) + " sites, " +
                                 std::to_string(n_particles) + " particles, gap " + std::to_string(gap));
  }
  spectral.n_occupied = n_particles;
  return spectral;
}

/// Ground-state correlation matrix G_ij = <c_i^dag c_j> over the whole chain.
inline Eigen::MatrixXd correlation_matrix(const SpectralData& spectral) {
  const Eigen::Index n = spectral.n_sites();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  if (spectral.n_occupied == 0) return g;
  const auto occ = spectral.orbitals.leftCols(spectral.n_occupied);
  g.selfadjointView<Eigen::Lower>().rankUpdate(occ);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

/// Principal block of G on sites [start, start+length-1] (1-based), built
/// directly from the occupied orbitals restricted to those rows.
inline Eigen::MatrixXd block_correlation(const SpectralData& spectral, int start, int length) {
  if (start < 1 || length < 0 || start + length - 1 > spectral.n_sites())
    throw ConfigError("region [" + std::to_string(start) + ", " + std::to_string(start + length - 1) +
                      "] outside a chain of " + std::to_string(spectral.n_sites()) + " sites");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(length, length);
  if (spectral.n_occupied == 0 || length == 0) return g;
  const auto rows = spectral.orbitals.block(start - 1, 0, length, spectral.n_occupied);
  g.selfadjointView<Eigen::Lower>().rankUpdate(rows);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

}  // namespace parlab

#endif  // PARLAB_SPECTRAL_HPP
