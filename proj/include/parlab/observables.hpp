#ifndef PARLAB_OBSERVABLES_HPP
#define PARLAB_OBSERVABLES_HPP

// Entanglement entropy and particle-number variance of a contiguous block,
// both obtained from the block's correlation matrix.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "parlab/chain.hpp"
#include "parlab/errors.hpp"
#include "parlab/linalg.hpp"
#include "parlab/spectral.hpp"

namespace parlab {

/// Contiguous block of sites [start, start+length-1], 1-based.
struct Region {
  int start = 1;
  int length = 1;

  int last() const { return start + length - 1; }
};

struct RegionObservables {
  double entropy_nats = 0.0;
  double fluctuation = 0.0;
  Eigen::VectorXd restricted_spectrum;  // eigenvalues of G_A, ascending
};

inline constexpr double kSpectrumTolerance = 1e-8;
inline constexpr double kSpectrumClamp = 1e-14;

inline void check_region(const Region& region, int n_sites) {
  if (region.length < 1 || region.start < 1 || region.last() > n_sites)
    throw ConfigError("region [" + std::to_string(region.start) + ", " + std::to_string(region.last()) +
                      "] outside a chain of " + std::to_string(n_sites) + " sites");
}

/// Principal submatrix of G on the region.
inline Eigen::MatrixXd restrict(const Eigen::MatrixXd& g, const Region& region) {
  check_region(region, static_cast<int>(g.rows()));
  return g.block(region.start - 1, region.start - 1, region.length, region.length);
}

/// Entropy in nats of a restricted-correlation spectrum. Values within 1e-8 of
/// [0, 1] are clamped to [1e-14, 1-1e-14]; anything further out is an error.
inline double entropy_from_spectrum(const Eigen::VectorXd& nu) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    const double v = nu(k);
    if (!(v >= -kSpectrumTolerance && v <= 1.0 + kSpectrumTolerance))
      throw NumericalError("restricted correlation eigenvalue " + std::to_string(v) + " outside [0, 1]");
    const double c = std::clamp(v, kSpectrumClamp, 1.0 - kSpectrumClamp);
    s -= c * std::log(c) + (1.0 - c) * std::log1p(-c);
  }
  return s;
}

inline double entanglement_entropy(const Eigen::MatrixXd& g_a) {
  return entropy_from_spectrum(linalg::symmetric_eigenvalues(g_a));
}

/// Particle-number variance tr(G_A) - tr(G_A^2) of the block.
inline double charge_fluctuation(const Eigen::MatrixXd& g_a) {
  for (Eigen::Index i = 0; i < g_a.rows(); ++i) {
    const double v = g_a(i, i);
    if (!(v >= -kSpectrumTolerance && v <= 1.0 + kSpectrumTolerance))
      throw NumericalError("occupation " + std::to_string(v) + " outside [0, 1]");
  }
  // G_A is symmetric, so tr(G_A^2) is the squared Frobenius norm.
  return g_a.trace() - g_a.squaredNorm();
}

/// Observables of a block from an already occupied spectrum.
inline RegionObservables observe(const SpectralData& spectral, const Region& region) {
  check_region(region, spectral.n_sites());
  const Eigen::MatrixXd g_a = block_correlation(spectral, region.start, region.length);
  RegionObservables out;
  out.restricted_spectrum = linalg::symmetric_eigenvalues(g_a);
  out.entropy_nats = entropy_from_spectrum(out.restricted_spectrum);
  out.fluctuation = charge_fluctuation(g_a);
  return out;
}

/// Full pipeline: build, diagonalize, fill, restrict, measure.
inline RegionObservables region_observables(const ChainSpec& spec, const Region& region) {
  check_region(region, spec.n_sites);
  return observe(occupy(diagonalize(build_chain(spec)), spec.n_particles), region);
}

}  // namespace parlab

#endif  // PARLAB_OBSERVABLES_HPP
