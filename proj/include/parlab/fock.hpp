#ifndef PARLAB_FOCK_HPP
#define PARLAB_FOCK_HPP

// Many-body ground states of small chains in the fixed-particle-number
// sector, with reduced density matrices built directly from bitstrings.
//
// Bit i-1 of a basis state is the occupation of site i. States are products
// of creation operators ordered by site, c_{i1}^dag c_{i2}^dag ... |0> with
// i1 < i2 < ..., so hopping picks up the sign of the fermions it passes.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "parlab/chain.hpp"
#include "parlab/errors.hpp"
#include "parlab/linalg.hpp"
#include "parlab/observables.hpp"

namespace parlab {

inline constexpr int kMaxFockSites = 14;

struct FockState {
  int n_sites = 0;
  int n_particles = 0;
  std::vector<std::uint32_t> basis;  // sorted bitstrings with n_particles bits set
  Eigen::VectorXd amplitudes;
  double energy = 0.0;
  double gap = 0.0;  // to the first excited state of the sector
};

inline std::vector<std::uint32_t> fock_sector(int n_sites, int n_particles) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << n_sites); ++s)
    if (std::popcount(s) == n_particles) out.push_back(s);
  return out;
}

/// Ground state of the chain's sector Hamiltonian.
inline FockState ground_state_fock(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  if (n > kMaxFockSites) throw ConfigError("Fock oracle limited to " + std::to_string(kMaxFockSites) + " sites");
  FockState st;
  st.n_sites = n;
  st.n_particles = spec.n_particles;
  st.basis = fock_sector(n, spec.n_particles);
  const auto dim = static_cast<Eigen::Index>(st.basis.size());
  if (dim == 0) throw ConfigError("empty Fock sector");
  std::unordered_map<std::uint32_t, Eigen::Index> index;
  for (Eigen::Index i = 0; i < dim; ++i) index[st.basis[static_cast<std::size_t>(i)]] = i;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int b = 1; b <= spec.n_bonds(); ++b) {
    const int i = b - 1, j = b % n;  // sites as bit positions
    const double t = -spec.base_hopping * spec.ratio(b);
    const int lo = std::min(i, j), hi = std::max(i, j);
    const std::uint32_t between = ((1u << hi) - 1u) & ~((1u << (lo + 1)) - 1u);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const std::uint32_t s = st.basis[static_cast<std::size_t>(col)];
      // t (c_lo^dag c_hi + c_hi^dag c_lo): moving one fermion across the
      // occupied sites strictly between lo and hi.
      const bool occ_lo = s >> lo & 1u, occ_hi = s >> hi & 1u;
      if (occ_lo == occ_hi) continue;
      const std::uint32_t target = s ^ (1u << lo) ^ (1u << hi);
      const double sign = (std::popcount(s & between) % 2 == 0) ? 1.0 : -1.0;
      h(index.at(target), col) += t * sign;
    }
  }
  const auto sys = linalg::symmetric_eigen(h);
  st.energy = sys.values(0);
  st.gap = dim > 1 ? sys.values(1) - sys.values(0) : INFINITY;
  if (st.gap < 1e-10) throw NumericalError("degenerate many-body ground state (gap " + std::to_string(st.gap) + ")");
  st.amplitudes = sys.vectors.col(0);
  return st;
}

/// Entropy of a contiguous region from the reduced density matrix. The
/// region's modes are moved to the front of the operator ordering, which
/// costs (-1)^{N_region * N_before} for N_before fermions left of it.
inline double rdm_entropy(const FockState& st, const Region& region) {
  check_region(region, st.n_sites);
  const int first = region.start - 1, len = region.length;
  const std::uint32_t region_mask = ((1u << len) - 1u) << first;
  const std::uint32_t before_mask = (1u << first) - 1u;

  // Block the state by region occupation number: psi[n_a] is a matrix with
  // rows = region configurations, columns = complement configurations.
  std::map<int, std::map<std::uint32_t, int>> rows, cols;
  struct Entry {
    int n_a;
    std::uint32_t a, rest;
    double amp;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < st.basis.size(); ++i) {
    const std::uint32_t s = st.basis[i];
    const std::uint32_t a = (s & region_mask) >> first;
    const std::uint32_t rest = s & ~region_mask;
    const int n_a = std::popcount(a);
    const int n_before = std::popcount(s & before_mask);
    const double sign = (n_a * n_before) % 2 == 0 ? 1.0 : -1.0;
    entries.push_back({n_a, a, rest, sign * st.amplitudes(static_cast<Eigen::Index>(i))});
    rows[n_a].emplace(a, 0);
    cols[n_a].emplace(rest, 0);
  }
  double entropy = 0.0;
  for (auto& [n_a, r] : rows) {
    auto& c = cols[n_a];
    int k = 0;
    for (auto& [key, idx] : r) idx = k++;
    k = 0;
    for (auto& [key, idx] : c) idx = k++;
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
    for (const auto& e : entries)
      if (e.n_a == n_a) psi(r.at(e.a), c.at(e.rest)) = e.amp;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(psi).singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const double p = sv(i) * sv(i);
      if (p > 1e-300) entropy -= p * std::log(p);
    }
  }
  return entropy;
}

/// Variance of the particle number in the region.
inline double fock_fluctuation(const FockState& st, const Region& region) {
  check_region(region, st.n_sites);
  const std::uint32_t mask = ((1u << region.length) - 1u) << (region.start - 1);
  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < st.basis.size(); ++i) {
    const double p = st.amplitudes(static_cast<Eigen::Index>(i)) * st.amplitudes(static_cast<Eigen::Index>(i));
    const int n_a = std::popcount(st.basis[i] & mask);
    mean += p * n_a;
    second += p * n_a * n_a;
  }
  return second - mean * mean;
}

}  // namespace parlab

#endif  // PARLAB_FOCK_HPP
