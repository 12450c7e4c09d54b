#ifndef PARLAB_CHAIN_HPP
#define PARLAB_CHAIN_HPP

// Tight-binding chains with modified bonds.
//
// Sites and bonds are 1-based. Bond b joins sites b and b+1; on a periodic
// chain bond n_sites is the wrap-around link (n_sites, 1).

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "parlab/errors.hpp"

namespace parlab {

enum class Boundary { open, periodic };

inline std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

struct ModifiedBond {
  int bond = 1;
  double ratio = 1.0;  // hopping on this bond is ratio * base_hopping

  friend bool operator==(const ModifiedBond&, const ModifiedBond&) = default;
};

struct ChainSpec {
  int n_sites = 2;
  Boundary boundary = Boundary::open;
  double base_hopping = 1.0;
  std::vector<ModifiedBond> modified_bonds;
  int n_particles = 1;

  int n_bonds() const { return boundary == Boundary::open ? n_sites - 1 : n_sites; }

  /// Hopping ratio of bond b (1 when unmodified).
  double ratio(int bond) const {
    for (const auto& m : modified_bonds)
      if (m.bond == bond) return m.ratio;
    return 1.0;
  }

  void validate() const {
    if (n_sites < 2) throw ConfigError("chain needs at least 2 sites, got " + std::to_string(n_sites));
    if (boundary == Boundary::periodic && n_sites < 3)
      throw ConfigError("periodic chain needs at least 3 sites");
    if (!(base_hopping > 0.0)) throw ConfigError("base hopping must be positive");
    if (n_particles < 0 || n_particles > n_sites)
      throw ConfigError("particle number " + std::to_string(n_particles) + " outside [0, " +
                        std::to_string(n_sites) + "]");
    std::vector<int> seen;
    seen.reserve(modified_bonds.size());
    for (const auto& m : modified_bonds) {
      if (m.bond < 1 || m.bond > n_bonds())
        throw ConfigError("bond index " + std::to_string(m.bond) + " outside [1, " +
                          std::to_string(n_bonds()) + "]");
      if (!(m.ratio > 0.0))
        throw ConfigError("bond " + std::to_string(m.bond) + " has non-positive ratio");
      if (std::find(seen.begin(), seen.end(), m.bond) != seen.end())
        throw ConfigError("bond " + std::to_string(m.bond) + " modified twice");
      seen.push_back(m.bond);
    }
  }

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

/// Homogeneous chain at half filling (rounded down for odd n).
inline ChainSpec half_filled_chain(int n_sites, Boundary boundary = Boundary::open) {
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.boundary = boundary;
  spec.n_particles = n_sites / 2;
  return spec;
}

enum class PatternKind { single, alternating, dot };

/// A group of modified bonds anchored at bond `anchor`.
///
/// single: one bond at anchor. alternating: bonds anchor, anchor+2, ... with
/// unmodified bonds in between, one ratio per modified bond. dot: the two
/// successive bonds anchor and anchor+1 with a common ratio.
struct ImpurityPattern {
  PatternKind kind = PatternKind::single;
  int anchor = 1;
  std::vector<double> ratios{1.0};

  static ImpurityPattern single(int anchor, double ratio) {
    return {PatternKind::single, anchor, {ratio}};
  }
  static ImpurityPattern alternating(int anchor, int n_imp, double ratio) {
    if (n_imp < 1) throw ConfigError("alternating pattern needs n_imp >= 1");
    return {PatternKind::alternating, anchor, std::vector<double>(static_cast<std::size_t>(n_imp), ratio)};
  }
  static ImpurityPattern alternating(int anchor, std::vector<double> ratios) {
    if (ratios.empty()) throw ConfigError("alternating pattern needs at least one ratio");
    return {PatternKind::alternating, anchor, std::move(ratios)};
  }
  static ImpurityPattern dot(int anchor, double ratio) {
    return {PatternKind::dot, anchor, {ratio}};
  }

  int n_imp() const {
    switch (kind) {
      case PatternKind::single: return 1;
      case PatternKind::dot: return 2;
      case PatternKind::alternating: return static_cast<int>(ratios.size());
    }
    return 0;
  }

  /// Last bond index touched by the pattern.
  int last_bond() const {
    switch (kind) {
      case PatternKind::single: return anchor;
      case PatternKind::dot: return anchor + 1;
      case PatternKind::alternating: return anchor + 2 * (n_imp() - 1);
    }
    return anchor;
  }

  std::vector<ModifiedBond> bonds() const {
    if (ratios.empty()) throw ConfigError("impurity pattern has no ratios");
    std::vector<ModifiedBond> out;
    switch (kind) {
      case PatternKind::single:
        out.push_back({anchor, ratios.front()});
        break;
      case PatternKind::dot:
        out.push_back({anchor, ratios.front()});
        out.push_back({anchor + 1, ratios.front()});
        break;
      case PatternKind::alternating:
        for (std::size_t i = 0; i < ratios.size(); ++i)
          out.push_back({anchor + 2 * static_cast<int>(i), ratios[i]});
        break;
    }
    return out;
  }
};

/// Dense single-particle Hamiltonian: -t on every bond, -ratio*t on modified
/// ones, zero diagonal. Entries are written pairwise so the result is exactly
/// symmetric.
inline Eigen::MatrixXd build_chain(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int b = 1; b <= spec.n_bonds(); ++b) {
    const int i = b - 1;
    const int j = b % n;  // wrap-around for the periodic bond n
    const double t = -spec.base_hopping * spec.ratio(b);
    h(i, j) = t;
    h(j, i) = t;
  }
  return h;
}

/// Returns a copy of `spec` with the pattern's bonds added.
inline ChainSpec place_pattern(const ChainSpec& spec, const ImpurityPattern& pattern) {
  if (pattern.anchor < 1 || pattern.last_bond() > spec.n_bonds())
    throw ConfigError("impurity pattern [" + std::to_string(pattern.anchor) + ", " +
                      std::to_string(pattern.last_bond()) + "] overflows a chain with " +
                      std::to_string(spec.n_bonds()) + " bonds");
  ChainSpec out = spec;
  for (const auto& b : pattern.bonds()) {
    const bool taken = std::any_of(out.modified_bonds.begin(), out.modified_bonds.end(),
                                   [&](const ModifiedBond& m) { return m.bond == b.bond; });
    if (taken) throw ConfigError("impurity pattern overlaps modified bond " + std::to_string(b.bond));
    out.modified_bonds.push_back(b);
  }
  std::sort(out.modified_bonds.begin(), out.modified_bonds.end(),
            [](const ModifiedBond& a, const ModifiedBond& b) { return a.bond < b.bond; });
  return out;
}

/// Even and odd member of a boundary-anchored configuration. The region is
/// always [1, region_len].
struct ParityPair {
  ChainSpec even;
  int even_region_len = 0;
  ChainSpec odd;
  int odd_region_len = 0;
};

/// Builds the configuration pair in which the region border and every
/// modified bond move together by one site. The member whose region length
/// is even becomes `even`.
inline ParityPair parity_pair(const ChainSpec& spec, int region_len) {
  spec.validate();
  if (region_len < 1 || region_len + 1 > spec.n_sites)
    throw ConfigError("region length " + std::to_string(region_len) + " cannot be shifted inside " +
                      std::to_string(spec.n_sites) + " sites");
  ChainSpec shifted = spec;
  for (auto& m : shifted.modified_bonds) {
    m.bond += 1;
    if (m.bond > spec.n_bonds())
      throw ConfigError("shifting bond " + std::to_string(m.bond - 1) + " overflows the chain");
  }
  ParityPair pair;
  if (region_len % 2 == 0) {
    pair.even = spec;
    pair.even_region_len = region_len;
    pair.odd = std::move(shifted);
    pair.odd_region_len = region_len + 1;
  } else {
    pair.odd = spec;
    pair.odd_region_len = region_len;
    pair.even = std::move(shifted);
    pair.even_region_len = region_len + 1;
  }
  return pair;
}

}  // namespace parlab

#endif  // PARLAB_CHAIN_HPP
