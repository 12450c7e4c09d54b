#ifndef PARLAB_SCATTERING_HPP
#define PARLAB_SCATTERING_HPP

// Scattering off modified bonds: effective strength of alternating blocks,
// the Fermi-surface phase shift, plane-wave solutions through a block, the
// resonant-level transmission and the near-zero modes of a finite chain.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parlab/chain.hpp"
#include "parlab/errors.hpp"
#include "parlab/spectral.hpp"

namespace parlab {

using cplx = std::complex<double>;

/// Product of the bond ratios of an alternating block.
inline double effective_strength(std::span<const double> ratios) {
  if (ratios.empty()) throw ConfigError("effective_strength: empty ratio list");
  double prod = 1.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw ConfigError("effective_strength: ratios must be positive");
    prod *= r;
  }
  return prod;
}

struct PhaseShiftData {
  double lambda_eff = 1.0;
  double s = 1.0;   // transmission amplitude at the Fermi surface, cos(xi)
  double xi = 0.0;  // signed phase shift in (-pi/2, pi/2)
  int parity_sign = 1;

  /// Orthogonal relation (psi_R(l+), psi_L(l-)) = M (psi_R(l-), psi_L(l+)).
  Eigen::Matrix2d exterior_relation() const {
    Eigen::Matrix2d m;
    m << std::cos(xi), std::sin(xi), -std::sin(xi), std::cos(xi);
    return m;
  }
};

/// Scaling variable s = 2L/(1+L^2) = sin(2 arctan L).
inline double scaling_variable(double lambda_eff) {
  return 2.0 * lambda_eff / (1.0 + lambda_eff * lambda_eff);
}

/// Phase shift at k_F = pi/2 for a defect of effective strength lambda_eff.
/// parity_sign is (-1)^{j0}; an even anchor gives the + branch.
inline PhaseShiftData phase_shift(double lambda_eff, int parity_sign = 1) {
  if (!(lambda_eff > 0.0)) throw ConfigError("phase_shift: effective strength must be positive");
  if (parity_sign != 1 && parity_sign != -1) throw ConfigError("phase_shift: parity sign must be +1 or -1");
  PhaseShiftData out;
  out.lambda_eff = lambda_eff;
  out.s = scaling_variable(lambda_eff);
  out.xi = parity_sign * (std::numbers::pi / 2.0 - 2.0 * std::atan(lambda_eff));
  out.parity_sign = parity_sign;
  return out;
}

/// Plane wave through an alternating block placed at sites 0..2N-1.
/// Left of the block psi(j) = A e^{ikj} + B e^{-ikj}, right of it
/// psi(j) = C e^{ikj} + D e^{-ikj}; `interior[n]` is psi(n).
struct BlockWaveSolution {
  double k = std::numbers::pi / 2.0;
  cplx a, b, c, d;
  std::vector<cplx> interior;

  /// Wave amplitude at any site j (block-local coordinates).
  cplx at(int j) const {
    const int n = static_cast<int>(interior.size());
    if (j < 0) return a * std::polar(1.0, k * j) + b * std::polar(1.0, -k * j);
    if (j >= n) return c * std::polar(1.0, k * j) + d * std::polar(1.0, -k * j);
    return interior[static_cast<std::size_t>(j)];
  }
};

/// Hopping ratio of the bond (j, j+1) in block-local coordinates.
inline double block_bond_ratio(std::span<const double> ratios, int j) {
  const int n = static_cast<int>(ratios.size());
  if (j >= 0 && j <= 2 * n - 2 && j % 2 == 0) return ratios[static_cast<std::size_t>(j / 2)];
  return 1.0;
}

/// Propagates the left amplitudes (A, B) through the block with the
/// site-by-site recursion and matches onto the right plane waves.
inline BlockWaveSolution solve_block(std::span<const double> ratios, double k, cplx amp_a, cplx amp_b) {
  if (ratios.empty()) throw ConfigError("solve_block: empty block");
  for (double r : ratios)
    if (!(r > 0.0)) throw ConfigError("solve_block: ratios must be positive");
  if (!(k > 0.0 && k < std::numbers::pi)) throw ConfigError("solve_block: momentum must lie in (0, pi)");

  const int n_imp = static_cast<int>(ratios.size());
  const int sites = 2 * n_imp;
  const double two_cos = 2.0 * std::cos(k);
  const cplx e_plus = std::polar(1.0, k);
  const cplx e_minus = std::polar(1.0, -k);

  BlockWaveSolution sol;
  sol.k = k;
  sol.a = amp_a;
  sol.b = amp_b;
  sol.interior.resize(static_cast<std::size_t>(sites));
  auto& c = sol.interior;
  c[0] = amp_a + amp_b;
  c[1] = (amp_a * e_plus + amp_b * e_minus) / ratios[0];
  for (int n = 2; n < sites; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (n % 2 == 0)
      c[un] = two_cos * c[un - 1] - block_bond_ratio(ratios, n - 2) * c[un - 2];
    else
      c[un] = (two_cos * c[un - 1] - c[un - 2]) / block_bond_ratio(ratios, n - 1);
  }

  // Right matching:  C e^{ik 2N}     + D e^{-ik 2N}     = 2cos k c^{2N-1} - lam c^{2N-2}
  //                  C e^{ik (2N-1)} + D e^{-ik (2N-1)} = c^{2N-1}
  const cplx r1 = two_cos * c[static_cast<std::size_t>(sites - 1)] -
                  ratios.back() * c[static_cast<std::size_t>(sites - 2)];
  const cplx r2 = c[static_cast<std::size_t>(sites - 1)];
  const cplx m11 = std::polar(1.0, k * sites), m12 = std::polar(1.0, -k * sites);
  const cplx m21 = std::polar(1.0, k * (sites - 1)), m22 = std::polar(1.0, -k * (sites - 1));
  const cplx det = m11 * m22 - m12 * m21;
  if (std::abs(det) < 1e-14) throw NumericalError("solve_block: singular matching at k=" + std::to_string(k));
  sol.c = (r1 * m22 - m12 * r2) / det;
  sol.d = (m11 * r2 - r1 * m21) / det;
  return sol;
}

/// Largest per-site violation of H psi = -2cos(k) psi on the sites
/// [-margin, 2N-1+margin] around the block.
inline double block_residual(std::span<const double> ratios, const BlockWaveSolution& sol, int margin = 3) {
  const int sites = 2 * static_cast<int>(ratios.size());
  const double energy = -2.0 * std::cos(sol.k);
  double worst = 0.0;
  for (int j = -margin; j < sites + margin; ++j) {
    const double t_left = block_bond_ratio(ratios, j - 1);
    const double t_right = block_bond_ratio(ratios, j);
    const cplx h_psi = -(t_left * sol.at(j - 1) + t_right * sol.at(j + 1));
    worst = std::max(worst, std::abs(h_psi - energy * sol.at(j)));
  }
  return worst;
}

/// Interior amplitudes at k = pi/2 from the closed-form products:
/// even n: (-1)^{n/2} (A+B) prod_{i<n/2} lam_i,
/// odd n:  (-1)^{(n-1)/2} i (A-B) / prod_{i<=(n-1)/2} lam_i.
inline std::vector<cplx> half_filling_block(std::span<const double> ratios, cplx amp_a, cplx amp_b) {
  if (ratios.empty()) throw ConfigError("half_filling_block: empty block");
  const int sites = 2 * static_cast<int>(ratios.size());
  std::vector<cplx> c(static_cast<std::size_t>(sites));
  const cplx i_unit(0.0, 1.0);
  for (int n = 0; n < sites; ++n) {
    if (n % 2 == 0) {
      double prod = 1.0;
      for (int i = 0; i < n / 2; ++i) prod *= ratios[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(n)] = ((n / 2) % 2 == 0 ? 1.0 : -1.0) * (amp_a + amp_b) * prod;
    } else {
      double prod = 1.0;
      for (int i = 0; i <= (n - 1) / 2; ++i) prod *= ratios[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(n)] = (((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * i_unit * (amp_a - amp_b) / prod;
    }
  }
  return c;
}

/// Transmission amplitude |t| of the block for a wave incident from the left.
inline double block_transmission(std::span<const double> ratios, double k) {
  const auto col_a = solve_block(ratios, k, 1.0, 0.0);
  const auto col_b = solve_block(ratios, k, 0.0, 1.0);
  // (C, D) = M (A, B); a wave with no left-moving part on the right has D = 0.
  const cplx m11 = col_a.c, m12 = col_b.c, m21 = col_a.d, m22 = col_b.d;
  if (std::abs(m22) < 1e-300) throw NumericalError("block_transmission: total reflection");
  return std::abs((m11 * m22 - m12 * m21) / m22);
}

/// Resonant-level transmission 1 / (1 + (1/4)(eps/lambda^2)^2) in units of
/// the bulk hopping; valid for |eps| <= 0.5.
inline double rlm_transmission(double lambda, double energy) {
  if (!(lambda > 0.0)) throw ConfigError("rlm_transmission: lambda must be positive");
  if (!(std::abs(energy) <= 0.5)) throw ConfigError("rlm_transmission: |energy| must be <= 0.5");
  const double x = energy / (lambda * lambda);
  return 1.0 / (1.0 + 0.25 * x * x);
}

/// Share of a wavefunction's weight on sublattice A (odd sites) within
/// [first, last], normalized by the weight in that window.
inline double sublattice_a_fraction(const Eigen::VectorXd& psi, int first, int last) {
  double a = 0.0, total = 0.0;
  for (int site = first; site <= last; ++site) {
    const double w = psi(site - 1) * psi(site - 1);
    total += w;
    if (site % 2 == 1) a += w;
  }
  return total > 0.0 ? a / total : 0.0;
}

struct NearZeroModes {
  std::array<double, 2> energies{};             // lower, upper
  std::array<Eigen::VectorXd, 2> wavefunctions;  // eigenvectors for `energies`
  // Sublattice-A share of |psi|^2 left of the block (sites 1..first bond)
  // and right of it (sites after the last bond), per eigenvector.
  std::array<double, 2> left_a_fraction{};
  std::array<double, 2> right_a_fraction{};
  // Combinations of the pair with maximal weight on the left / right half.
  Eigen::VectorXd left_mode;
  Eigen::VectorXd right_mode;
  double left_mode_b_weight = 0.0;   // leakage of the left mode onto B
  double right_mode_a_weight = 0.0;  // leakage of the right mode onto A

  double splitting() const { return energies[1] - energies[0]; }
};

/// Two single-particle levels closest to zero energy and their sublattice
/// structure. The block is the span of the modified bonds (the whole chain
/// when none are modified).
inline NearZeroModes near_zero_modes(const ChainSpec& spec) {
  const SpectralData sd = diagonalize(build_chain(spec));
  const int n = sd.n_sites();
  if (n < 2) throw ConfigError("near_zero_modes: need at least two sites");

  // Pair straddling zero: the highest level below the midpoint and the next.
  int upper = 0;
  while (upper < n && sd.energies(upper) < 0.0) ++upper;
  int lower = upper - 1;
  if (lower < 0) lower = 0, upper = 1;
  if (upper >= n) upper = n - 1, lower = n - 2;

  NearZeroModes out;
  out.energies = {sd.energies(lower), sd.energies(upper)};
  out.wavefunctions = {sd.orbitals.col(lower), sd.orbitals.col(upper)};

  int first_bond = 1, last_bond = spec.n_bonds();
  if (!spec.modified_bonds.empty()) {
    first_bond = spec.modified_bonds.front().bond;
    last_bond = first_bond;
    for (const auto& m : spec.modified_bonds) {
      first_bond = std::min(first_bond, m.bond);
      last_bond = std::max(last_bond, m.bond);
    }
  }
  for (int m = 0; m < 2; ++m) {
    out.left_a_fraction[m] = sublattice_a_fraction(out.wavefunctions[m], 1, first_bond);
    out.right_a_fraction[m] = sublattice_a_fraction(out.wavefunctions[m], std::min(last_bond + 1, n), n);
  }

  // Diagonalize the left-half projector inside the two-mode subspace.
  const int half = n / 2;
  Eigen::Matrix<double, Eigen::Dynamic, 2> basis(n, 2);
  basis.col(0) = out.wavefunctions[0];
  basis.col(1) = out.wavefunctions[1];
  const Eigen::Matrix2d proj = basis.topRows(half).transpose() * basis.topRows(half);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(proj);
  out.right_mode = basis * es.eigenvectors().col(0);
  out.left_mode = basis * es.eigenvectors().col(1);
  auto weight = [n](const Eigen::VectorXd& v, int first_site) {
    double w = 0.0;
    for (int site = first_site; site <= n; site += 2) w += v(site - 1) * v(site - 1);
    return w;
  };
  out.left_mode_b_weight = weight(out.left_mode, 2);
  out.right_mode_a_weight = weight(out.right_mode, 1);
  return out;
}

/// Open chain of `lead` metallic sites, an alternating block of n_imp weak
/// bonds starting at bond lead+1, and another `lead` sites. The block's left
/// end keeps an odd number of sites on the left, the configuration whose
/// near-zero pair splits like lambda^n_imp. lead = 0 gives a bare SSH chain
/// with weak bonds at both ends.
inline ChainSpec alternating_block_in_leads(int lead, int n_imp, double ratio) {
  if (lead < 0) throw ConfigError("lead length must not be negative");
  ChainSpec spec = half_filled_chain(2 * lead + 2 * n_imp);
  return place_pattern(spec, ImpurityPattern::alternating(lead + 1, n_imp, ratio));
}

}  // namespace parlab

#endif  // PARLAB_SCATTERING_HPP
