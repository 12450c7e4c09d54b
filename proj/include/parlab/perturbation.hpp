#ifndef PARLAB_PERTURBATION_HPP
#define PARLAB_PERTURBATION_HPP

// First-order perturbation theory in (lambda - 1) around the homogeneous open
// chain, using its analytic plane-wave eigenstates.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parlab/errors.hpp"

namespace parlab {

/// d F / d lambda at lambda = 1 for the region [1, region_len] of a
/// half-filled open chain of n_sites sites whose bond `bond` carries lambda.
inline double fluctuation_first_order(int n_sites, int bond, int region_len) {
  if (n_sites < 2 || n_sites % 2 != 0) throw ConfigError("first-order fluctuation needs an even open chain");
  if (bond < 1 || bond >= n_sites) throw ConfigError("bond " + std::to_string(bond) + " outside the chain");
  if (region_len < 1 || region_len > n_sites) throw ConfigError("region outside the chain");

  const int n = n_sites, half = n / 2;
  const double norm = std::sqrt(2.0 / (n + 1));
  Eigen::VectorXd k(n), energy(n);
  for (int l = 1; l <= n; ++l) {
    k(l - 1) = std::numbers::pi * l / (n + 1);
    energy(l - 1) = -2.0 * std::cos(k(l - 1));
  }
  auto phi = [&](int level, int site) { return norm * std::sin(k(level) * site); };

  // Unperturbed orbitals on the region, split into filled and empty levels.
  Eigen::MatrixXd occ(region_len, half), unocc(region_len, n - half);
  for (int i = 1; i <= region_len; ++i) {
    for (int l = 0; l < half; ++l) occ(i - 1, l) = phi(l, i);
    for (int l = half; l < n; ++l) unocc(i - 1, l - half) = phi(l, i);
  }

  // W_qk = <q| dH/dlambda |k> / (E_k - E_q), dH/dlambda = -(|b><b+1| + h.c.).
  Eigen::MatrixXd w(n - half, half);
  for (int q = half; q < n; ++q)
    for (int kk = 0; kk < half; ++kk) {
      const double gap = energy(kk) - energy(q);
      if (std::abs(gap) < 1e-12) throw NumericalError("degenerate denominator in first-order perturbation theory");
      const double v = -(phi(q, bond) * phi(kk, bond + 1) + phi(q, bond + 1) * phi(kk, bond));
      w(q - half, kk) = v / gap;
    }

  const Eigen::MatrixXd g0 = occ * occ.transpose();
  const Eigen::MatrixXd half_g1 = unocc * w * occ.transpose();
  const Eigen::MatrixXd g1 = half_g1 + half_g1.transpose();
  return g1.trace() - 2.0 * (g0.cwiseProduct(g1)).sum();
}

/// First-order slope of the fluctuation parity difference at fixed n_sites:
/// the even member cuts at the even one of (region_len, region_len+1) and the
/// odd member at the other, each with the modified bond on its border.
inline double appendix_pt_slope(int n_sites, int region_len) {
  const int even = region_len % 2 == 0 ? region_len : region_len + 1;
  const int odd = region_len % 2 == 0 ? region_len + 1 : region_len;
  if (std::max(even, odd) >= n_sites) throw ConfigError("cut too close to the chain end");
  return fluctuation_first_order(n_sites, even, even) - fluctuation_first_order(n_sites, odd, odd);
}

struct Extrapolation {
  double value = 0.0;  // intercept at 1/L = 0
  double slope = 0.0;  // coefficient of 1/L
  std::vector<int> sizes;
  std::vector<double> samples;
};

/// Least-squares line a + b/L through (L, y) pairs.
inline Extrapolation extrapolate_inverse_size(const std::vector<int>& sizes, const std::vector<double>& values) {
  if (sizes.size() != values.size() || sizes.size() < 2) throw ConfigError("extrapolation needs at least two sizes");
  const auto m = static_cast<Eigen::Index>(sizes.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = 1.0 / sizes[static_cast<std::size_t>(i)];
    y(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1), sizes, values};
}

/// Extrapolates appendix_pt_slope at region_len = L * num / den to L -> inf.
/// Every L must make the region length an integer.
inline Extrapolation extrapolate_pt_slope(const std::vector<int>& sizes, int num, int den) {
  if (num < 1 || den < 2 * num) throw ConfigError("aspect must lie in (0, 1/2]");
  std::vector<double> values;
  for (int n : sizes) {
    if ((n * num) % den != 0) throw ConfigError("L=" + std::to_string(n) + " is not compatible with the aspect");
    values.push_back(appendix_pt_slope(n, n * num / den));
  }
  return extrapolate_inverse_size(sizes, values);
}

}  // namespace parlab

#endif  // PARLAB_PERTURBATION_HPP
