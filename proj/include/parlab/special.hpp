#ifndef PARLAB_SPECIAL_HPP
#define PARLAB_SPECIAL_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "parlab/errors.hpp"

namespace parlab {

namespace detail {

// Power series sum z^n / n^2, used for |z| <= 1/2.
inline double dilog_series(double z) {
  double term = z, sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    const double add = term / (static_cast<double>(n) * n);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    term *= z;
  }
  return sum;
}

}  // namespace detail

/// Real dilogarithm Li2(z) = -int_0^z ln(1-x)/x dx on [-1, 1].
inline double dilog(double z) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (!(z >= -1.0 && z <= 1.0)) throw ConfigError("dilog: argument " + std::to_string(z) + " outside [-1, 1]");
  if (z == 1.0) return pi2_6;
  if (std::abs(z) <= 0.5) return detail::dilog_series(z);
  if (z > 0.5) return pi2_6 - std::log(z) * std::log1p(-z) - detail::dilog_series(1.0 - z);
  // z < -1/2: Landen maps onto z/(z-1) in (1/3, 1/2].
  const double l = std::log1p(-z);
  return -detail::dilog_series(z / (z - 1.0)) - 0.5 * l * l;
}

}  // namespace parlab

#endif  // PARLAB_SPECIAL_HPP
