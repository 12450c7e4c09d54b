#ifndef PARLAB_THEORY_HPP
#define PARLAB_THEORY_HPP

// Closed-form predictions: effective central charge, fluctuation prefactor,
// and the first-order slopes of the parity differences at lambda = 1.

#include <cmath>
#include <numbers>
#include <string>

#include "parlab/errors.hpp"
#include "parlab/quadrature.hpp"
#include "parlab/scattering.hpp"
#include "parlab/special.hpp"

namespace parlab {

namespace detail {

inline void check_s(double s, const char* who) {
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError(std::string(who) + ": s must lie in (0, 1], got " + std::to_string(s));
}

// (1-s) ln(1-s), continuous at s = 1.
inline double one_minus_log(double s) { return s < 1.0 ? (1.0 - s) * std::log1p(-s) : 0.0; }

inline void check_aspect(double aspect, const char* who) {
  if (!(aspect >= 0.0 && aspect <= 0.5))
    throw ConfigError(std::string(who) + ": aspect must lie in [0, 1/2], got " + std::to_string(aspect));
}

}  // namespace detail

/// Effective central charge of an interval ending on a defect with
/// transmission amplitude s.
inline double c_effective(double s) {
  detail::check_s(s, "c_effective");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double logs = ((1.0 + s) * std::log1p(s) + detail::one_minus_log(s)) * std::log(s);
  return -6.0 / pi2 * (logs + (1.0 + s) * dilog(-s) + (1.0 - s) * dilog(s));
}

/// The same quantity after eliminating Li2(s) by Euler reflection.
inline double c_effective_reflected(double s) {
  detail::check_s(s, "c_effective_reflected");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return s - 1.0 -
         6.0 / pi2 * ((1.0 + s) * std::log1p(s) * std::log(s) + (1.0 + s) * dilog(-s) + (s - 1.0) * dilog(1.0 - s));
}

/// Fluctuation prefactor C_eff = s^2.
inline double C_effective(double s) {
  detail::check_s(s, "C_effective");
  return s * s;
}

/// Integral D(a) whose 4/pi multiple is the first-order slope of the entropy
/// parity difference, with a = sin(pi * aspect). aspect = 0 is the l << L
/// limit, where D = pi/6.
inline double entropy_slope_integral(double aspect, double h = 1e-4) {
  detail::check_aspect(aspect, "entropy_slope_integral");
  const double a = std::sin(std::numbers::pi * aspect);
  auto at_p = [a](double p) {
    const double u = 1.0 / p;
    auto head = [&](double x) {
      const double x2 = x * x;
      const double ratio = std::pow(x, u - 1.0) * std::pow(1.0 + x2, 0.5 * (u - 1.0)) /
                           (std::pow(1.0 + x2, u) - std::pow(x, 2.0 * u));
      return (ratio - p) / std::sqrt(1.0 + a * a * x2);
    };
    // x = 1/y; with s = y^2 the bracket is s (1+s)^{(u-1)/2} / ((1+s)^u - 1) - p.
    auto tail = [&](double y) {
      if (y < 1e-100) return 0.0;  // integrand vanishes like y^3
      const double s = y * y;
      double bracket;
      if (s < 1e-4) {
        const double c = (u * u - 1.0) / (24.0 * u);
        bracket = -c * s * s + c * s * s * s;
      } else {
        bracket = s * std::pow(1.0 + s, 0.5 * (u - 1.0)) / std::expm1(u * std::log1p(s)) - p;
      }
      return bracket / (y * std::sqrt(s + a * a));
    };
    return integrate_singular(head, 0.0, 1.0, 1e-14, 1e-11, "entropy slope head").value +
           integrate_singular(tail, 0.0, 1.0, 1e-14, 1e-11, "entropy slope tail").value;
  };
  return (at_p(1.0 + h) - at_p(1.0 - h)) / (2.0 * h);
}

/// First-order slope of the entropy parity difference, 4 D / pi.
inline double entropy_slope(double aspect) {
  return 4.0 * entropy_slope_integral(aspect) / std::numbers::pi;
}

/// First-order slope of the fluctuation parity difference per unit (lambda-1):
/// (1/pi^3) int_0^inf [ln(1+1/x^2)]^2 / sqrt(1 + a^2 x^2) dx.
inline double fluctuation_slope_integral(double aspect) {
  detail::check_aspect(aspect, "fluctuation_slope_integral");
  const double a = std::sin(std::numbers::pi * aspect);
  auto head = [a](double x) {
    // ln(1+1/x^2) = ln(1+x^2) - 2 ln x avoids overflow of 1/x^2 near 0.
    const double l = std::log1p(x * x) - 2.0 * std::log(x);
    return l * l / std::sqrt(1.0 + a * a * x * x);
  };
  auto tail = [a](double y) {
    if (y < 1e-100) return 0.0;  // integrand vanishes like y^3
    const double l = std::log1p(y * y);
    return l * l / (y * std::sqrt(y * y + a * a));
  };
  const double total = integrate_singular(head, 0.0, 1.0, 1e-14, 1e-10, "fluctuation slope head").value +
                       integrate_singular(tail, 0.0, 1.0, 1e-14, 1e-10, "fluctuation slope tail").value;
  return total / (std::numbers::pi * std::numbers::pi * std::numbers::pi);
}

/// int_0^1 (1-x^2)^{-3/2} [1 + (1+x^2)/(1-x^2) ln x] dx, equal to -pi/6.
inline double boundary_log_identity() {
  auto f = [](double x) {
    const double e = 1.0 - x;
    if (e <= 0.0) return 0.0;
    double bracket;
    if (e < 1e-3) {
      const double e2 = e * e;
      bracket = -e2 / 3.0 - e2 * e / 3.0 - 17.0 * e2 * e2 / 60.0 - 7.0 * e2 * e2 * e / 30.0;
    } else {
      const double q = 1.0 - x * x;
      bracket = 1.0 + (1.0 + x * x) / q * std::log(x);
    }
    const double q = e * (1.0 + x);
    return bracket / (q * std::sqrt(q));
  };
  return integrate_singular(f, 0.0, 1.0, 1e-14, 1e-11, "boundary log identity").value;
}

/// int_0^inf [ln(1+1/x^2)]^2 dx, equal to 4 pi ln 2.
inline double log_square_integral() {
  return fluctuation_slope_integral(0.0) * std::numbers::pi * std::numbers::pi * std::numbers::pi;
}

/// Constant term of the homogeneous open-chain fluctuation,
/// (1 + gamma + ln 2) / (2 pi^2).
inline double homogeneous_fluctuation_constant() {
  return (1.0 + std::numbers::egamma + std::numbers::ln2) / (2.0 * std::numbers::pi * std::numbers::pi);
}

struct TheoryPrediction {
  double lambda = 1.0;
  double s = 1.0;
  double c_eff = 1.0;
  double C_eff = 1.0;
  double mu = 0.0;        // (lambda - 1) / pi
  double dS_slope = 0.0;  // per unit (lambda - 1)
  double dF_slope = 0.0;  // per unit (lambda - 1)
  double aspect = 0.5;
};

inline TheoryPrediction predict(double lambda, double aspect) {
  if (!(lambda > 0.0)) throw ConfigError("predict: lambda must be positive");
  TheoryPrediction t;
  t.lambda = lambda;
  t.aspect = aspect;
  t.s = scaling_variable(lambda);
  t.c_eff = c_effective(t.s);
  t.C_eff = C_effective(t.s);
  t.mu = (lambda - 1.0) / std::numbers::pi;
  t.dS_slope = entropy_slope(aspect);
  t.dF_slope = fluctuation_slope_integral(aspect);
  return t;
}

}  // namespace parlab

#endif  // PARLAB_THEORY_HPP
