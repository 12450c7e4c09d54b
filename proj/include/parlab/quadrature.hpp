#ifndef PARLAB_QUADRATURE_HPP
#define PARLAB_QUADRATURE_HPP

// Finite-interval quadrature: adaptive Gauss-Kronrod for smooth integrands
// and tanh-sinh for integrable endpoint singularities.

#include <cmath>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "parlab/errors.hpp"

namespace parlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Integrates f over [a, b] to relative tolerance `tol`. Throws
/// NumericalError when the error estimate stays above `accept` (absolute),
/// which defaults to 1e3 times the requested accuracy.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double tol = 1e-13, double accept = -1.0,
                           const std::string& what = "integral") {
  QuadratureResult r;
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(std::forward<F>(f), a, b, 15, tol,
                                                                          &r.error_estimate, &l1);
  if (accept < 0.0) accept = 1e3 * tol * std::max(1.0, l1);
  if (!std::isfinite(r.value) || r.error_estimate > accept)
    throw NumericalError("quadrature of " + what + " did not converge (error estimate " +
                         std::to_string(r.error_estimate) + ")");
  return r;
}

/// Same contract for integrands singular (but integrable) at a or b.
template <class F>
QuadratureResult integrate_singular(F&& f, double a, double b, double tol = 1e-13, double accept = -1.0,
                                    const std::string& what = "integral") {
  QuadratureResult r;
  double l1 = 0.0;
  boost::math::quadrature::tanh_sinh<double> engine;
  r.value = engine.integrate(std::forward<F>(f), a, b, tol, &r.error_estimate, &l1);
  if (accept < 0.0) accept = 1e3 * tol * std::max(1.0, l1);
  if (!std::isfinite(r.value) || r.error_estimate > accept)
    throw NumericalError("quadrature of " + what + " did not converge (error estimate " +
                         std::to_string(r.error_estimate) + ")");
  return r;
}

}  // namespace parlab

#endif  // PARLAB_QUADRATURE_HPP
