#ifndef PARLAB_FIT_HPP
#define PARLAB_FIT_HPP

// Linear least-squares scaling fits with parity-split constants, boundary-part
// isolation, slope-at-unity extraction and the quantum-dot crossover curves.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parlab/errors.hpp"

namespace parlab {

enum class Parity { even, odd };
enum class ObservableKind { entropy, fluctuation };
enum class Geometry { open_boundary, periodic_bulk };

inline Parity parity_of(int ell) { return ell % 2 == 0 ? Parity::even : Parity::odd; }
inline std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }
inline std::string to_string(ObservableKind k) { return k == ObservableKind::entropy ? "entropy" : "fluctuation"; }

struct ScalingSample {
  int L = 0;
  int ell = 0;
  Parity parity = Parity::even;
  double value = 0.0;
  ObservableKind kind = ObservableKind::entropy;
  Geometry geometry = Geometry::open_boundary;
  double lambda = 1.0;
};

struct LeastSquares {
  Eigen::VectorXd coeffs;
  double residual_rms = 0.0;
};

/// Solves min |A c - y| by column-pivoted QR. Throws on rank deficiency.
inline LeastSquares least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  if (a.rows() < a.cols())
    throw ConfigError("least squares: " + std::to_string(a.rows()) + " samples for " + std::to_string(a.cols()) +
                      " parameters");
  // Scale columns to unit norm so the rank threshold is meaningful.
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale(j) == 0.0) throw NumericalError("least squares: basis column " + std::to_string(j) + " is zero");
  const Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as);
  qr.setThreshold(1e-12);
  if (qr.rank() < a.cols())
    throw NumericalError("least squares: rank " + std::to_string(qr.rank()) + " < " + std::to_string(a.cols()));
  LeastSquares out;
  out.coeffs = qr.solve(y).cwiseQuotient(scale);
  out.residual_rms = std::sqrt((a * out.coeffs - y).squaredNorm() / static_cast<double>(a.rows()));
  return out;
}

struct ParityScalingResult {
  double lambda = 1.0;
  double slope = 0.0;         // coefficient of the log of the chord
  double scaled_slope = 0.0;  // 6 slope (entropy) or 2 pi^2 slope (fluctuation)
  double const_even = 0.0;
  double const_odd = 0.0;
  double delta = 0.0;  // const_even - const_odd
  double a_even = 0.0, a_odd = 0.0;  // 1/l coefficients
  double b_even = 0.0, b_odd = 0.0;  // ln(l)/l coefficients (fluctuation only)
  double residual_rms = 0.0;
  int n_samples = 0;
};

namespace detail {

inline double chord(int L, int ell, Geometry g) {
  const double base = static_cast<double>(L) / std::numbers::pi * std::sin(std::numbers::pi * ell / L);
  return g == Geometry::open_boundary ? 2.0 * base : base;
}

inline double scale_for(ObservableKind k) {
  return k == ObservableKind::entropy ? 6.0 : 2.0 * std::numbers::pi * std::numbers::pi;
}

inline double common_lambda(const std::vector<ScalingSample>& samples) {
  const double lambda = samples.front().lambda;
  for (const auto& s : samples)
    if (s.lambda != lambda) throw ConfigError("scaling fit mixes samples with different lambda");
  return lambda;
}

inline ParityScalingResult fit_boundary(const std::vector<ScalingSample>& samples, ObservableKind kind) {
  if (samples.empty()) throw ConfigError("boundary fit: no samples");
  int n_even = 0, n_odd = 0;
  for (const auto& s : samples) {
    if (s.geometry != Geometry::open_boundary) throw ConfigError("boundary fit needs open-boundary samples");
    if (s.kind != kind) throw ConfigError("boundary fit: sample kind is not " + to_string(kind));
    if (s.ell < 1 || s.ell >= s.L) throw ConfigError("boundary fit: sample with l outside (0, L)");
    if (s.parity != parity_of(s.ell)) throw ConfigError("boundary fit: sample parity does not match l");
    (s.parity == Parity::even ? n_even : n_odd) += 1;
  }
  if (n_even < 4 || n_odd < 4) throw ConfigError("boundary fit needs at least 4 samples per parity");

  const bool fluct = kind == ObservableKind::fluctuation;
  const int cols = fluct ? 7 : 5;
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, cols);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    const int off = s.parity == Parity::even ? 0 : 1;
    a(i, 0) = std::log(chord(s.L, s.ell, Geometry::open_boundary));
    a(i, 1 + off) = 1.0;
    a(i, 3 + off) = 1.0 / s.ell;
    if (fluct) a(i, 5 + off) = std::log(static_cast<double>(s.ell)) / s.ell;
    y(i) = s.value;
  }
  const LeastSquares ls = least_squares(a, y);
  ParityScalingResult r;
  r.lambda = common_lambda(samples);
  r.slope = ls.coeffs(0);
  r.scaled_slope = scale_for(kind) * r.slope;
  r.const_even = ls.coeffs(1);
  r.const_odd = ls.coeffs(2);
  r.delta = r.const_even - r.const_odd;
  r.a_even = ls.coeffs(3);
  r.a_odd = ls.coeffs(4);
  if (fluct) {
    r.b_even = ls.coeffs(5);
    r.b_odd = ls.coeffs(6);
  }
  r.residual_rms = ls.residual_rms;
  r.n_samples = static_cast<int>(m);
  return r;
}

}  // namespace detail

/// Joint fit S = slope ln[(2L/pi) sin(pi l/L)] + c^p + A^p / l with one shared
/// slope and parity-split constants and corrections.
inline ParityScalingResult fit_boundary_entropy(const std::vector<ScalingSample>& samples) {
  return detail::fit_boundary(samples, ObservableKind::entropy);
}

/// As fit_boundary_entropy with an additional parity-split B^p ln(l)/l term.
inline ParityScalingResult fit_boundary_fluct(const std::vector<ScalingSample>& samples) {
  return detail::fit_boundary(samples, ObservableKind::fluctuation);
}

struct BulkFitResult {
  double lambda = 1.0;
  ObservableKind kind = ObservableKind::entropy;
  double slope = 0.0;
  double scaled_slope = 0.0;
  double constant = 0.0;
  double residual_rms = 0.0;
  int n_samples = 0;
};

/// Fit of periodic-chain data to slope ln[(L/pi) sin(pi l/L)] + const + A/l
/// (+ B ln(l)/l for fluctuations). Corrections are split by parity when both
/// parities are present.
inline BulkFitResult fit_bulk(const std::vector<ScalingSample>& samples, ObservableKind kind) {
  if (samples.empty()) throw ConfigError("bulk fit: no samples");
  bool has_even = false, has_odd = false;
  for (const auto& s : samples) {
    if (s.geometry != Geometry::periodic_bulk) throw ConfigError("bulk fit needs periodic samples");
    if (s.kind != kind) throw ConfigError("bulk fit: sample kind is not " + to_string(kind));
    if (s.ell < 1 || s.ell >= s.L) throw ConfigError("bulk fit: sample with l outside (0, L)");
    (s.parity == Parity::even ? has_even : has_odd) = true;
  }
  const bool fluct = kind == ObservableKind::fluctuation;
  const int groups = (has_even && has_odd) ? 2 : 1;
  const int per_group = fluct ? 2 : 1;
  const int cols = 2 + groups * per_group;
  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, cols);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    const int g = groups == 2 && s.parity == Parity::odd ? 1 : 0;
    a(i, 0) = std::log(detail::chord(s.L, s.ell, Geometry::periodic_bulk));
    a(i, 1) = 1.0;
    a(i, 2 + g * per_group) = 1.0 / s.ell;
    if (fluct) a(i, 3 + g * per_group) = std::log(static_cast<double>(s.ell)) / s.ell;
    y(i) = s.value;
  }
  const LeastSquares ls = least_squares(a, y);
  BulkFitResult r;
  r.lambda = detail::common_lambda(samples);
  r.kind = kind;
  r.slope = ls.coeffs(0);
  r.scaled_slope = detail::scale_for(kind) * r.slope;
  r.constant = ls.coeffs(1);
  r.residual_rms = ls.residual_rms;
  r.n_samples = static_cast<int>(m);
  return r;
}

struct BoundaryParts {
  double even = 0.0;
  double odd = 0.0;
};

/// Boundary contribution c^p - c1(lambda)/2 of each parity. The periodic
/// constant is (c1(lambda) + c1)/2, so c1(lambda) is recovered with the
/// homogeneous periodic constant c1 = bulk constant at lambda = 1.
inline BoundaryParts boundary_part(const ParityScalingResult& parity, const BulkFitResult& bulk,
                                   const BulkFitResult& homogeneous) {
  if (std::abs(parity.lambda - bulk.lambda) > 1e-12 * std::max(1.0, std::abs(bulk.lambda)))
    throw ConfigError("boundary_part: fits belong to different lambda");
  if (homogeneous.lambda != 1.0) throw ConfigError("boundary_part: reference bulk fit must be at lambda = 1");
  if (bulk.kind != homogeneous.kind) throw ConfigError("boundary_part: bulk fits of different kinds");
  const double c1_lambda = 2.0 * bulk.constant - homogeneous.constant;
  return {parity.const_even - 0.5 * c1_lambda, parity.const_odd - 0.5 * c1_lambda};
}

/// Slope of y against x through a line with intercept.
inline double line_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("line fit needs at least two points");
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[static_cast<std::size_t>(i)];
    v(i) = y[static_cast<std::size_t>(i)];
  }
  return least_squares(a, v).coeffs(1);
}

/// Parity difference at one (L, lambda) grid point.
struct DeltaPoint {
  int L = 0;
  double lambda = 1.0;
  double delta = 0.0;
};

struct SlopeAtUnity {
  std::vector<double> windows;  // epsilon, decreasing
  std::vector<double> slopes;   // 1/L-extrapolated slope for each window
  double limit = 0.0;           // epsilon -> 0 by a line through the smallest windows
};

/// Per L, the slope of delta against (lambda-1) in each window [1-eps, 1] is
/// extrapolated linearly in 1/L; the window sequence is then extrapolated to
/// eps -> 0 using the (up to) three smallest windows.
inline SlopeAtUnity delta_slope_at_unity(const std::vector<DeltaPoint>& points, std::vector<double> windows) {
  if (windows.empty()) throw ConfigError("slope at unity: no windows");
  std::sort(windows.begin(), windows.end(), std::greater<>());
  std::map<int, std::vector<DeltaPoint>> by_size;
  for (const auto& p : points) by_size[p.L].push_back(p);
  if (by_size.size() < 2) throw ConfigError("slope at unity: need at least two system sizes");

  SlopeAtUnity out;
  for (double eps : windows) {
    std::vector<double> inv_l, slopes;
    for (const auto& [size, pts] : by_size) {
      std::vector<double> x, y;
      for (const auto& p : pts)
        if (p.lambda >= 1.0 - eps - 1e-12 && p.lambda <= 1.0 + 1e-12) {
          x.push_back(p.lambda - 1.0);
          y.push_back(p.delta);
        }
      if (x.size() < 2)
        throw ConfigError("slope at unity: window " + std::to_string(eps) + " holds fewer than two lambda values");
      inv_l.push_back(1.0 / size);
      slopes.push_back(line_slope(x, y));
    }
    // Intercept of slope = a + b/L.
    const auto m = static_cast<Eigen::Index>(inv_l.size());
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = inv_l[static_cast<std::size_t>(i)];
      v(i) = slopes[static_cast<std::size_t>(i)];
    }
    out.windows.push_back(eps);
    out.slopes.push_back(least_squares(a, v).coeffs(0));
  }
  if (out.windows.size() == 1) {
    out.limit = out.slopes.front();
  } else {
    const std::size_t k = std::min<std::size_t>(3, out.windows.size());
    const std::vector<double> x(out.windows.end() - static_cast<std::ptrdiff_t>(k), out.windows.end());
    const std::vector<double> y(out.slopes.end() - static_cast<std::ptrdiff_t>(k), out.slopes.end());
    const double b = line_slope(x, y);
    out.limit = y.back() - b * x.back();
  }
  return out;
}

/// One member measurement of the dot geometry: S and F at abscissa ln(L+1).
struct DotMeasurement {
  int L = 0;  // size of the even member
  double entropy_even = 0.0, entropy_odd = 0.0;
  double fluct_even = 0.0, fluct_odd = 0.0;
};

struct CrossoverPoint {
  int L = 0;
  double x = 0.0;        // (L+1) lambda^2
  double d_entropy = 0.0;  // even minus odd d S / d ln l
  double d_fluct = 0.0;    // even minus odd d F / d ln l
};

struct CrossoverCurve {
  double lambda = 1.0;
  int Z = 2;
  std::vector<CrossoverPoint> points;
};

/// Central differences over the ln(L+1) ladder, even minus odd.
inline CrossoverCurve dot_crossover(double lambda, std::vector<DotMeasurement> data, int Z = 2) {
  if (!(lambda > 0.0)) throw ConfigError("dot crossover: lambda must be positive");
  if (data.size() < 3) throw ConfigError("dot crossover: need at least three ladder points");
  std::sort(data.begin(), data.end(), [](const auto& a, const auto& b) { return a.L < b.L; });
  for (std::size_t i = 1; i < data.size(); ++i) {
    const double ratio = static_cast<double>(data[i].L + 1) / (data[i - 1].L + 1);
    if (!(ratio > 1.0)) throw ConfigError("dot crossover: ladder sizes must be distinct");
    if (ratio > 1.5) throw ConfigError("dot crossover: ladder ratio " + std::to_string(ratio) + " exceeds 1.5");
  }
  CrossoverCurve curve;
  curve.lambda = lambda;
  curve.Z = Z;
  for (std::size_t i = 1; i + 1 < data.size(); ++i) {
    const double dx = std::log(data[i + 1].L + 1.0) - std::log(data[i - 1].L + 1.0);
    CrossoverPoint p;
    p.L = data[i].L;
    p.x = (data[i].L + 1.0) * lambda * lambda;
    p.d_entropy = ((data[i + 1].entropy_even - data[i - 1].entropy_even) -
                   (data[i + 1].entropy_odd - data[i - 1].entropy_odd)) / dx;
    p.d_fluct = ((data[i + 1].fluct_even - data[i - 1].fluct_even) -
                 (data[i + 1].fluct_odd - data[i - 1].fluct_odd)) / dx;
    curve.points.push_back(p);
  }
  return curve;
}

/// Linear interpolation of a curve's column at x on a log-x axis; NaN outside.
template <class Get>
double interpolate_log_x(const CrossoverCurve& c, double x, Get get) {
  const auto& p = c.points;
  if (p.empty() || x < p.front().x || x > p.back().x) return std::nan("");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (x <= p[i].x) {
      const double t = (std::log(x) - std::log(p[i - 1].x)) / (std::log(p[i].x) - std::log(p[i - 1].x));
      return get(p[i - 1]) + t * (get(p[i]) - get(p[i - 1]));
    }
  return get(p.back());
}

/// Largest |a - b| over the x-range both curves cover, evaluated at the
/// nodes of both.
template <class Get>
double collapse_distance(const CrossoverCurve& a, const CrossoverCurve& b, Get get) {
  double worst = 0.0;
  for (const auto* c : {&a, &b})
    for (const auto& p : c->points) {
      const double va = interpolate_log_x(a, p.x, get), vb = interpolate_log_x(b, p.x, get);
      if (!std::isnan(va) && !std::isnan(vb)) worst = std::max(worst, std::abs(va - vb));
    }
  return worst;
}

}  // namespace parlab

#endif  // PARLAB_FIT_HPP
