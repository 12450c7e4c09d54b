#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "parlab/fit.hpp"
#include "parlab/sweep.hpp"
#include "parlab/theory.hpp"
#include "test_support.hpp"

using namespace parlab;

namespace {

constexpr double pi = std::numbers::pi;

double open_chord(int L, int ell) { return 2.0 * L / pi * std::sin(pi * ell / L); }

struct Model {
  double slope = 0.21, ce = 0.4, co = 0.15, ae = -0.3, ao = 0.7, be = 0.05, bo = -0.02;
  double operator()(int L, int ell, bool fluct) const {
    const bool even = ell % 2 == 0;
    double v = slope * std::log(open_chord(L, ell)) + (even ? ce : co) + (even ? ae : ao) / ell;
    if (fluct) v += (even ? be : bo) * std::log(static_cast<double>(ell)) / ell;
    return v;
  }
};

std::vector<ScalingSample> synthetic(const Model& m, ObservableKind kind, Geometry g = Geometry::open_boundary) {
  std::vector<ScalingSample> out;
  for (int L : geometric_ladder(120, 2400, 1.15, 10)) {
    const int ell = L / 10;
    out.push_back({L, ell, parity_of(ell), m(L, ell, kind == ObservableKind::fluctuation), kind, g, 0.7});
  }
  return out;
}

std::vector<ScalingSample> physics(double lambda, ObservableKind kind, Geometry g, int lo = 200, int hi = 2000) {
  std::vector<int> ells;
  for (int L : geometric_ladder(lo, hi, 1.15, 10)) ells.push_back(L / 10);
  return to_samples(impurity_sweep({lambda}, 10, ells, g, 1), kind);
}

}  // namespace

TEST(LeastSquares, RejectsBadSystems) {
  Eigen::MatrixXd a(2, 3);
  a.setOnes();
  EXPECT_THROW(least_squares(a, Eigen::Vector2d(1, 2)), ConfigError);
  Eigen::MatrixXd b(4, 2);
  b << 1, 2, 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(least_squares(b, Eigen::Vector4d(1, 2, 3, 4)), NumericalError);
}

TEST(FitBoundary, RecoversSyntheticEntropyModel) {
  const Model m;
  const auto r = fit_boundary_entropy(synthetic(m, ObservableKind::entropy));
  EXPECT_NEAR(r.slope, m.slope, 1e-9);
  EXPECT_NEAR(r.const_even, m.ce, 1e-9);
  EXPECT_NEAR(r.const_odd, m.co, 1e-9);
  EXPECT_NEAR(r.a_even, m.ae, 1e-9);
  EXPECT_NEAR(r.a_odd, m.ao, 1e-9);
  EXPECT_EQ(r.delta, r.const_even - r.const_odd);
  EXPECT_LE(r.residual_rms, 1e-9);
  EXPECT_NEAR(r.scaled_slope, 6.0 * m.slope, 1e-8);
}

TEST(FitBoundary, RecoversSyntheticFluctuationModel) {
  const Model m;
  const auto r = fit_boundary_fluct(synthetic(m, ObservableKind::fluctuation));
  EXPECT_NEAR(r.slope, m.slope, 1e-9);
  EXPECT_NEAR(r.const_even, m.ce, 1e-9);
  EXPECT_NEAR(r.const_odd, m.co, 1e-9);
  EXPECT_NEAR(r.b_even, m.be, 1e-9);
  EXPECT_NEAR(r.b_odd, m.bo, 1e-9);
  EXPECT_LE(r.residual_rms, 1e-9);
  EXPECT_NEAR(r.scaled_slope, 2.0 * pi * pi * m.slope, 1e-8);
}

TEST(FitBoundary, DeltaIgnoresParityIndependentContamination) {
  const Model m;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto kind : {ObservableKind::entropy, ObservableKind::fluctuation}) {
    const auto clean = synthetic(m, kind);
    const double base = detail::fit_boundary(clean, kind).delta;
    for (int t = 0; t < 5; ++t) {
      const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      auto dirty = clean;
      for (auto& s : dirty)
        s.value += a * std::log(open_chord(s.L, s.ell)) + b + c / s.ell +
                   (kind == ObservableKind::fluctuation ? d * std::log(static_cast<double>(s.ell)) / s.ell : 0.0);
      EXPECT_NEAR(detail::fit_boundary(dirty, kind).delta, base, 1e-9);
    }
  }
}

TEST(FitBoundary, InputValidation) {
  const Model m;
  auto few = synthetic(m, ObservableKind::entropy);
  few.resize(6);
  EXPECT_THROW(fit_boundary_entropy(few), ConfigError);
  EXPECT_THROW(fit_boundary_fluct(synthetic(m, ObservableKind::entropy)), ConfigError);
  EXPECT_THROW(fit_boundary_entropy(synthetic(m, ObservableKind::entropy, Geometry::periodic_bulk)), ConfigError);
  auto mixed = synthetic(m, ObservableKind::entropy);
  mixed.front().lambda = 0.1;
  EXPECT_THROW(fit_boundary_entropy(mixed), ConfigError);
  auto same_l = synthetic(m, ObservableKind::entropy);
  for (auto& s : same_l) {
    s.ell = s.parity == Parity::even ? 20 : 21;
    s.L = 400;
  }
  EXPECT_THROW(fit_boundary_entropy(same_l), NumericalError);
}

TEST(FitBoundary, JointSlopeLiesBetweenParitySlopes) {
  const auto samples = physics(0.8, ObservableKind::entropy, Geometry::open_boundary, 120, 1200);
  std::vector<double> slopes;
  for (Parity p : {Parity::even, Parity::odd}) {
    std::vector<double> lg, one, inv, y;
    for (const auto& s : samples)
      if (s.parity == p) {
        lg.push_back(std::log(open_chord(s.L, s.ell)));
        one.push_back(1.0);
        inv.push_back(1.0 / s.ell);
        y.push_back(s.value);
      }
    slopes.push_back(testsupport::lstsq({lg, one, inv}, y)(0));
  }
  const double joint = fit_boundary_entropy(samples).slope;
  EXPECT_GE(joint, std::min(slopes[0], slopes[1]) - 1e-12);
  EXPECT_LE(joint, std::max(slopes[0], slopes[1]) + 1e-12);
}

TEST(FitBoundary, PhysicsExamples) {
  const auto hom = fit_boundary_entropy(physics(1.0, ObservableKind::entropy, Geometry::open_boundary));
  EXPECT_LE(std::abs(hom.delta), 1e-3);
  const auto imp = fit_boundary_entropy(physics(0.8, ObservableKind::entropy, Geometry::open_boundary));
  EXPECT_NEAR(imp.scaled_slope, c_effective(scaling_variable(0.8)), 0.02);

  const auto fh = fit_boundary_fluct(physics(1.0, ObservableKind::fluctuation, Geometry::open_boundary));
  EXPECT_NEAR(fh.scaled_slope, 1.0, 0.02);
  EXPECT_NEAR(0.5 * (fh.const_even + fh.const_odd), homogeneous_fluctuation_constant(), 1e-3);
  const auto fi = fit_boundary_fluct(physics(0.8, ObservableKind::fluctuation, Geometry::open_boundary));
  const double s = scaling_variable(0.8);
  EXPECT_NEAR(fi.scaled_slope, s * s, 0.03 * s * s);
}

TEST(FitBulk, RecoversSyntheticModel) {
  std::vector<ScalingSample> samples;
  for (int L = 122; L <= 2402; L += 40) {
    const int ell = L / 10;
    const double v = 0.3 * std::log(L / pi * std::sin(pi * ell / L)) + 0.25 + (ell % 2 ? 0.4 : -0.2) / ell;
    samples.push_back({L, ell, parity_of(ell), v, ObservableKind::entropy, Geometry::periodic_bulk, 1.0});
  }
  const auto r = fit_bulk(samples, ObservableKind::entropy);
  EXPECT_NEAR(r.slope, 0.3, 1e-9);
  EXPECT_NEAR(r.constant, 0.25, 1e-9);
  EXPECT_THROW(fit_bulk(samples, ObservableKind::fluctuation), ConfigError);
}

TEST(FitBulk, PhysicsExamples) {
  const auto s1 = fit_bulk(physics(1.0, ObservableKind::entropy, Geometry::periodic_bulk), ObservableKind::entropy);
  EXPECT_NEAR(s1.scaled_slope, 2.0, 0.04);
  const auto s8 = fit_bulk(physics(0.8, ObservableKind::entropy, Geometry::periodic_bulk), ObservableKind::entropy);
  EXPECT_NEAR(s8.scaled_slope, 1.0 + c_effective(scaling_variable(0.8)), 0.02 * 2.0);
  const auto f1 =
      fit_bulk(physics(1.0, ObservableKind::fluctuation, Geometry::periodic_bulk), ObservableKind::fluctuation);
  EXPECT_NEAR(f1.scaled_slope, 2.0, 0.04);
}

TEST(BoundaryPart, HomogeneousChainHasNoParity) {
  const auto p = fit_boundary_entropy(physics(1.0, ObservableKind::entropy, Geometry::open_boundary));
  const auto b = fit_bulk(physics(1.0, ObservableKind::entropy, Geometry::periodic_bulk), ObservableKind::entropy);
  const auto parts = boundary_part(p, b, b);
  EXPECT_NEAR(parts.even, parts.odd, 2e-3);
}

TEST(BoundaryPart, ReciprocalRatioSwapsParities) {
  const auto h = fit_bulk(physics(1.0, ObservableKind::entropy, Geometry::periodic_bulk), ObservableKind::entropy);
  auto parts = [&](double lam) {
    return boundary_part(fit_boundary_entropy(physics(lam, ObservableKind::entropy, Geometry::open_boundary)),
                         fit_bulk(physics(lam, ObservableKind::entropy, Geometry::periodic_bulk), ObservableKind::entropy),
                         h);
  };
  const auto a = parts(0.5), b = parts(2.0);
  EXPECT_NEAR(a.even, b.odd, 0.01);
  EXPECT_NEAR(a.odd, b.even, 0.01);
  EXPECT_NEAR(a.even - a.odd, -(b.even - b.odd), 0.01);
}

TEST(BoundaryPart, MismatchedFitsAreRejected) {
  ParityScalingResult p;
  p.lambda = 0.5;
  BulkFitResult b, h;
  b.lambda = 0.8;
  h.lambda = 1.0;
  EXPECT_THROW(boundary_part(p, b, h), ConfigError);
  b.lambda = 0.5;
  h.lambda = 0.9;
  EXPECT_THROW(boundary_part(p, b, h), ConfigError);
}

TEST(SlopeAtUnity, RecoversSyntheticLinearDelta) {
  std::vector<DeltaPoint> pts;
  for (int L : {240, 480, 960})
    for (double lam : {1.0, 0.99, 0.98, 0.96, 0.9}) pts.push_back({L, lam, (0.6 + 3.0 / L) * (lam - 1.0)});
  const auto r = delta_slope_at_unity(pts, {0.1, 0.04, 0.02});
  EXPECT_NEAR(r.limit, 0.6, 1e-10);
  for (double s : r.slopes) EXPECT_NEAR(s, 0.6, 1e-10);
  EXPECT_THROW(delta_slope_at_unity(pts, {0.005}), ConfigError);
  std::vector<DeltaPoint> one_size(pts.begin(), pts.begin() + 5);
  EXPECT_THROW(delta_slope_at_unity(one_size, {0.1}), ConfigError);
}

// Without a dot only the open-chain parity oscillation remains, which decays
// like 1/L.
TEST(DotCrossover, HomogeneousCurveDecays) {
  std::vector<DotMeasurement> d;
  for (int L : geometric_ladder(40, 800, 1.15, 4)) d.push_back(measure_dot(L, 1.0));
  const auto c = dot_crossover(1.0, d);
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    EXPECT_LE(std::abs(c.points[i].d_entropy), 2.5 / c.points[i].L) << c.points[i].L;
    if (i) {
      EXPECT_GT(c.points[i].x, c.points[i - 1].x);
      EXPECT_LT(std::abs(c.points[i].d_entropy), std::abs(c.points[i - 1].d_entropy));
    }
  }
}

TEST(DotCrossover, CoarseLadderIsRejected) {
  std::vector<DotMeasurement> d{{20}, {40}, {60}};
  EXPECT_THROW(dot_crossover(0.1, d), ConfigError);
}

TEST(DotCrossover, InvariantUnderHoppingScale) {
  for (double lam : {0.1, 0.3}) {
    ChainSpec a = place_pattern(half_filled_chain(200), ImpurityPattern::dot(100, lam));
    ChainSpec b = a;
    b.base_hopping = 3.7;
    const auto oa = region_observables(a, {1, 100}), ob = region_observables(b, {1, 100});
    EXPECT_NEAR(oa.entropy_nats, ob.entropy_nats, 1e-10);
    EXPECT_NEAR(oa.fluctuation, ob.fluctuation, 1e-10);
  }
}

TEST(DotCrossover, CollapseDistanceOfIdenticalCurvesIsZero) {
  CrossoverCurve c;
  c.points = {{10, 0.5, 0.1, 0.0}, {20, 1.0, 0.3, 0.0}, {40, 2.0, 0.2, 0.0}};
  auto get = [](const CrossoverPoint& p) { return p.d_entropy; };
  EXPECT_EQ(collapse_distance(c, c, get), 0.0);
  EXPECT_NEAR(interpolate_log_x(c, std::sqrt(0.5), get), 0.2, 1e-12);
  EXPECT_TRUE(std::isnan(interpolate_log_x(c, 3.0, get)));
}
