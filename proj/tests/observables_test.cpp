#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "parlab/fit.hpp"
#include "parlab/observables.hpp"
#include "test_support.hpp"

using namespace parlab;

namespace {

Eigen::MatrixXd ground_correlation(const ChainSpec& s) {
  return correlation_matrix(occupy(diagonalize(build_chain(s)), s.n_particles));
}

double chord(int L, int ell, double scale) {
  return scale * L / std::numbers::pi * std::sin(std::numbers::pi * ell / L);
}

}  // namespace

TEST(Restrict, WholeChainAndSingleSite) {
  const Eigen::MatrixXd g = ground_correlation(half_filled_chain(10));
  EXPECT_EQ(restrict(g, {1, 10}), g);
  const Eigen::MatrixXd one = restrict(g, {4, 1});
  ASSERT_EQ(one.rows(), 1);
  EXPECT_EQ(one(0, 0), g(3, 3));
  EXPECT_THROW(restrict(g, {5, 7}), ConfigError);
  EXPECT_THROW(restrict(g, {0, 3}), ConfigError);
}

TEST(Restrict, PeriodicBlockIsToeplitz) {
  const Eigen::MatrixXd ga = restrict(ground_correlation(half_filled_chain(42, Boundary::periodic)), {7, 12});
  for (int i = 1; i < 12; ++i)
    for (int j = 1; j < 12; ++j) EXPECT_NEAR(ga(i, j), ga(i - 1, j - 1), 1e-12);
}

TEST(Entropy, SingleHalfFilledSite) {
  Eigen::MatrixXd g(1, 1);
  g << 0.5;
  EXPECT_NEAR(entanglement_entropy(g), std::numbers::ln2, 1e-14);
  EXPECT_NEAR(charge_fluctuation(g), 0.25, 1e-15);
}

TEST(Entropy, PureRegionHasNoEntropyOrFluctuation) {
  const Eigen::MatrixXd g = Eigen::Vector4d(1, 0, 1, 1).asDiagonal();
  // Eigenvalues are clamped 1e-14 away from 0 and 1 before the logarithm.
  EXPECT_NEAR(entanglement_entropy(g), 0.0, 1e-11);
  EXPECT_NEAR(charge_fluctuation(g), 0.0, 1e-15);
}

TEST(Entropy, SpectrumOutsideUnitIntervalIsAnError) {
  Eigen::MatrixXd g(2, 2);
  g << 1.1, 0.0, 0.0, 0.5;
  EXPECT_THROW(entanglement_entropy(g), NumericalError);
  EXPECT_THROW(charge_fluctuation(g), NumericalError);
  Eigen::VectorXd tiny(2);
  tiny << -5e-9, 1.0 + 5e-9;
  EXPECT_NEAR(entropy_from_spectrum(tiny), 0.0, 1e-12);
}

TEST(Entropy, PeriodicHalfSystemSlopeIsOneThird) {
  std::vector<double> x, y;
  for (int L = 66; L <= 402; L += 16) {  // L = 2 mod 4
    const auto obs = region_observables(half_filled_chain(L, Boundary::periodic), {1, L / 2});
    x.push_back(std::log(chord(L, L / 2, 1.0)));
    y.push_back(obs.entropy_nats);
  }
  EXPECT_NEAR(testsupport::line_slope(x, y), 1.0 / 3.0, 0.02 / 3.0);
}

TEST(Fluctuation, PeriodicBulkSlopeIsOneOverPiSquared) {
  std::vector<double> x, y;
  for (int L = 66; L <= 402; L += 16) {
    const auto obs = region_observables(half_filled_chain(L, Boundary::periodic), {1, L / 2});
    x.push_back(std::log(chord(L, L / 2, 1.0)));
    y.push_back(obs.fluctuation);
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(testsupport::line_slope(x, y), 1.0 / pi2, 0.02 / pi2);
}

TEST(RegionObservables, OpenChainSlopeIsOneSixth) {
  // L = 400, cut positions up to L/2, parity-split constants and 1/l terms.
  std::vector<double> lg, ce, co, ie, io, y;
  for (int ell = 20; ell <= 200; ell += 3) {
    const auto obs = region_observables(half_filled_chain(400), {1, ell});
    const bool even = ell % 2 == 0;
    lg.push_back(std::log(chord(400, ell, 2.0)));
    ce.push_back(even);
    co.push_back(!even);
    ie.push_back(even / static_cast<double>(ell));
    io.push_back(!even / static_cast<double>(ell));
    y.push_back(obs.entropy_nats);
  }
  EXPECT_NEAR(testsupport::lstsq({lg, ce, co, ie, io}, y)(0), 1.0 / 6.0, 0.02 / 6.0);
}

TEST(RegionObservables, ParityDifferenceDecaysAtUnitRatio) {
  auto diff = [](int L, double lambda) {
    const int ell = L / 10;
    const int even = ell % 2 == 0 ? ell : ell + 1;
    auto at = [&](int cut) {
      return region_observables(place_pattern(half_filled_chain(L), ImpurityPattern::single(cut, lambda)), {1, cut})
          .entropy_nats;
    };
    return at(even) - at(even + 1);
  };
  const double d1 = std::abs(diff(400, 1.0)), d2 = std::abs(diff(1600, 1.0));
  EXPECT_NEAR(d1 / d2, 4.0, 1.0);  // ~ 1/L
  const double w1 = diff(800, 0.8), w2 = diff(1600, 0.8);
  EXPECT_GT(std::abs(w2), 0.1);
  EXPECT_LT(std::abs(w1 - w2), 0.01);  // saturates
}

TEST(Observables, InvariantsOnRandomChains) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const ChainSpec s = testsupport::random_spec(rng, 4, 60);
    Eigen::MatrixXd g;
    try {
      g = ground_correlation(s);
    } catch (const DegenerateFermiLevel&) {
      continue;
    }
    std::uniform_int_distribution<int> start(1, s.n_sites - 1);
    const int a = start(rng);
    std::uniform_int_distribution<int> len(1, s.n_sites - a);
    const Region r{a, len(rng)};
    const Eigen::MatrixXd ga = restrict(g, r);
    const double S = entanglement_entropy(ga), F = charge_fluctuation(ga);
    double double_sum = 0.0;
    for (int i = 0; i < r.length; ++i)
      for (int j = 0; j < r.length; ++j) double_sum += ga(i, j) * ((i == j) - ga(j, i));
    EXPECT_NEAR(F, double_sum, 1e-10);
    EXPECT_GE(S, 4.0 * std::numbers::ln2 * F - 1e-12);
    EXPECT_LE(S, r.length * std::numbers::ln2 + 1e-12);
    EXPECT_GE(F, -1e-14);
    EXPECT_LE(F, r.length / 4.0 + 1e-12);

    // The complement of a boundary region [1, l] is [l+1, n].
    const int ell = len(rng) % (s.n_sites - 1) + 1;
    const double left = entanglement_entropy(restrict(g, {1, ell}));
    const double right = entanglement_entropy(restrict(g, {ell + 1, s.n_sites - ell}));
    EXPECT_NEAR(left, right, 1e-8);
  }
}

TEST(Observables, DecoupledSegmentIsPure) {
  for (int ell : {10, 24}) {
    const ChainSpec s = place_pattern(half_filled_chain(60), ImpurityPattern::single(ell, 1e-8));
    const auto obs = region_observables(s, {1, ell});
    EXPECT_LE(obs.entropy_nats, 1e-5);
    EXPECT_LE(obs.fluctuation, 1e-5);
  }
}
