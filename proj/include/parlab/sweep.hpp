#ifndef PARLAB_SWEEP_HPP
#define PARLAB_SWEEP_HPP

// Grid generation and deterministic parallel evaluation of sample points.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "parlab/chain.hpp"
#include "parlab/errors.hpp"
#include "parlab/fit.hpp"
#include "parlab/observables.hpp"

namespace parlab {

/// Evaluates f(0..n-1) on `threads` workers. Results are stored by index, so
/// the output does not depend on the thread count or scheduling. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int threads, F f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Geometric ladder from `lo` to `hi` with the given ratio, each value rounded
/// to the nearest multiple of `step` and kept strictly increasing.
inline std::vector<int> geometric_ladder(int lo, int hi, double ratio, int step = 1) {
  if (lo < 1 || hi < lo || !(ratio > 1.0) || step < 1) throw ConfigError("invalid ladder parameters");
  std::vector<int> out;
  double v = lo;
  while (true) {
    int r = static_cast<int>(std::lround(v / step)) * step;
    if (r < lo) r += step;
    if (!out.empty() && r <= out.back()) r = out.back() + step;
    if (r > hi) break;
    out.push_back(r);
    v = std::max(v * ratio, static_cast<double>(r) * ratio);
  }
  return out;
}

/// One measured configuration: region [1, ell] of an L-site chain whose
/// impurity block is centred on bond ell.
struct SweepPoint {
  double lambda = 1.0;
  int n_imp = 1;
  int L = 0;
  int ell = 0;
  Parity parity = Parity::even;
  Geometry geometry = Geometry::open_boundary;
  double entropy = 0.0;
  double fluctuation = 0.0;
};

/// Impurity at the border of [1, ell], L = Z ell, half filling. With n_imp > 1
/// (odd) an alternating block of n_imp bonds is centred on bond ell, so the
/// cut goes through its central bond.
inline SweepPoint measure_impurity(double lambda, int Z, int ell, Geometry geometry, int n_imp = 1) {
  if (n_imp < 1 || n_imp % 2 == 0) throw ConfigError("centred impurity blocks need an odd n_imp");
  const int L = Z * ell;
  const Boundary b = geometry == Geometry::open_boundary ? Boundary::open : Boundary::periodic;
  const int anchor = ell - (n_imp - 1);
  const ImpurityPattern pattern =
      n_imp == 1 ? ImpurityPattern::single(ell, lambda) : ImpurityPattern::alternating(anchor, n_imp, lambda);
  ChainSpec spec = place_pattern(half_filled_chain(L, b), pattern);
  const auto obs = region_observables(spec, Region{1, ell});
  return {lambda, n_imp, L, ell, parity_of(ell), geometry, obs.entropy_nats, obs.fluctuation};
}

/// Periodic half-filled chains need L = 2 mod 4 to avoid a degenerate Fermi
/// level.
inline bool periodic_size_ok(int L) { return L % 4 == 2; }

inline std::vector<SweepPoint> impurity_sweep(const std::vector<double>& lambdas, int Z, const std::vector<int>& ells,
                                              Geometry geometry, int threads, int n_imp = 1) {
  struct Task {
    double lambda;
    int ell;
  };
  std::vector<Task> tasks;
  for (double lam : lambdas)
    for (int ell : ells) {
      if (geometry == Geometry::periodic_bulk && !periodic_size_ok(Z * ell)) continue;
      tasks.push_back({lam, ell});
    }
  auto out = parallel_map<SweepPoint>(tasks.size(), threads, [&](std::size_t i) {
    return measure_impurity(tasks[i].lambda, Z, tasks[i].ell, geometry, n_imp);
  });
  std::sort(out.begin(), out.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.L != b.L) return a.L < b.L;
    return a.parity < b.parity;
  });
  return out;
}

inline std::vector<ScalingSample> to_samples(const std::vector<SweepPoint>& pts, ObservableKind kind) {
  std::vector<ScalingSample> out;
  out.reserve(pts.size());
  for (const auto& p : pts)
    out.push_back({p.L, p.ell, p.parity, kind == ObservableKind::entropy ? p.entropy : p.fluctuation, kind,
                   p.geometry, p.lambda});
  return out;
}

/// Parity differences at fixed L for the even/odd members with the cut at
/// ell = L * num / den (and ell + 1), impurity on the cut bond.
struct UnityPoint {
  int L = 0;
  double lambda = 1.0;
  double d_entropy = 0.0;
  double d_fluct = 0.0;
};

inline UnityPoint measure_unity_pair(int L, int num, int den, double lambda) {
  const int ell = L * num / den;
  const int even = ell % 2 == 0 ? ell : ell + 1;
  const int odd = ell % 2 == 0 ? ell + 1 : ell;
  auto at = [&](int cut) {
    ChainSpec spec = place_pattern(half_filled_chain(L), ImpurityPattern::single(cut, lambda));
    return region_observables(spec, Region{1, cut});
  };
  const auto e = at(even), o = at(odd);
  return {L, lambda, e.entropy_nats - o.entropy_nats, e.fluctuation - o.fluctuation};
}

/// Dot of two weak bonds. The even member has L sites and region [1, L/2]
/// with the dot bonds L/2, L/2+1; the odd member has L+2 sites, region
/// [1, L/2+1] and bonds L/2+1, L/2+2. The dot site stays outside the region.
inline DotMeasurement measure_dot(int L, double lambda) {
  if (L % 4 != 0) throw ConfigError("dot geometry needs L divisible by 4");
  const int half = L / 2;
  ChainSpec even = place_pattern(half_filled_chain(L), ImpurityPattern::dot(half, lambda));
  ChainSpec odd = place_pattern(half_filled_chain(L + 2), ImpurityPattern::dot(half + 1, lambda));
  const auto e = region_observables(even, Region{1, half});
  const auto o = region_observables(odd, Region{1, half + 1});
  return {L, e.entropy_nats, o.entropy_nats, e.fluctuation, o.fluctuation};
}

}  // namespace parlab

#endif  // PARLAB_SWEEP_HPP
