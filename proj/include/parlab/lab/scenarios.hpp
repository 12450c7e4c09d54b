#ifndef PARLAB_LAB_SCENARIOS_HPP
#define PARLAB_LAB_SCENARIOS_HPP

// Scenario runners. Each turns a validated config into one or more tables;
// writing them to disk is left to the caller.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "parlab/errors.hpp"
#include "parlab/fit.hpp"
#include "parlab/lab/config.hpp"
#include "parlab/lab/csv.hpp"
#include "parlab/scattering.hpp"
#include "parlab/special.hpp"
#include "parlab/sweep.hpp"
#include "parlab/theory.hpp"

namespace parlab::lab {

struct Artifact {
  std::string path;
  Table table;
};

struct RunResult {
  std::vector<Artifact> artifacts;
  bool checks_passed = true;  // theory-check only
};

namespace detail {

/// Sibling path: "out/run.csv" + "fits" -> "out/run_fits.csv".
inline std::string sibling(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  auto name = p.stem().string() + "_" + suffix + (p.has_extension() ? p.extension().string() : ".csv");
  return (p.parent_path() / name).string();
}

inline std::string fmt(double v) { return format_cell(Cell{v}); }

/// Runs f and prefixes numerical failures with the grid point.
template <class F>
auto at_point(const std::string& where, F f) {
  try {
    return f();
  } catch (const NumericalError& e) {
    throw NumericalError(where + ": " + e.what());
  }
}

inline void keep_kinds(Table& t, const ScenarioConfig& c, const std::vector<std::string>& entropy_cols,
                       const std::vector<std::string>& fluct_cols) {
  if (!c.wants_entropy()) t.drop(entropy_cols);
  if (!c.wants_fluctuation()) t.drop(fluct_cols);
}

inline std::vector<int> region_lengths(const ScenarioConfig& c) {
  std::vector<int> ells;
  for (int L : c.ladder.resolve()) {
    if (L % c.Z != 0) throw ConfigError("ladder size " + std::to_string(L) + " is not a multiple of Z");
    ells.push_back(L / c.Z);
  }
  return ells;
}

struct ImpurityTask {
  int n_imp;
  double lambda;
  int ell;
};

inline std::vector<SweepPoint> measure_all(const std::vector<ImpurityTask>& tasks, int Z, Geometry g, int threads) {
  return parallel_map<SweepPoint>(tasks.size(), threads, [&](std::size_t i) {
    const auto& t = tasks[i];
    return at_point("n_imp=" + std::to_string(t.n_imp) + " lambda=" + fmt(t.lambda) + " L=" +
                        std::to_string(Z * t.ell),
                    [&] { return measure_impurity(t.lambda, Z, t.ell, g, t.n_imp); });
  });
}

inline std::vector<SweepPoint> select(const std::vector<SweepPoint>& pts, int n_imp, double lambda) {
  std::vector<SweepPoint> out;
  for (const auto& p : pts)
    if (p.n_imp == n_imp && p.lambda == lambda) out.push_back(p);
  return out;
}

inline void sort_points(std::vector<SweepPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.n_imp != b.n_imp) return a.n_imp < b.n_imp;
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.L != b.L) return a.L < b.L;
    return a.parity < b.parity;
  });
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace detail

inline RunResult run_impurity_sweep(const ScenarioConfig& c, int threads) {
  const Geometry g = c.boundary == "open" ? Geometry::open_boundary : Geometry::periodic_bulk;
  const auto lambdas = detail::sorted_unique(c.lambdas);
  std::vector<detail::ImpurityTask> tasks;
  for (double lam : lambdas)
    for (int ell : detail::region_lengths(c))
      if (g == Geometry::open_boundary || periodic_size_ok(c.Z * ell)) tasks.push_back({1, lam, ell});
  if (tasks.empty()) throw ConfigError("no periodic sizes with L = 2 mod 4 on the ladder");
  auto pts = detail::measure_all(tasks, c.Z, g, threads);
  detail::sort_points(pts);

  Table raw{{"scenario", "lambda", "L", "ell", "parity", "S", "F"}, {}};
  for (const auto& p : pts)
    raw.add({c.scenario, p.lambda, static_cast<long long>(p.L), static_cast<long long>(p.ell), to_string(p.parity),
             p.entropy, p.fluctuation});

  Table fits;
  if (g == Geometry::open_boundary) {
    fits.columns = {"scenario",    "lambda",      "Lambda",      "s",           "c_eff_theory", "c_eff_fit",
                    "C_eff_theory", "C_eff_fit",  "dS",          "dF",          "S_const_even", "S_const_odd",
                    "F_const_even", "F_const_odd", "S_rms",      "F_rms"};
    for (double lam : lambdas) {
      const auto sel = detail::select(pts, 1, lam);
      const auto where = "fit at lambda=" + detail::fmt(lam);
      const auto fs = detail::at_point(where, [&] { return fit_boundary_entropy(to_samples(sel, ObservableKind::entropy)); });
      const auto ff = detail::at_point(where, [&] { return fit_boundary_fluct(to_samples(sel, ObservableKind::fluctuation)); });
      const double s = scaling_variable(lam);
      fits.add({c.scenario, lam, lam, s, c_effective(s), fs.scaled_slope, C_effective(s), ff.scaled_slope, fs.delta,
                ff.delta, fs.const_even, fs.const_odd, ff.const_even, ff.const_odd, fs.residual_rms, ff.residual_rms});
    }
    detail::keep_kinds(fits, c, {"c_eff_theory", "c_eff_fit", "dS", "S_const_even", "S_const_odd", "S_rms"},
                       {"C_eff_theory", "C_eff_fit", "dF", "F_const_even", "F_const_odd", "F_rms"});
  } else {
    fits.columns = {"scenario", "lambda", "Lambda", "s", "c_total_theory", "c_total_fit", "C_total_theory",
                    "C_total_fit", "S_const", "F_const", "S_rms", "F_rms"};
    for (double lam : lambdas) {
      const auto sel = detail::select(pts, 1, lam);
      const auto where = "fit at lambda=" + detail::fmt(lam);
      const auto bs = detail::at_point(where, [&] { return fit_bulk(to_samples(sel, ObservableKind::entropy), ObservableKind::entropy); });
      const auto bf = detail::at_point(where, [&] {
        return fit_bulk(to_samples(sel, ObservableKind::fluctuation), ObservableKind::fluctuation);
      });
      const double s = scaling_variable(lam);
      fits.add({c.scenario, lam, lam, s, 1.0 + c_effective(s), bs.scaled_slope, 1.0 + C_effective(s), bf.scaled_slope,
                bs.constant, bf.constant, bs.residual_rms, bf.residual_rms});
    }
    detail::keep_kinds(fits, c, {"c_total_theory", "c_total_fit", "S_const", "S_rms"},
                       {"C_total_theory", "C_total_fit", "F_const", "F_rms"});
  }
  detail::keep_kinds(raw, c, {"S"}, {"F"});
  return {{{c.output, raw}, {detail::sibling(c.output, "fits"), fits}}};
}

inline RunResult run_ssh_collapse(const ScenarioConfig& c, int threads) {
  const auto lambdas = detail::sorted_unique(c.lambdas);
  std::vector<int> ns = c.n_imp;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::vector<detail::ImpurityTask> tasks;
  const auto ells = detail::region_lengths(c);
  for (int n : ns)
    for (double lam : lambdas)
      for (int ell : ells) {
        if (ell - (n - 1) < 1) throw ConfigError("region length " + std::to_string(ell) + " too short for n_imp=" + std::to_string(n));
        tasks.push_back({n, lam, ell});
      }
  auto pts = detail::measure_all(tasks, c.Z, Geometry::open_boundary, threads);
  detail::sort_points(pts);

  Table t{{"scenario", "N_imp", "lambda", "Lambda", "s", "dS", "dF"}, {}};
  for (int n : ns)
    for (double lam : lambdas) {
      const auto sel = detail::select(pts, n, lam);
      const auto where = "fit at n_imp=" + std::to_string(n) + " lambda=" + detail::fmt(lam);
      const auto fs = detail::at_point(where, [&] { return fit_boundary_entropy(to_samples(sel, ObservableKind::entropy)); });
      const auto ff = detail::at_point(where, [&] { return fit_boundary_fluct(to_samples(sel, ObservableKind::fluctuation)); });
      const double big = std::pow(lam, n);
      t.add({c.scenario, static_cast<long long>(n), lam, big, scaling_variable(big), fs.delta, ff.delta});
    }
  detail::keep_kinds(t, c, {"dS"}, {"dF"});
  return {{{c.output, t}}};
}

/// Curves per lambda; sizes above max_x / lambda^2 are dropped.
inline std::vector<CrossoverCurve> dot_curves(const ScenarioConfig& c, int threads) {
  const auto lambdas = detail::sorted_unique(c.lambdas);
  const auto ladder = c.ladder.resolve();
  struct Task {
    double lambda;
    int L;
  };
  std::vector<Task> tasks;
  for (double lam : lambdas) {
    int count = 0;
    for (int L : ladder) {
      if (L % 4 != 0) throw ConfigError("dot-crossover sizes must be multiples of 4, got " + std::to_string(L));
      if (L * lam * lam > c.max_x) continue;
      tasks.push_back({lam, L});
      ++count;
    }
    if (count < 3) throw ConfigError("fewer than three ladder sizes below max_x at lambda=" + detail::fmt(lam));
  }
  const auto data = parallel_map<DotMeasurement>(tasks.size(), threads, [&](std::size_t i) {
    return detail::at_point("lambda=" + detail::fmt(tasks[i].lambda) + " L=" + std::to_string(tasks[i].L),
                            [&] { return measure_dot(tasks[i].L, tasks[i].lambda); });
  });
  std::vector<CrossoverCurve> curves;
  for (double lam : lambdas) {
    std::vector<DotMeasurement> d;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].lambda == lam) d.push_back(data[i]);
    curves.push_back(dot_crossover(lam, d, c.Z));
  }
  return curves;
}

inline RunResult run_dot_crossover(const ScenarioConfig& c, int threads) {
  Table t{{"scenario", "lambda", "L", "x", "dS_dlnl", "dF_dlnl"}, {}};
  for (const auto& curve : dot_curves(c, threads))
    for (const auto& p : curve.points)
      t.add({c.scenario, curve.lambda, static_cast<long long>(p.L), p.x, p.d_entropy, p.d_fluct});
  detail::keep_kinds(t, c, {"dS_dlnl"}, {"dF_dlnl"});
  return {{{c.output, t}}};
}

struct UnitySlopes {
  std::string aspect;
  double aspect_value = 0.0;
  SlopeAtUnity entropy, fluct;
  std::vector<UnityPoint> points;
};

inline std::vector<UnitySlopes> unity_slopes(const ScenarioConfig& c, int threads) {
  const auto lambdas = detail::sorted_unique(c.lambdas);
  const auto sizes = c.ladder.resolve();
  std::vector<UnitySlopes> out;
  for (const auto& a : c.aspects) {
    const auto [num, den] = detail::parse_aspect(a);
    struct Task {
      double lambda;
      int L;
    };
    std::vector<Task> tasks;
    for (double lam : lambdas)
      for (int L : sizes) tasks.push_back({lam, L});
    UnitySlopes u;
    u.aspect = a;
    u.aspect_value = static_cast<double>(num) / den;
    u.points = parallel_map<UnityPoint>(tasks.size(), threads, [&](std::size_t i) {
      return detail::at_point("aspect=" + a + " lambda=" + detail::fmt(tasks[i].lambda) + " L=" + std::to_string(tasks[i].L),
                              [&] { return measure_unity_pair(tasks[i].L, num, den, tasks[i].lambda); });
    });
    std::vector<DeltaPoint> ds, df;
    for (const auto& p : u.points) {
      ds.push_back({p.L, p.lambda, p.d_entropy});
      df.push_back({p.L, p.lambda, p.d_fluct});
    }
    u.entropy = delta_slope_at_unity(ds, c.windows);
    u.fluct = delta_slope_at_unity(df, c.windows);
    out.push_back(std::move(u));
  }
  return out;
}

inline RunResult run_slope_at_unity(const ScenarioConfig& c, int threads) {
  Table points{{"scenario", "aspect", "lambda", "L", "dS", "dF"}, {}};
  Table summary{{"scenario", "kind", "aspect", "window", "slope", "theory"}, {}};
  const auto all = unity_slopes(c, threads);
  for (const auto& u : all) {
    auto pts = u.points;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
      return a.lambda != b.lambda ? a.lambda < b.lambda : a.L < b.L;
    });
    for (const auto& p : pts) points.add({c.scenario, u.aspect, p.lambda, static_cast<long long>(p.L), p.d_entropy, p.d_fluct});
  }
  auto emit = [&](const char* kind, bool wanted, auto member, auto theory) {
    if (!wanted) return;
    for (const auto& u : all) {
      const SlopeAtUnity& r = u.*member;
      const double th = theory(u.aspect_value);
      for (std::size_t i = 0; i < r.windows.size(); ++i) summary.add({c.scenario, kind, u.aspect, r.windows[i], r.slopes[i], th});
      summary.add({c.scenario, kind, u.aspect, 0.0, r.limit, th});
    }
  };
  emit("entropy", c.wants_entropy(), &UnitySlopes::entropy, [](double a) { return entropy_slope(a); });
  emit("fluctuation", c.wants_fluctuation(), &UnitySlopes::fluct, [](double a) { return fluctuation_slope_integral(a); });
  detail::keep_kinds(points, c, {"dS"}, {"dF"});
  return {{{c.output, summary}, {detail::sibling(c.output, "points"), points}}};
}

struct TheoryCheck {
  std::string name;
  double value, target, tolerance;
  double residual() const { return std::abs(value - target); }
  bool pass() const { return residual() <= tolerance; }
};

inline std::vector<TheoryCheck> theory_checks() {
  const double pi = std::numbers::pi, pi2 = pi * pi;
  double reflection = 0.0, two_forms = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double s = i / 1000.0;
    reflection = std::max(reflection, std::abs(dilog(s) + dilog(1.0 - s) - (pi2 / 6.0 - std::log(s) * std::log1p(-s))));
    two_forms = std::max(two_forms, std::abs(c_effective(s) - c_effective_reflected(s)));
  }
  return {
      {"dilog_reflection_max_residual", reflection, 0.0, 1e-11},
      {"dilog_at_minus_one", dilog(-1.0), -pi2 / 12.0, 1e-13},
      {"c_eff_two_forms_max_difference", two_forms, 0.0, 1e-10},
      {"c_eff_at_full_transmission", c_effective(1.0), 1.0, 1e-12},
      {"boundary_log_identity", boundary_log_identity(), -pi / 6.0, 1e-8},
      {"log_square_integral", log_square_integral(), 4.0 * pi * std::numbers::ln2, 1e-6},
      {"entropy_slope_integral_small_aspect", entropy_slope_integral(0.0), pi / 6.0, 1e-4},
      {"entropy_slope_integral_half", entropy_slope_integral(0.5), 0.500125, 5e-4},
  };
}

inline RunResult run_theory_check(const ScenarioConfig& c) {
  Table t{{"scenario", "check", "value", "target", "residual", "tolerance", "pass"}, {}};
  RunResult r;
  for (const auto& k : theory_checks()) {
    t.add({c.scenario, k.name, k.value, k.target, k.residual(), k.tolerance, std::string(k.pass() ? "yes" : "no")});
    r.checks_passed = r.checks_passed && k.pass();
  }
  r.artifacts.push_back({c.output, t});
  return r;
}

/// Sign convention for eigenvectors: the largest-magnitude entry is positive.
inline Eigen::VectorXd fix_sign(Eigen::VectorXd v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  if (v(i) < 0.0) v = -v;
  return v;
}

inline RunResult run_zero_modes(const ScenarioConfig& c, int threads) {
  const auto lambdas = detail::sorted_unique(c.lambdas);
  std::vector<int> ns = c.n_imp;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  struct Task {
    double lambda;
    int n;
  };
  std::vector<Task> tasks;
  for (double lam : lambdas)
    for (int n : ns) tasks.push_back({lam, n});
  const auto modes = parallel_map<NearZeroModes>(tasks.size(), threads, [&](std::size_t i) {
    return detail::at_point("lambda=" + detail::fmt(tasks[i].lambda) + " n_imp=" + std::to_string(tasks[i].n),
                            [&] { return near_zero_modes(alternating_block_in_leads(c.lead, tasks[i].n, tasks[i].lambda)); });
  });

  Table t{{"scenario", "lambda", "N_imp", "lead", "n_sites", "E_lower", "E_upper", "splitting", "ratio_to_n_minus_2",
           "left_A_fraction", "right_A_fraction", "left_mode_B_weight", "right_mode_A_weight"},
          {}};
  Table wf{{"scenario", "lambda", "N_imp", "site", "sublattice", "psi_lower", "psi_upper", "psi_left", "psi_right"}, {}};
  std::map<std::pair<double, int>, double> split;
  for (std::size_t i = 0; i < tasks.size(); ++i) split[{tasks[i].lambda, tasks[i].n}] = modes[i].splitting();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& m = modes[i];
    const auto& task = tasks[i];
    const auto prev = split.find({task.lambda, task.n - 2});
    const double ratio = prev == split.end() ? std::nan("") : m.splitting() / prev->second;
    const auto n_sites = static_cast<long long>(m.wavefunctions[0].size());
    // Average over the two members so the fraction describes the pair.
    t.add({c.scenario, task.lambda, static_cast<long long>(task.n), static_cast<long long>(c.lead), n_sites,
           m.energies[0], m.energies[1], m.splitting(), ratio, 0.5 * (m.left_a_fraction[0] + m.left_a_fraction[1]),
           0.5 * (m.right_a_fraction[0] + m.right_a_fraction[1]), m.left_mode_b_weight, m.right_mode_a_weight});
    const Eigen::VectorXd lo = fix_sign(m.wavefunctions[0]), hi = fix_sign(m.wavefunctions[1]);
    const Eigen::VectorXd left = fix_sign(m.left_mode), right = fix_sign(m.right_mode);
    for (Eigen::Index s = 0; s < lo.size(); ++s)
      wf.add({c.scenario, task.lambda, static_cast<long long>(task.n), static_cast<long long>(s + 1),
              std::string(s % 2 == 0 ? "A" : "B"), lo(s), hi(s), left(s), right(s)});
  }
  return {{{c.output, t}, {detail::sibling(c.output, "wavefunctions"), wf}}};
}

inline RunResult run(const ScenarioConfig& c, int threads) {
  validate(c);
  if (c.scenario == "impurity-sweep") return run_impurity_sweep(c, threads);
  if (c.scenario == "ssh-collapse") return run_ssh_collapse(c, threads);
  if (c.scenario == "dot-crossover") return run_dot_crossover(c, threads);
  if (c.scenario == "slope-at-unity") return run_slope_at_unity(c, threads);
  if (c.scenario == "theory-check") return run_theory_check(c);
  if (c.scenario == "zero-modes") return run_zero_modes(c, threads);
  throw ConfigError("unknown scenario '" + c.scenario + "'");
}

}  // namespace parlab::lab

#endif  // PARLAB_LAB_SCENARIOS_HPP
