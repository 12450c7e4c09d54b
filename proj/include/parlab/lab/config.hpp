#ifndef PARLAB_LAB_CONFIG_HPP
#define PARLAB_LAB_CONFIG_HPP

// Scenario configuration: a JSON object merged over per-scenario defaults.
// Unknown keys are rejected so that a typo cannot silently fall back to a
// default.

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "parlab/errors.hpp"
#include "parlab/sweep.hpp"

namespace parlab::lab {

using json = nlohmann::ordered_json;

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"impurity-sweep", "ssh-collapse",  "dot-crossover",
                                              "slope-at-unity", "theory-check", "zero-modes"};
  return names;
}

/// Sizes L either listed explicitly or generated as a geometric ladder
/// rounded to multiples of `step`.
struct Ladder {
  int min = 120;
  int max = 2400;
  double ratio = 1.15;
  int step = 10;
  std::vector<int> sizes;

  std::vector<int> resolve() const {
    if (!sizes.empty()) {
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2) throw ConfigError("ladder.sizes must be at least 2");
        if (i && sizes[i] <= sizes[i - 1]) throw ConfigError("ladder.sizes must be strictly increasing");
      }
      return sizes;
    }
    auto out = geometric_ladder(min, max, ratio, step);
    if (out.empty()) throw ConfigError("ladder is empty");
    return out;
  }
};

struct ScenarioConfig {
  std::string scenario = "impurity-sweep";
  std::vector<double> lambdas;
  Ladder ladder;
  int Z = 10;
  std::string kind = "both";       // entropy | fluctuation | both
  std::string boundary = "open";   // impurity-sweep: open | periodic
  std::vector<int> n_imp;          // ssh-collapse, zero-modes
  std::vector<std::string> aspects;  // slope-at-unity, "num/den"
  std::vector<double> windows;     // slope-at-unity
  double max_x = 8.0;              // dot-crossover: largest L lambda^2
  int lead = 30;                   // zero-modes
  std::string output;
  int parallelism = 0;  // 0 = hardware concurrency

  bool wants_entropy() const { return kind != "fluctuation"; }
  bool wants_fluctuation() const { return kind != "entropy"; }
};

inline ScenarioConfig default_config(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  if (scenario == "impurity-sweep") {
    c.lambdas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.25, 1.667, 2.5, 5.0, 10.0};
    c.output = "impurity_sweep.csv";
  } else if (scenario == "ssh-collapse") {
    c.lambdas = {0.3, 0.5, 0.7, 0.9, 1.25, 2.0};
    c.ladder.max = 1600;
    c.n_imp = {1, 3, 5};
    c.output = "ssh_collapse.csv";
  } else if (scenario == "dot-crossover") {
    c.lambdas = {0.05, 0.1, 0.2};
    c.ladder = {20, 2400, 1.15, 4, {}};
    c.Z = 2;
    c.output = "dot_crossover.csv";
  } else if (scenario == "slope-at-unity") {
    c.lambdas = {1.0, 0.995, 0.99, 0.98, 0.96, 0.94, 0.92, 0.9};
    c.ladder.sizes = {240, 360, 480, 720, 960, 1200};
    c.aspects = {"1/2", "1/3"};
    c.windows = {0.1, 0.08, 0.06, 0.04, 0.02, 0.01};
    c.output = "slope_at_unity.csv";
  } else if (scenario == "theory-check") {
    c.output = "theory_check.csv";
  } else if (scenario == "zero-modes") {
    c.lambdas = {0.8};
    c.n_imp = {1, 3, 5, 7, 9};
    c.lead = 30;
    c.output = "zero_modes.csv";
  } else {
    throw ConfigError("unknown scenario '" + scenario + "'");
  }
  return c;
}

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["lambdas"] = c.lambdas;
  json l;
  l["min"] = c.ladder.min;
  l["max"] = c.ladder.max;
  l["ratio"] = c.ladder.ratio;
  l["step"] = c.ladder.step;
  l["sizes"] = c.ladder.sizes;
  j["ladder"] = l;
  j["Z"] = c.Z;
  j["kind"] = c.kind;
  j["boundary"] = c.boundary;
  j["n_imp"] = c.n_imp;
  j["aspects"] = c.aspects;
  j["windows"] = c.windows;
  j["max_x"] = c.max_x;
  j["lead"] = c.lead;
  j["output"] = c.output;
  j["parallelism"] = c.parallelism;
  return j;
}

namespace detail {

template <class T>
T take(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config key '" + where + it.key() + "'");
}

/// Parses "num/den" with 0 < num/den <= 1/2.
inline std::pair<int, int> parse_aspect(const std::string& s) {
  int num = 0, den = 0;
  char slash = 0;
  std::istringstream in(s);
  if (!(in >> num >> slash >> den) || slash != '/' || !in.eof() || num < 1 || den < 2 * num)
    throw ConfigError("aspect '" + s + "' is not a fraction num/den in (0, 1/2]");
  return {num, den};
}

}  // namespace detail

inline void validate(const ScenarioConfig& c) {
  default_config(c.scenario);  // checks the name
  if (c.kind != "entropy" && c.kind != "fluctuation" && c.kind != "both")
    throw ConfigError("kind must be entropy, fluctuation or both");
  if (c.parallelism < 0) throw ConfigError("parallelism must not be negative");
  if (c.output.empty()) throw ConfigError("output path is empty");
  if (c.scenario == "theory-check") return;
  if (c.lambdas.empty()) throw ConfigError("lambda grid is empty");
  for (double l : c.lambdas)
    if (!(l > 0.0)) throw ConfigError("all lambda values must be positive");
  if (c.Z < 2) throw ConfigError("Z must be at least 2");
  if (c.scenario != "zero-modes") c.ladder.resolve();
  if (c.scenario == "impurity-sweep" && c.boundary != "open" && c.boundary != "periodic")
    throw ConfigError("boundary must be open or periodic");
  if ((c.scenario == "ssh-collapse" || c.scenario == "zero-modes") && c.n_imp.empty())
    throw ConfigError("n_imp grid is empty");
  for (int n : c.n_imp)
    if (n < 1) throw ConfigError("n_imp values must be positive");
  if (c.scenario == "ssh-collapse")
    for (int n : c.n_imp)
      if (n % 2 == 0) throw ConfigError("ssh-collapse needs odd n_imp so the cut bisects the block");
  if (c.scenario == "slope-at-unity") {
    if (c.aspects.empty()) throw ConfigError("aspect list is empty");
    for (const auto& a : c.aspects) detail::parse_aspect(a);
    if (c.windows.empty()) throw ConfigError("window list is empty");
    for (double w : c.windows)
      if (!(w > 0.0 && w < 1.0)) throw ConfigError("windows must lie in (0, 1)");
  }
  if (c.scenario == "dot-crossover" && !(c.max_x > 0.0)) throw ConfigError("max_x must be positive");
  if (c.scenario == "zero-modes" && c.lead < 0) throw ConfigError("lead must not be negative");
}

/// Defaults for j["scenario"] overridden by the keys present in j.
inline ScenarioConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("scenario")) throw ConfigError("config has no 'scenario' key");
  ScenarioConfig c = default_config(detail::take<std::string>(j, "scenario"));
  detail::reject_unknown(j,
                         {"scenario", "lambdas", "ladder", "Z", "kind", "boundary", "n_imp", "aspects", "windows",
                          "max_x", "lead", "output", "parallelism"},
                         "");
  if (j.contains("lambdas")) c.lambdas = detail::take<std::vector<double>>(j, "lambdas");
  if (j.contains("ladder")) {
    const json& l = j.at("ladder");
    if (!l.is_object()) throw ConfigError("config key 'ladder' must be an object");
    detail::reject_unknown(l, {"min", "max", "ratio", "step", "sizes"}, "ladder.");
    if (l.contains("min")) c.ladder.min = detail::take<int>(l, "min");
    if (l.contains("max")) c.ladder.max = detail::take<int>(l, "max");
    if (l.contains("ratio")) c.ladder.ratio = detail::take<double>(l, "ratio");
    if (l.contains("step")) c.ladder.step = detail::take<int>(l, "step");
    if (l.contains("sizes")) c.ladder.sizes = detail::take<std::vector<int>>(l, "sizes");
  }
  if (j.contains("Z")) c.Z = detail::take<int>(j, "Z");
  if (j.contains("kind")) c.kind = detail::take<std::string>(j, "kind");
  if (j.contains("boundary")) c.boundary = detail::take<std::string>(j, "boundary");
  if (j.contains("n_imp")) c.n_imp = detail::take<std::vector<int>>(j, "n_imp");
  if (j.contains("aspects")) c.aspects = detail::take<std::vector<std::string>>(j, "aspects");
  if (j.contains("windows")) c.windows = detail::take<std::vector<double>>(j, "windows");
  if (j.contains("max_x")) c.max_x = detail::take<double>(j, "max_x");
  if (j.contains("lead")) c.lead = detail::take<int>(j, "lead");
  if (j.contains("output")) c.output = detail::take<std::string>(j, "output");
  if (j.contains("parallelism")) c.parallelism = detail::take<int>(j, "parallelism");
  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return from_json(j);
}

/// Worker count: LAB_THREADS if set, else the config value, where 0 means
/// one worker per hardware thread.
inline int effective_threads(const ScenarioConfig& c) {
  if (const char* env = std::getenv("LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw ConfigError("LAB_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  if (c.parallelism > 0) return c.parallelism;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace parlab::lab

#endif  // PARLAB_LAB_CONFIG_HPP
