// lab: scenario runner and CSV comparison.
//
// Exit codes: 0 success, 1 comparison mismatch or failed theory check,
// 2 configuration or schema error, 3 numerical error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "parlab/errors.hpp"
#include "parlab/lab/compare.hpp"
#include "parlab/lab/config.hpp"
#include "parlab/lab/scenarios.hpp"
#include "parlab/linalg.hpp"

namespace {

using namespace parlab;

int write_artifacts(const lab::RunResult& r) {
  for (const auto& a : r.artifacts) {
    lab::write_csv(a.path, a.table);
    std::cerr << "wrote " << a.path << " (" << a.table.rows.size() << " rows)\n";
  }
  return r.checks_passed ? 0 : 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  linalg::select_safe_blas_kernel(argv);
  linalg::single_threaded_blas();

  CLI::App app{"Parity-effect lab: impurity chain scenarios as CSV artifacts"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the scenario described by a JSON config");
  std::string config_path, scenario_for_defaults;
  bool print_config = false;
  run->add_option("config", config_path, "Path to the JSON config");
  run->add_option("--scenario", scenario_for_defaults, "Scenario whose defaults --print-config shows when no config is given")
      ->check(CLI::IsMember(lab::scenario_names()));
  run->add_flag("--print-config", print_config, "Print the effective config (defaults filled in) and exit");

  auto* cmp = app.add_subcommand("compare", "Compare two CSV files on key columns");
  std::string file_a, file_b, keys, columns;
  std::vector<std::string> where;
  double tol = 1e-9;
  cmp->add_option("a", file_a, "First CSV")->required();
  cmp->add_option("b", file_b, "Second CSV")->required();
  cmp->add_option("--keys", keys, "Comma-separated key columns")->required();
  cmp->add_option("--columns", columns, "Comma-separated value columns (default: all shared)");
  cmp->add_option("--where", where, "Row filter column=value, applied to files that have the column");
  cmp->add_option("--tol", tol, "Absolute tolerance");

  auto* theory = app.add_subcommand("theory-check", "Evaluate the closed-form identities and quadrature targets");
  std::string theory_out;
  theory->add_option("--output", theory_out, "Also write the table to this CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      lab::ScenarioConfig cfg;
      if (!config_path.empty()) {
        cfg = lab::load_config(config_path);
      } else if (print_config && !scenario_for_defaults.empty()) {
        cfg = lab::default_config(scenario_for_defaults);
      } else {
        throw ConfigError("run needs a config path (or --print-config --scenario NAME)");
      }
      if (print_config) {
        std::cout << lab::to_json(cfg).dump(2) << '\n';
        return 0;
      }
      return write_artifacts(lab::run(cfg, lab::effective_threads(cfg)));
    }
    if (*cmp) {
      lab::CompareOptions o;
      o.keys = split_list(keys);
      o.columns = split_list(columns);
      o.tol = tol;
      for (const auto& w : where) {
        const auto eq = w.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--where expects column=value, got '" + w + "'");
        o.where.emplace_back(w.substr(0, eq), w.substr(eq + 1));
      }
      const auto res = lab::compare_tables(lab::read_csv(file_a), lab::read_csv(file_b), o);
      for (const auto& m : res.mismatches)
        std::cerr << "mismatch at " << m.key << " column " << m.column << ": " << m.a << " vs " << m.b << '\n';
      std::cerr << res.shared_keys << " shared keys, " << res.compared_values << " values compared, "
                << res.mismatches.size() << " outside tolerance\n";
      return res.agree() ? 0 : 1;
    }
    if (*theory) {
      auto cfg = lab::default_config("theory-check");
      auto r = lab::run_theory_check(cfg);
      std::cout << r.artifacts.front().table.to_csv();
      if (!theory_out.empty()) lab::write_csv(theory_out, r.artifacts.front().table);
      return r.checks_passed ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
