#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>

#include "parlab/lab/compare.hpp"
#include "parlab/lab/config.hpp"
#include "parlab/lab/csv.hpp"
#include "parlab/lab/scenarios.hpp"

using namespace parlab;
using namespace parlab::lab;

namespace {

TextTable parse(const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / "parlab_lab_test.csv";
  write_file(path.string(), text);
  return read_csv(path.string());
}

}  // namespace

TEST(Config, DefaultsForEveryScenarioAreValid) {
  for (const auto& name : scenario_names()) EXPECT_NO_THROW(validate(default_config(name))) << name;
  EXPECT_THROW(default_config("plot"), ConfigError);
}

TEST(Config, PrintedConfigRoundTrips) {
  for (const auto& name : scenario_names()) {
    const auto c = default_config(name);
    const auto back = from_json(to_json(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  }
}

TEST(Config, OverridesAndRejections) {
  const auto c = from_json(json::parse(R"({"scenario":"impurity-sweep","lambdas":[0.8],"Z":4,"ladder":{"max":300}})"));
  EXPECT_EQ(c.lambdas, std::vector<double>{0.8});
  EXPECT_EQ(c.Z, 4);
  EXPECT_EQ(c.ladder.max, 300);
  EXPECT_EQ(c.ladder.min, 120);
  for (const char* bad : {R"({"lambdas":[0.8]})", R"({"scenario":"impurity-sweep","lambda":[0.8]})",
                          R"({"scenario":"impurity-sweep","lambdas":[]})", R"({"scenario":"impurity-sweep","lambdas":[0.0]})",
                          R"({"scenario":"impurity-sweep","Z":1})", R"({"scenario":"impurity-sweep","kind":"both!"})",
                          R"({"scenario":"impurity-sweep","ladder":{"min":500,"max":100}})",
                          R"({"scenario":"impurity-sweep","ladder":{"stride":2}})",
                          R"({"scenario":"ssh-collapse","n_imp":[2]})", R"({"scenario":"slope-at-unity","aspects":["2/3"]})",
                          R"({"scenario":"impurity-sweep","lambdas":"0.8"})", R"([1,2])"})
    EXPECT_THROW(from_json(json::parse(bad)), ConfigError) << bad;
}

TEST(Config, ThreadOverride) {
  auto c = default_config("impurity-sweep");
  c.parallelism = 3;
  ::unsetenv("LAB_THREADS");
  EXPECT_EQ(effective_threads(c), 3);
  ::setenv("LAB_THREADS", "2", 1);
  EXPECT_EQ(effective_threads(c), 2);
  ::setenv("LAB_THREADS", "zero", 1);
  EXPECT_THROW(effective_threads(c), ConfigError);
  ::unsetenv("LAB_THREADS");
}

TEST(Csv, FullPrecisionAndLineEndings) {
  Table t{{"a", "b", "c"}, {}};
  t.add({std::string("x"), 3LL, 0.1});
  t.add({std::string("y"), -1LL, 1.0 / 3.0});
  const std::string text = t.to_csv();
  EXPECT_EQ(text, "a,b,c\nx,3,0.10000000000000001\ny,-1,0.33333333333333331\n");
  const auto back = parse(text);
  EXPECT_EQ(std::strtod(back.rows[1][2].c_str(), nullptr), 1.0 / 3.0);
  EXPECT_THROW(t.add({1.0}), ConfigError);
  t.drop({"b"});
  EXPECT_EQ(t.to_csv(), "a,c\nx,0.10000000000000001\ny,0.33333333333333331\n");
}

TEST(Compare, SelfPerturbedAndSchema) {
  const auto a = parse("k,v,w\n1,0.5,2\n2,0.25,3\n");
  CompareOptions o;
  o.keys = {"k"};
  o.tol = 1e-3;
  EXPECT_TRUE(compare_tables(a, a, o).agree());
  const auto b = parse("k,v,w\n1,0.51,2\n2,0.25,3\n");  // 10x the tolerance
  const auto r = compare_tables(a, b, o);
  EXPECT_FALSE(r.agree());
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_EQ(r.mismatches[0].column, "v");
  o.keys = {"missing"};
  EXPECT_THROW(compare_tables(a, b, o), ConfigError);
  o.keys = {"k"};
  o.columns = {"z"};
  EXPECT_THROW(compare_tables(a, b, o), ConfigError);
  const auto dup = parse("k,v\n1,0.5\n1,0.6\n");
  o.columns = {};
  EXPECT_THROW(compare_tables(dup, dup, o), ConfigError);
}

TEST(Compare, FiltersAndNumericKeys) {
  const auto a = parse("N,Lambda,dS\n3,0.026999999999999996,0.5\n5,0.027,0.9\n");
  const auto b = parse("lambda,Lambda,dS\n0.027,0.027,0.505\n");
  CompareOptions o;
  o.keys = {"Lambda"};
  o.columns = {"dS"};
  o.where = {{"N", "3"}};
  o.tol = 0.01;
  const auto r = compare_tables(a, b, o);
  EXPECT_EQ(r.shared_keys, 1);
  EXPECT_TRUE(r.agree());
  o.where = {{"N", "4"}};
  EXPECT_FALSE(compare_tables(a, b, o).agree());  // nothing shared
}

TEST(Scenarios, SiblingPaths) {
  EXPECT_EQ(lab::detail::sibling("out/run.csv", "fits"), "out/run_fits.csv");
  EXPECT_EQ(lab::detail::sibling("run", "fits"), "run_fits.csv");
}

TEST(Scenarios, ImpuritySweepColumnsAndKindFilter) {
  auto c = default_config("impurity-sweep");
  c.lambdas = {1.0, 0.8};
  c.ladder.max = 400;
  auto r = run(c, 2);
  ASSERT_EQ(r.artifacts.size(), 2u);
  const auto& raw = r.artifacts[0].table;
  EXPECT_EQ(raw.columns, (std::vector<std::string>{"scenario", "lambda", "L", "ell", "parity", "S", "F"}));
  EXPECT_EQ(std::get<double>(raw.rows.front()[1]), 0.8);
  c.kind = "entropy";
  r = run(c, 1);
  EXPECT_EQ(r.artifacts[0].table.column("F"), -1);
  EXPECT_EQ(r.artifacts[1].table.column("dF"), -1);
  EXPECT_GE(r.artifacts[1].table.column("dS"), 0);
}

TEST(Scenarios, DeterministicAcrossThreads) {
  auto c = default_config("ssh-collapse");
  c.lambdas = {0.5, 1.25};
  c.ladder.max = 700;
  c.n_imp = {1, 3};
  const auto a = run(c, 1), b = run(c, 3);
  EXPECT_EQ(a.artifacts[0].table.to_csv(), b.artifacts[0].table.to_csv());
}

TEST(Scenarios, NumericalFailureNamesTheGridPoint) {
  auto c = default_config("impurity-sweep");
  c.lambdas = {1e-200};
  c.ladder.sizes = {130};
  try {
    run(c, 1);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("L=130"), std::string::npos) << e.what();
  }
}

TEST(Scenarios, TheoryCheckPasses) {
  const auto r = run(default_config("theory-check"), 1);
  EXPECT_TRUE(r.checks_passed);
  EXPECT_EQ(r.artifacts[0].table.rows.size(), theory_checks().size());
}

TEST(Scenarios, ZeroModesRatios) {
  auto c = default_config("zero-modes");
  c.n_imp = {3, 5};
  const auto r = run(c, 1);
  const auto& t = r.artifacts[0].table;
  const int col = t.column("ratio_to_n_minus_2");
  EXPECT_TRUE(std::isnan(std::get<double>(t.rows[0][static_cast<std::size_t>(col)])));
  EXPECT_NEAR(std::get<double>(t.rows[1][static_cast<std::size_t>(col)]), 0.64, 0.128);
  const int sites = t.column("n_sites");
  long long total = 0;
  for (const auto& row : t.rows) total += std::get<long long>(row[static_cast<std::size_t>(sites)]);
  EXPECT_EQ(r.artifacts[1].table.rows.size(), static_cast<std::size_t>(total));
}
