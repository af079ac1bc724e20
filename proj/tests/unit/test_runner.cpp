#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "cxrisk/errors.hpp"
#include "cxrisk/io.hpp"
#include "cxrisk/runner.hpp"

using namespace cxrisk;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

const char* kLinearConfig = R"({
  "space": {"k": [2, 1]},
  "simple": {"family": "weighted-sum", "params": {"weights": [1, 1]}},
  "clustering": {"family": "neg-average", "params": {"gamma": [1, 1]}},
  "suites": ["gap", "axioms", "primal"],
  "seed": 42,
  "trials": 200,
  "weak_duality_trials": 200
})";

std::vector<LabelledInput> one_input() {
  return {{ScenarioVector(ScenarioSpace({2, 1}), {{1, 3}, {2}}), "inline:1"}};
}

}  // namespace

TEST_CASE("CSV scenario files", "[io]") {
  const auto v = parse_scenarios_csv("k=2,1\n1,3,2\n");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == ScenarioVector(ScenarioSpace({2, 1}), {{1, 3}, {2}}));
  CHECK(parse_scenarios_csv("k=2,1\n").empty());
  CHECK(parse_scenarios_csv("k=2,1").empty());
  CHECK(parse_scenarios_csv("k=1\r\n0.5\r\n\r\n-1e-3\r\n").size() == 2);
  CHECK_THAT(message_of([] { parse_scenarios_csv("k=2,1\n1,3\n", "a.csv"); }), ContainsSubstring("a.csv: row 1"));
  CHECK_THAT(message_of([] { parse_scenarios_csv("k=2,1\n1,2,3\n1,x,3\n"); }),
             ContainsSubstring("row 2, column 2: non-numeric"));
  CHECK_THAT(message_of([] { parse_scenarios_csv("1,2,3\n"); }), ContainsSubstring("missing header"));
  CHECK_THAT(message_of([] { parse_scenarios_csv("k=2,0\n"); }), ContainsSubstring("shape entry 1"));
  CHECK_THAT(message_of([] { parse_scenarios_csv("k=1\nnan\n"); }), ContainsSubstring("non-numeric"));
}

TEST_CASE("JSON scenario files", "[io]") {
  const auto v = parse_scenarios_json(R"({"shape": [2, 1], "vectors": [[1, 3, 2], [0, 0, 0]]})");
  REQUIRE(v.size() == 2);
  CHECK(v[0].block(1)[0] == 2.0);
  CHECK(parse_scenarios_json(R"({"shape": [3], "vectors": []})").empty());
  CHECK_THAT(message_of([] { parse_scenarios_json(R"({"shape": [2, 1], "vectors": [[1, 2]]})"); }),
             ContainsSubstring("row 1: expected 3 values, got 2"));
  CHECK_THAT(message_of([] { parse_scenarios_json(R"({"vectors": []})"); }), ContainsSubstring("shape"));
  CHECK_THAT(message_of([] { parse_scenarios_json("{"); }), ContainsSubstring("invalid JSON"));
  CHECK_THROWS_AS(load_scenarios("/nonexistent/file.csv", InputFormat::csv), ConfigError);
}

TEST_CASE("config validation names the offending field", "[runner][config]") {
  auto err = [](const std::string& text) { return message_of([&] { parse_run_config(text); }); };
  const std::string head = R"({"space": {"k": [2, 1]}, )";
  CHECK_THAT(err(head + R"("simple": {"family": "weighted-sum", "params": {"weights": [1, -1]}},
                          "clustering": {"family": "neg-average"}})"),
             ContainsSubstring("simple.params.weights[1]: must be >= 0"));
  CHECK_THAT(err(head + R"("simple": {"family": "weighted-sum", "params": {"weights": [1]}},
                          "clustering": {"family": "neg-average"}})"),
             ContainsSubstring("simple.params.weights: expected 2 entries"));
  CHECK_THAT(err(head + R"("simple": {"family": "cvar"}, "clustering": {"family": "neg-average"}})"),
             ContainsSubstring("simple.family"));
  CHECK_THAT(err(head + R"("simple": {"family": "log-sum-exp", "params": {"temperature": 0}},
                          "clustering": {"family": "neg-average"}})"),
             ContainsSubstring("simple.params.temperature: must be > 0"));
  CHECK_THAT(err(head + R"("simple": {"family": "max"}, "clustering": {"family": "expm1-link",
                          "params": {"gamma": [1, 0]}}})"),
             ContainsSubstring("clustering.params.gamma[1]: must be > 0"));
  CHECK_THAT(err(head + R"("simple": {"family": "max"}, "clustering": {"family": "neg-average"},
                          "suites": ["eval", "plot"]})"),
             ContainsSubstring("suites[1]"));
  CHECK_THAT(err(head + R"("simple": {"family": "max"}, "clustering": {"family": "neg-average"}, "sed": 1})"),
             ContainsSubstring("sed: unknown key"));
  CHECK_THAT(err(R"({"space": {"k": [2, 0]}})"), ContainsSubstring("space.k[1]: must be >= 1"));
  CHECK_THAT(err(R"({"space": {"k": [2]}, "simple": {"family": "max"}})"), ContainsSubstring("clustering: missing"));
}

TEST_CASE("suites are ordered and eval is implied", "[runner][config]") {
  const auto c = parse_run_config(kLinearConfig);
  CHECK(c.suites == std::vector<Suite>{Suite::axioms, Suite::eval, Suite::primal, Suite::dual, Suite::gap});
  const auto empty = parse_run_config(R"({"space": {"k": [1]}, "simple": {"family": "max"},
                                          "clustering": {"family": "neg-average"}, "suites": []})");
  CHECK(empty.suites == std::vector<Suite>{Suite::eval});
}

TEST_CASE("run on the linear family", "[runner]") {
  const auto config = parse_run_config(kLinearConfig);
  const auto report = run(config, one_input());
  REQUIRE(report.inputs.size() == 1);
  const auto& in = report.inputs[0];
  CHECK(in.rho == ExtendedReal(-4.0));
  REQUIRE(in.gap);
  CHECK(in.gap->gap <= 1e-9);
  CHECK(in.gap_within_tolerance);
  CHECK(report.axioms.size() == 16);
  CHECK(report.violations() == 0);
  CHECK(report.exit_code() == 0);
}

TEST_CASE("empty suite list evaluates only", "[runner]") {
  auto config = parse_run_config(kLinearConfig);
  config.suites = {Suite::eval};
  const auto report = run(config, one_input());
  CHECK(report.axioms.empty());
  CHECK_FALSE(report.inputs[0].primal);
  CHECK_FALSE(report.inputs[0].dual);
  CHECK(report.inputs[0].rho == ExtendedReal(-4.0));
  const std::string json = report_to_json(report);
  CHECK_THAT(json, ContainsSubstring("\"rho\": -4.0"));
}

TEST_CASE("reports are byte-identical across runs", "[runner][determinism]") {
  const auto config = parse_run_config(kLinearConfig);
  const auto a = report_to_json(run(config, one_input()));
  const auto b = report_to_json(run(config, one_input()));
  CHECK(a == b);
  CHECK(a.find("timings") == std::string::npos);
  CHECK(report_to_json(run(config, one_input()), {true}).find("timings") != std::string::npos);
}

TEST_CASE("violations drive the exit code", "[runner]") {
  auto config = parse_run_config(R"({"space": {"k": [1, 1]}, "simple": {"family": "max"},
                                     "clustering": {"family": "neg-average"}, "suites": ["axioms"],
                                     "trials": 500})");
  const auto report = run(config, {});
  CHECK(report.violations() > 0);  // C3 fails for max compositions
  CHECK(report.exit_code() == 1);
  CHECK_THAT(report_to_table(report), ContainsSubstring("FAIL"));
}

TEST_CASE("gap tolerance drives the exit code", "[runner]") {
  auto config = parse_run_config(R"({"space": {"k": [1, 1]}, "simple": {"family": "log-sum-exp"},
                                     "clustering": {"family": "neg-average"}, "suites": ["gap"],
                                     "grids": {"dual": {"include_analytic": false, "step": 0.5}},
                                     "weak_duality_trials": 10})");
  const std::vector<LabelledInput> inputs{{ScenarioVector(ScenarioSpace({1, 1}), {{0.3}, {-1.2}}), "x:1"}};
  const auto report = run(config, inputs);
  CHECK(report.gap_failures() == 1);
  CHECK(report.exit_code() == 1);
}

TEST_CASE("config inputs resolve against the config directory", "[runner][io]") {
  const auto dir = std::filesystem::temp_directory_path() / "cxrisk_runner_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "x.csv") << "k=2,1\n1,3,2\n0,0,0\n";
  std::ofstream(dir / "config.json") << R"({"space": {"k": [2, 1]}, "simple": {"family": "max"},
      "clustering": {"family": "neg-average"}, "inputs": [{"path": "x.csv"}]})";
  const auto config = load_run_config(dir / "config.json");
  const auto inputs = load_inputs(config);
  REQUIRE(inputs.size() == 2);
  CHECK(inputs[1].source == "x.csv:2");
  const auto report = run(config, inputs);
  CHECK(report.inputs[0].rho == ExtendedReal(-2.0));
  std::ofstream(dir / "bad.json") << R"({"space": {"k": [1]}, "simple": {"family": "max"},
      "clustering": {"family": "neg-average"}, "inputs": [{"path": "x.csv"}]})";
  CHECK_THAT(message_of([&] { load_inputs(load_run_config(dir / "bad.json")); }),
             ContainsSubstring("shape does not match"));
  std::filesystem::remove_all(dir);
}
