// cxrisk: batch evaluation and verification of complex risk statistics.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cxrisk/errors.hpp"
#include "cxrisk/runner.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out;
  std::string input;
  std::string input_format;
  bool timings = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Override the configured seed");
  cmd->add_option("--format", opt.format, "Standard output format")->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--out", opt.out, "Write the JSON report to this path");
  cmd->add_option("--input", opt.input, "Scenario file replacing the configured inputs")->check(CLI::ExistingFile);
  cmd->add_option("--input-format", opt.input_format, "csv or json (default: from the extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--timings", opt.timings, "Include wall-clock stage timings in the report");
}

int execute(const std::string& command, const Options& opt) {
  using namespace cxrisk;
  RunConfig config = load_run_config(opt.config);
  if (opt.seed) {
    config.seed = *opt.seed;
    config.dual.seed = *opt.seed;
  }
  if (!opt.input.empty()) {
    InputSpec spec;
    spec.label = opt.input;
    spec.path = opt.input;
    spec.format = !opt.input_format.empty()        ? parse_input_format(opt.input_format)
                  : spec.path.extension() == ".json" ? InputFormat::json
                                                     : InputFormat::csv;
    config.inputs = {spec};
  }
  if (command == "eval") {
    config.suites = {Suite::eval};
  } else if (command == "axioms") {
    config.suites = {Suite::axioms, Suite::eval};
  } else if (command == "primal") {
    config.suites = {Suite::eval, Suite::primal};
  } else if (command == "dual") {
    config.suites = {Suite::eval, Suite::dual, Suite::gap};
  } else if (command == "decompose") {
    config.suites = {Suite::eval, Suite::decompose};
  }

  const auto inputs = load_inputs(config);
  const RunReport report = run(config, inputs);
  const ReportOptions ro{opt.timings};
  const std::string json = report_to_json(report, ro);

  if (!opt.out.empty()) {
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw ConfigError(opt.out + ": cannot open for writing");
    file << json;
    if (!file) throw ConfigError(opt.out + ": write failed");
  }
  if (opt.format == "table") {
    std::cout << report_to_table(report, ro);
  } else if (opt.out.empty()) {
    std::cout << json;
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate, decompose and verify complex risk statistics on product scenario spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cxrisk::kVersion));

  Options opt;
  const std::pair<const char*, const char*> commands[] = {
      {"eval", "Evaluate rho on every input"},
      {"axioms", "Run the property suites"},
      {"primal", "Primal (acceptance-set) evaluation, analytic and grid"},
      {"dual", "Dual evaluation, weak-duality check and duality gap"},
      {"decompose", "Rebuild the clustering and simple statistic from rho alone"},
      {"report", "Run every suite listed in the config"},
  };
  for (auto [name, help] : commands) add_common(app.add_subcommand(name, help), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, opt);
  } catch (const cxrisk::ConfigError& e) {
    std::cerr << "cxrisk: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cxrisk: error: " << e.what() << "\n";
    return 2;
  }
}
