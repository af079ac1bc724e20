#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cxrisk/acceptance.hpp"
#include "cxrisk/axiom_report.hpp"
#include "cxrisk/composition.hpp"
#include "cxrisk/duality.hpp"
#include "cxrisk/io.hpp"

namespace cxrisk {

/// Suites in execution order. `eval` always runs.
enum class Suite { axioms, eval, primal, dual, gap, decompose };

std::string_view to_string(Suite s);
Suite parse_suite(std::string_view name);

struct SimpleDescriptor {
  SimpleFamily family = SimpleFamily::weighted_sum;
  std::vector<double> weights;
  double temperature = 1.0;
};

struct ClusteringDescriptor {
  ClusteringFamily family = ClusteringFamily::neg_average;
  std::vector<double> gamma;
};

struct InputSpec {
  std::string label;            ///< path as written in the config
  std::filesystem::path path;   ///< resolved against the config's directory
  InputFormat format = InputFormat::csv;
};

struct Tolerances {
  double axioms = 1e-9;
  double round_trip = 1e-6;
  double gap = 1e-9;
};

/// Everything one run needs. Build with parse_run_config so the descriptors
/// are validated before any computation.
struct RunConfig {
  std::vector<std::size_t> k;
  SimpleDescriptor simple;
  ClusteringDescriptor clustering;
  std::vector<Suite> suites;  ///< sorted into execution order, no duplicates
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;               ///< per axiom suite
  std::uint64_t weak_duality_trials = 1000;  ///< finite-alpha pairs per input
  Tolerances tolerances;
  PrimalGrid primal;
  DualSearch dual;
  BisectionConfig bisection;
  std::vector<InputSpec> inputs;

  bool has(Suite s) const;
};

/// Parses and validates a JSON config. Relative input paths resolve against
/// `base_dir`. Errors are ConfigError prefixed with the offending path,
/// e.g. "simple.params.weights[1]: must be >= 0".
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON form of a config (defaults filled in).
std::string config_to_json(const RunConfig& config);

SimpleRiskStatistic build_simple(const RunConfig& config);
ClusteringFunction build_clustering(const RunConfig& config);
ComplexRiskStatistic build_statistic(const RunConfig& config);

struct SubjectReport {
  std::string subject;  ///< "simple", "clustering", "complex", "acceptance-simple", ...
  AxiomReport report;
};

struct DecomposeOutcome {
  std::optional<ComponentVector> clustering;  ///< reconstructed phi(X)
  std::optional<ExtendedReal> simple;         ///< reconstructed rho(phi(X))
  double error = 0.0;                         ///< |simple - rho(X)|
  std::string diagnostic;                     ///< set when no preimage exists
};

struct InputReport {
  std::size_t index = 0;
  std::string source;  ///< "file:row"
  ExtendedReal rho;
  ComponentVector clustering_value;
  std::optional<PrimalResult> primal;
  std::string primal_error;
  std::optional<DualResult> dual;
  std::optional<AxiomReport> weak_duality;
  std::optional<GapResult> gap;
  bool gap_within_tolerance = true;
  std::optional<DecomposeOutcome> decompose;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  RunConfig config;
  std::vector<SubjectReport> axioms;
  std::vector<InputReport> inputs;
  std::vector<StageTiming> timings;

  std::uint64_t violations() const;
  std::size_t gap_failures() const;
  /// 0 when clean, 1 on violations or gaps beyond tolerance.
  int exit_code() const;
};

struct LabelledInput {
  ScenarioVector vector;
  std::string source;
};

/// Loads every input listed in the config, tagging each with "file:row".
std::vector<LabelledInput> load_inputs(const RunConfig& config);

/// Runs the configured suites. Violations are recorded, never thrown.
RunReport run(const RunConfig& config, const std::vector<LabelledInput>& inputs);

struct ReportOptions {
  bool timings = false;  ///< wall-clock times break byte-for-byte reproducibility
};

std::string report_to_json(const RunReport& report, const ReportOptions& options = {});
std::string report_to_table(const RunReport& report, const ReportOptions& options = {});

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace cxrisk
