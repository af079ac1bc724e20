#include "cxrisk/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cxrisk/errors.hpp"

namespace cxrisk {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr Suite kAllSuites[] = {Suite::axioms, Suite::eval, Suite::primal,
                                Suite::dual, Suite::gap, Suite::decompose};

// ---------------------------------------------------------------------------
// Config parsing. Every accessor carries the dotted path of the node it
// reads so errors point at the offending field.

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string join(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

std::string index(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) bad(path.empty() ? "config" : path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      bad(join(path, item.key()), "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(path, "must be finite");
  return x;
}

double get_positive(const json& v, const std::string& path) {
  const double x = get_number(v, path);
  if (!(x > 0.0)) bad(path, "must be > 0");
  return x;
}

std::uint64_t get_u64(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    bad(path, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_vector(const json& v, const std::string& path, std::size_t d) {
  if (!v.is_array()) bad(path, "expected an array of numbers");
  if (v.size() != d) bad(path, "expected " + std::to_string(d) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], index(path, i)));
  return out;
}

template <class F>
auto with_path(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    bad(path, e.what());
  }
}

SimpleDescriptor parse_simple(const json& node, std::size_t d) {
  allow_keys(node, "simple", {"family", "params"});
  if (!node.contains("family")) bad("simple.family", "missing");
  SimpleDescriptor out;
  const std::string name = get_string(node["family"], "simple.family");
  out.family = with_path("simple.family", [&] { return parse_simple_family(name); });
  const json params = node.contains("params") ? node["params"] : json::object();
  switch (out.family) {
    case SimpleFamily::weighted_sum: {
      allow_keys(params, "simple.params", {"weights"});
      if (!params.contains("weights")) bad("simple.params.weights", "missing");
      out.weights = get_vector(params["weights"], "simple.params.weights", d);
      for (std::size_t i = 0; i < d; ++i) {
        if (out.weights[i] < 0.0) bad(index("simple.params.weights", i), "must be >= 0");
      }
      break;
    }
    case SimpleFamily::max: allow_keys(params, "simple.params", {}); break;
    case SimpleFamily::log_sum_exp:
      allow_keys(params, "simple.params", {"temperature"});
      if (params.contains("temperature")) {
        out.temperature = get_positive(params["temperature"], "simple.params.temperature");
      }
      break;
    case SimpleFamily::custom: bad("simple.family", "custom statistics cannot be configured from a file");
  }
  return out;
}

ClusteringDescriptor parse_clustering(const json& node, std::size_t d) {
  allow_keys(node, "clustering", {"family", "params"});
  if (!node.contains("family")) bad("clustering.family", "missing");
  ClusteringDescriptor out;
  const std::string name = get_string(node["family"], "clustering.family");
  out.family = with_path("clustering.family", [&] { return parse_clustering_family(name); });
  if (out.family == ClusteringFamily::custom) {
    bad("clustering.family", "custom clusterings cannot be configured from a file");
  }
  const json params = node.contains("params") ? node["params"] : json::object();
  allow_keys(params, "clustering.params", {"gamma"});
  out.gamma.assign(d, 1.0);
  if (params.contains("gamma")) {
    out.gamma = get_vector(params["gamma"], "clustering.params.gamma", d);
    for (std::size_t i = 0; i < d; ++i) {
      if (!(out.gamma[i] > 0.0)) bad(index("clustering.params.gamma", i), "must be > 0");
    }
  }
  return out;
}

void parse_grids(const json& node, RunConfig& c) {
  allow_keys(node, "grids", {"primal", "dual", "penalty"});
  if (node.contains("primal")) {
    const json& p = node["primal"];
    allow_keys(p, "grids.primal", {"step", "extent", "max_points"});
    if (p.contains("step")) c.primal.step = get_positive(p["step"], "grids.primal.step");
    if (p.contains("extent")) c.primal.extent = get_positive(p["extent"], "grids.primal.extent");
    if (p.contains("max_points")) c.primal.max_points = get_u64(p["max_points"], "grids.primal.max_points");
  }
  if (node.contains("dual")) {
    const json& p = node["dual"];
    allow_keys(p, "grids.dual", {"ymax", "step", "include_analytic", "max_points"});
    if (p.contains("ymax")) c.dual.ymax = get_positive(p["ymax"], "grids.dual.ymax");
    if (p.contains("step")) c.dual.step = get_positive(p["step"], "grids.dual.step");
    if (p.contains("include_analytic")) {
      if (!p["include_analytic"].is_boolean()) bad("grids.dual.include_analytic", "expected true or false");
      c.dual.include_analytic = p["include_analytic"].get<bool>();
    }
    if (p.contains("max_points")) c.dual.max_grid_points = get_u64(p["max_points"], "grids.dual.max_points");
  }
  if (node.contains("penalty")) {
    const json& p = node["penalty"];
    allow_keys(p, "grids.penalty", {"method", "block_sum_range", "block_sum_step"});
    if (p.contains("method")) {
      const std::string m = get_string(p["method"], "grids.penalty.method");
      if (m == "closed-form") {
        c.dual.penalty.method = PenaltyMethod::closed_form;
      } else if (m == "grid") {
        c.dual.penalty.method = PenaltyMethod::grid;
      } else {
        bad("grids.penalty.method", "expected 'closed-form' or 'grid'");
      }
    }
    if (p.contains("block_sum_range")) {
      c.dual.penalty.block_sum_range = get_positive(p["block_sum_range"], "grids.penalty.block_sum_range");
    }
    if (p.contains("block_sum_step")) {
      c.dual.penalty.block_sum_step = get_positive(p["block_sum_step"], "grids.penalty.block_sum_step");
    }
  }
}

void parse_bisection(const json& p, BisectionConfig& b) {
  allow_keys(p, "bisection", {"tolerance", "initial_half_width", "max_magnitude", "max_iterations"});
  if (p.contains("tolerance")) b.tolerance = get_positive(p["tolerance"], "bisection.tolerance");
  if (p.contains("initial_half_width")) {
    b.initial_half_width = get_positive(p["initial_half_width"], "bisection.initial_half_width");
  }
  if (p.contains("max_magnitude")) b.max_magnitude = get_positive(p["max_magnitude"], "bisection.max_magnitude");
  if (p.contains("max_iterations")) {
    const auto n = get_u64(p["max_iterations"], "bisection.max_iterations");
    if (n == 0 || n > 100000) bad("bisection.max_iterations", "must be in [1, 100000]");
    b.max_iterations = static_cast<int>(n);
  }
}

// ---------------------------------------------------------------------------
// Report helpers.

ojson number(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "+inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

ojson number(ExtendedReal v) { return number(v.raw()); }

ojson numbers(std::span<const double> v) {
  ojson out = ojson::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

ojson axiom_json(const std::string& subject, const AxiomReport& r) {
  ojson out;
  out["axiom"] = std::string(to_string(r.check));
  out["subject"] = subject;
  out["trials"] = r.trials;
  out["violations"] = r.violations;
  out["skipped"] = r.skipped;
  out["infinite"] = r.infinite;
  out["worst_margin"] = number(r.worst_margin);
  out["seed"] = r.seed;
  out["tolerance"] = r.tolerance;
  out["passed"] = r.passed();
  return out;
}

std::string_view to_string(PenaltyMethod m) { return m == PenaltyMethod::grid ? "grid" : "closed-form"; }

ojson config_json(const RunConfig& c) {
  ojson out;
  out["space"]["k"] = c.k;
  out["simple"]["family"] = std::string(to_string(c.simple.family));
  out["simple"]["params"] = ojson::object();
  if (c.simple.family == SimpleFamily::weighted_sum) out["simple"]["params"]["weights"] = c.simple.weights;
  if (c.simple.family == SimpleFamily::log_sum_exp) out["simple"]["params"]["temperature"] = c.simple.temperature;
  out["clustering"]["family"] = std::string(to_string(c.clustering.family));
  out["clustering"]["params"]["gamma"] = c.clustering.gamma;
  out["suites"] = ojson::array();
  for (Suite s : c.suites) out["suites"].push_back(std::string(to_string(s)));
  out["seed"] = c.seed;
  out["trials"] = c.trials;
  out["weak_duality_trials"] = c.weak_duality_trials;
  out["tolerances"] = {{"axioms", c.tolerances.axioms},
                       {"round-trip", c.tolerances.round_trip},
                       {"gap", c.tolerances.gap}};
  out["grids"]["primal"] = {{"step", c.primal.step},
                            {"extent", c.primal.extent},
                            {"max_points", c.primal.max_points}};
  out["grids"]["dual"] = {{"ymax", c.dual.ymax},
                          {"step", c.dual.step},
                          {"include_analytic", c.dual.include_analytic},
                          {"max_points", c.dual.max_grid_points}};
  out["grids"]["penalty"] = {{"method", std::string(to_string(c.dual.penalty.method))},
                             {"block_sum_range", c.dual.penalty.block_sum_range},
                             {"block_sum_step", c.dual.penalty.block_sum_step}};
  out["bisection"] = {{"tolerance", c.bisection.tolerance},
                      {"initial_half_width", c.bisection.initial_half_width},
                      {"max_magnitude", c.bisection.max_magnitude},
                      {"max_iterations", c.bisection.max_iterations}};
  out["inputs"] = ojson::array();
  for (const auto& in : c.inputs) {
    out["inputs"].push_back({{"path", in.label}, {"format", std::string(to_string(in.format))}});
  }
  return out;
}

ojson penalty_json(const PenaltyValue& p) {
  ojson out;
  out["value"] = number(p.value);
  out["method"] = std::string(to_string(p.method));
  out["simple_part"] = number(p.simple_part);
  out["clustering_part"] = number(p.clustering_part);
  if (!p.unbounded.empty()) out["unbounded"] = p.unbounded;
  return out;
}

ojson dual_json(const DualResult& d) {
  ojson out;
  out["value"] = number(d.value);
  if (d.argmax) {
    out["argmax"] = {{"yhat", numbers(d.argmax->yhat.values())},
                     {"xhat_block_sums", numbers(d.argmax->xhat_block_sums.values())}};
  }
  if (d.alpha) {
    out["alpha"] = penalty_json(*d.alpha);
    out["method"] = std::string(to_string(d.alpha->method));
  }
  out["candidates"] = d.candidates;
  out["finite_candidates"] = d.finite_candidates;
  out["subsampled"] = d.subsampled;
  if (!d.diagnostic.empty()) out["diagnostic"] = d.diagnostic;
  return out;
}

ojson primal_json(const PrimalResult& p) {
  ojson out;
  out["analytic"] = number(p.analytic);
  out["numeric"] = number(p.numeric);
  out["gap"] = number(p.gap);
  out["numeric_argmin"] = numbers(p.numeric_argmin);
  out["grid"] = {{"lower", numbers(p.box_lower)},
                 {"upper", numbers(p.box_upper)},
                 {"step", p.step},
                 {"points", p.points}};
  if (!p.warnings.empty()) out["warnings"] = p.warnings;
  return out;
}

ojson input_json(const InputReport& in) {
  ojson out;
  out["index"] = in.index;
  out["source"] = in.source;
  out["rho"] = number(in.rho);
  out["clustering"] = numbers(in.clustering_value.values());
  if (in.primal) out["primal"] = primal_json(*in.primal);
  if (!in.primal_error.empty()) out["primal_error"] = in.primal_error;
  if (in.dual) out["dual"] = dual_json(*in.dual);
  if (in.weak_duality) out["weak_duality"] = axiom_json("complex", *in.weak_duality);
  if (in.gap) {
    out["gap"] = {{"gap", number(in.gap->gap)},
                  {"raw", number(in.gap->raw)},
                  {"within_tolerance", in.gap_within_tolerance}};
  }
  if (in.decompose) {
    const auto& d = *in.decompose;
    ojson dec;
    if (d.clustering) dec["clustering"] = numbers(d.clustering->values());
    if (d.simple) {
      dec["simple"] = number(*d.simple);
      dec["error"] = number(d.error);
    }
    if (!d.diagnostic.empty()) dec["diagnostic"] = d.diagnostic;
    out["decompose"] = dec;
  }
  return out;
}

std::string fmt(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "+inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      if (c) line += "  ";
      line += rows[i][c];
      if (c + 1 < rows[i].size()) line.append(width[c] - rows[i][c].size(), ' ');
    }
    out += line + "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::axioms: return "axioms";
    case Suite::eval: return "eval";
    case Suite::primal: return "primal";
    case Suite::dual: return "dual";
    case Suite::gap: return "gap";
    case Suite::decompose: return "decompose";
  }
  return "?";
}

Suite parse_suite(std::string_view name) {
  for (Suite s : kAllSuites) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown suite '" + std::string(name) +
                    "' (expected axioms, eval, primal, dual, gap or decompose)");
}

bool RunConfig::has(Suite s) const { return std::find(suites.begin(), suites.end(), s) != suites.end(); }

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  allow_keys(doc, "", {"space", "simple", "clustering", "suites", "seed", "trials", "weak_duality_trials",
                       "tolerances", "grids", "bisection", "inputs"});

  RunConfig c;
  if (!doc.contains("space")) bad("space", "missing");
  allow_keys(doc["space"], "space", {"k"});
  if (!doc["space"].contains("k") || !doc["space"]["k"].is_array() || doc["space"]["k"].empty()) {
    bad("space.k", "expected a nonempty array of positive integers");
  }
  for (std::size_t i = 0; i < doc["space"]["k"].size(); ++i) {
    const auto v = get_u64(doc["space"]["k"][i], index("space.k", i));
    if (v == 0) bad(index("space.k", i), "must be >= 1");
    c.k.push_back(static_cast<std::size_t>(v));
  }
  const std::size_t d = c.k.size();

  if (!doc.contains("simple")) bad("simple", "missing");
  c.simple = parse_simple(doc["simple"], d);
  if (!doc.contains("clustering")) bad("clustering", "missing");
  c.clustering = parse_clustering(doc["clustering"], d);

  if (doc.contains("suites")) {
    const json& s = doc["suites"];
    if (!s.is_array()) bad("suites", "expected an array of suite names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string name = get_string(s[i], index("suites", i));
      const Suite suite = with_path(index("suites", i), [&] { return parse_suite(name); });
      if (!c.has(suite)) c.suites.push_back(suite);
    }
  }
  std::sort(c.suites.begin(), c.suites.end());
  if (!c.has(Suite::eval)) c.suites.insert(std::upper_bound(c.suites.begin(), c.suites.end(), Suite::eval), Suite::eval);
  // gap needs the dual value
  if (c.has(Suite::gap) && !c.has(Suite::dual)) {
    c.suites.insert(std::lower_bound(c.suites.begin(), c.suites.end(), Suite::dual), Suite::dual);
  }

  if (doc.contains("seed")) c.seed = get_u64(doc["seed"], "seed");
  if (doc.contains("trials")) c.trials = get_u64(doc["trials"], "trials");
  if (doc.contains("weak_duality_trials")) c.weak_duality_trials = get_u64(doc["weak_duality_trials"], "weak_duality_trials");

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    allow_keys(t, "tolerances", {"axioms", "round-trip", "gap"});
    if (t.contains("axioms")) c.tolerances.axioms = get_number(t["axioms"], "tolerances.axioms");
    if (t.contains("round-trip")) c.tolerances.round_trip = get_number(t["round-trip"], "tolerances.round-trip");
    if (t.contains("gap")) c.tolerances.gap = get_number(t["gap"], "tolerances.gap");
    if (c.tolerances.axioms < 0.0) bad("tolerances.axioms", "must be >= 0");
    if (c.tolerances.round_trip < 0.0) bad("tolerances.round-trip", "must be >= 0");
    if (c.tolerances.gap < 0.0) bad("tolerances.gap", "must be >= 0");
  }
  if (doc.contains("grids")) parse_grids(doc["grids"], c);
  c.dual.seed = c.seed;
  if (doc.contains("bisection")) parse_bisection(doc["bisection"], c.bisection);

  if (doc.contains("inputs")) {
    const json& in = doc["inputs"];
    if (!in.is_array()) bad("inputs", "expected an array of {path, format}");
    for (std::size_t i = 0; i < in.size(); ++i) {
      const std::string path = index("inputs", i);
      allow_keys(in[i], path, {"path", "format"});
      if (!in[i].contains("path")) bad(join(path, "path"), "missing");
      InputSpec spec;
      spec.label = get_string(in[i]["path"], join(path, "path"));
      spec.path = std::filesystem::path(spec.label);
      if (spec.path.is_relative() && !base_dir.empty()) spec.path = base_dir / spec.path;
      if (in[i].contains("format")) {
        const std::string f = get_string(in[i]["format"], join(path, "format"));
        spec.format = with_path(join(path, "format"), [&] { return parse_input_format(f); });
      } else {
        spec.format = spec.path.extension() == ".json" ? InputFormat::json : InputFormat::csv;
      }
      c.inputs.push_back(std::move(spec));
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text_file(path), path.parent_path());
}

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2); }

SimpleRiskStatistic build_simple(const RunConfig& c) {
  switch (c.simple.family) {
    case SimpleFamily::weighted_sum: return SimpleRiskStatistic::weighted_sum(c.simple.weights);
    case SimpleFamily::max: return SimpleRiskStatistic::max(c.k.size());
    case SimpleFamily::log_sum_exp: return SimpleRiskStatistic::log_sum_exp(c.k.size(), c.simple.temperature);
    case SimpleFamily::custom: break;
  }
  throw ConfigError("simple.family: custom statistics cannot be configured from a file");
}

ClusteringFunction build_clustering(const RunConfig& c) {
  ScenarioSpace space(c.k);
  switch (c.clustering.family) {
    case ClusteringFamily::neg_average: return ClusteringFunction::neg_average(space, c.clustering.gamma);
    case ClusteringFamily::expm1_link: return ClusteringFunction::expm1_link(space, c.clustering.gamma);
    case ClusteringFamily::custom: break;
  }
  throw ConfigError("clustering.family: custom clusterings cannot be configured from a file");
}

ComplexRiskStatistic build_statistic(const RunConfig& c) { return compose(build_simple(c), build_clustering(c)); }

std::vector<LabelledInput> load_inputs(const RunConfig& config) {
  const ScenarioSpace space(config.k);
  std::vector<LabelledInput> out;
  for (std::size_t i = 0; i < config.inputs.size(); ++i) {
    const auto& spec = config.inputs[i];
    auto vectors = load_scenarios(spec.path, spec.format);
    for (std::size_t row = 0; row < vectors.size(); ++row) {
      if (!(vectors[row].space() == space)) {
        throw ConfigError("inputs[" + std::to_string(i) + "] (" + spec.label +
                          "): shape does not match space.k");
      }
      out.push_back({std::move(vectors[row]), spec.label + ":" + std::to_string(row + 1)});
    }
  }
  return out;
}

std::uint64_t RunReport::violations() const {
  std::uint64_t n = 0;
  for (const auto& a : axioms) n += a.report.violations;
  for (const auto& in : inputs) {
    if (in.weak_duality) n += in.weak_duality->violations;
  }
  return n;
}

std::size_t RunReport::gap_failures() const {
  return static_cast<std::size_t>(
      std::count_if(inputs.begin(), inputs.end(), [](const InputReport& in) { return !in.gap_within_tolerance; }));
}

int RunReport::exit_code() const { return violations() == 0 && gap_failures() == 0 ? 0 : 1; }

RunReport run(const RunConfig& config, const std::vector<LabelledInput>& inputs) {
  RunReport report;
  report.config = config;
  const ComplexRiskStatistic rho = build_statistic(config);
  const ScenarioSpace space(config.k);
  for (const auto& in : inputs) {
    if (!(in.vector.space() == space)) throw ShapeError(in.source + ": shape does not match space.k");
  }

  report.inputs.resize(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    report.inputs[i].index = i;
    report.inputs[i].source = inputs[i].source;
  }

  for (Suite suite : config.suites) {
    Stopwatch clock;
    switch (suite) {
      case Suite::axioms: {
        TrialSpec spec{config.trials, config.seed, config.tolerances.axioms};
        auto add = [&](const char* subject, AxiomReport r) { report.axioms.push_back({subject, r}); };
        for (Check c : {Check::A1, Check::A2}) add("simple", check_axiom(rho.simple(), c, spec));
        for (Check c : {Check::B1, Check::B2, Check::B3}) add("clustering", check_axiom(rho.clustering(), c, spec));
        for (Check c : {Check::C1, Check::C2, Check::C3}) add("complex", check_axiom(rho, c, spec, config.bisection));
        add("complex", check_level_set_constancy(rho, spec));
        TrialSpec round_trip = spec;
        round_trip.tolerance = config.tolerances.round_trip;
        add("complex", check_round_trip(rho, round_trip, config.bisection));
        const std::pair<SetProperty, Check> simple_sets[] = {{SetProperty::f_monotone, Check::simple_set_f},
                                                             {SetProperty::b_monotone, Check::simple_set_b},
                                                             {SetProperty::convex, Check::simple_set_convex}};
        for (auto [p, c] : simple_sets) {
          auto r = check_set_monotonicity(rho.simple(), p, spec);
          r.check = c;
          add("acceptance-simple", r);
        }
        const std::pair<SetProperty, Check> clustering_sets[] = {{SetProperty::f_monotone, Check::clustering_set_f},
                                                                 {SetProperty::b_monotone, Check::clustering_set_b},
                                                                 {SetProperty::convex, Check::clustering_set_convex}};
        for (auto [p, c] : clustering_sets) {
          auto r = check_set_monotonicity(rho.clustering(), p, spec);
          r.check = c;
          add("acceptance-clustering", r);
        }
        break;
      }
      case Suite::eval:
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          report.inputs[i].clustering_value = rho.clustering().evaluate(inputs[i].vector);
          report.inputs[i].rho = eval_complex(rho, inputs[i].vector);
        }
        break;
      case Suite::primal:
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          try {
            report.inputs[i].primal = primal_evaluate(rho, inputs[i].vector, config.primal);
          } catch (const std::invalid_argument& e) {
            report.inputs[i].primal_error = e.what();
          }
        }
        break;
      case Suite::dual:
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          report.inputs[i].dual = dual_evaluate(rho, inputs[i].vector, config.dual);
          TrialSpec spec{config.weak_duality_trials, config.seed + i, config.tolerances.axioms};
          report.inputs[i].weak_duality = weak_duality_check(rho, inputs[i].vector, spec);
        }
        break;
      case Suite::gap:
        for (auto& in : report.inputs) {
          GapResult g;
          g.primal = in.rho;
          g.dual = *in.dual;
          g.raw = in.rho.is_infinite() || g.dual.value == -std::numeric_limits<double>::infinity()
                      ? std::numeric_limits<double>::infinity()
                      : in.rho.raw() - g.dual.value;
          g.gap = std::max(0.0, g.raw);
          in.gap_within_tolerance = g.gap <= config.tolerances.gap;
          in.gap = std::move(g);
        }
        break;
      case Suite::decompose: {
        const ReconstructedClustering phi_hat = reconstruct_clustering(rho);
        for (std::size_t i = 0; i < inputs.size(); ++i) {
          DecomposeOutcome out;
          try {
            out.clustering = phi_hat(inputs[i].vector);
            out.simple = reconstruct_simple(rho, *out.clustering, config.bisection);
            const ExtendedReal r = report.inputs[i].rho;
            out.error = r.is_infinite() || out.simple->is_infinite()
                            ? (r == *out.simple ? 0.0 : std::numeric_limits<double>::infinity())
                            : std::fabs(out.simple->raw() - r.raw());
          } catch (const RangeError& e) {
            out.simple.reset();
            out.diagnostic = e.what();
          } catch (const SectionUnavailableError& e) {
            out.simple.reset();
            out.diagnostic = e.what();
          }
          report.inputs[i].decompose = std::move(out);
        }
        break;
      }
    }
    report.timings.push_back({std::string(to_string(suite)), clock.seconds()});
  }
  return report;
}

std::string report_to_json(const RunReport& report, const ReportOptions& options) {
  ojson out;
  out["tool"] = "cxrisk";
  out["versions"] = {{"cxrisk", std::string(kVersion)},
                     {"compiler", std::string(__VERSION__)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  out["config"] = config_json(report.config);
  out["axioms"] = ojson::array();
  for (const auto& a : report.axioms) out["axioms"].push_back(axiom_json(a.subject, a.report));
  out["inputs"] = ojson::array();
  for (const auto& in : report.inputs) out["inputs"].push_back(input_json(in));
  out["summary"] = {{"violations", report.violations()},
                    {"gap_failures", report.gap_failures()},
                    {"exit_code", report.exit_code()}};
  if (options.timings) {
    out["timings"] = ojson::array();
    for (const auto& t : report.timings) out["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  }
  return out.dump(2) + "\n";
}

std::string report_to_table(const RunReport& report, const ReportOptions& options) {
  std::ostringstream out;
  const auto& c = report.config;
  out << "statistic: " << to_string(c.simple.family) << " o " << to_string(c.clustering.family) << "  k=(";
  for (std::size_t i = 0; i < c.k.size(); ++i) out << (i ? "," : "") << c.k[i];
  out << ")  seed=" << c.seed << "\n\n";

  if (!report.axioms.empty()) {
    std::vector<std::vector<std::string>> rows{
        {"check", "subject", "trials", "violations", "skipped", "worst_margin", "status"}};
    for (const auto& a : report.axioms) {
      const auto& r = a.report;
      rows.push_back({std::string(to_string(r.check)), a.subject, std::to_string(r.trials),
                      std::to_string(r.violations), std::to_string(r.skipped), fmt(r.worst_margin),
                      r.passed() ? "pass" : "FAIL"});
    }
    out << render_table(rows) << "\n";
  }

  if (!report.inputs.empty()) {
    std::vector<std::string> header{"input", "source", "rho"};
    if (c.has(Suite::primal)) header.insert(header.end(), {"primal_num", "primal_gap"});
    if (c.has(Suite::dual)) header.insert(header.end(), {"dual", "weak_dual"});
    if (c.has(Suite::gap)) header.insert(header.end(), {"gap", "status"});
    if (c.has(Suite::decompose)) header.insert(header.end(), {"rho_hat", "error"});
    std::vector<std::vector<std::string>> rows{header};
    for (const auto& in : report.inputs) {
      std::vector<std::string> row{std::to_string(in.index), in.source, fmt(in.rho.raw())};
      if (c.has(Suite::primal)) {
        if (in.primal) {
          row.insert(row.end(), {fmt(in.primal->numeric.raw()), fmt(in.primal->gap)});
        } else {
          row.insert(row.end(), {"error", "-"});
        }
      }
      if (c.has(Suite::dual)) {
        row.push_back(fmt(in.dual->value));
        row.push_back(in.weak_duality->passed() ? "pass" : "FAIL");
      }
      if (c.has(Suite::gap)) {
        row.push_back(fmt(in.gap->gap));
        row.push_back(in.gap_within_tolerance ? "pass" : "FAIL");
      }
      if (c.has(Suite::decompose)) {
        if (in.decompose->simple) {
          row.insert(row.end(), {fmt(in.decompose->simple->raw()), fmt(in.decompose->error)});
        } else {
          row.insert(row.end(), {"n/a", "-"});
        }
      }
      rows.push_back(std::move(row));
    }
    out << render_table(rows) << "\n";
  }

  if (options.timings) {
    for (const auto& t : report.timings) out << "time " << t.stage << ": " << fmt(t.seconds) << " s\n";
  }
  out << "violations: " << report.violations() << "  gap failures: " << report.gap_failures()
      << "  exit: " << report.exit_code() << "\n";
  return out.str();
}

}  // namespace cxrisk
