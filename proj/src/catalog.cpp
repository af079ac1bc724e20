#include "cxrisk/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "cxrisk/errors.hpp"

namespace cxrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument(std::string(what) + "[" + std::to_string(i) +
                                  "] must be finite and > 0");
    }
  }
}

bool on_simplex(std::span<const double> y) {
  double total = 0.0;
  for (double v : y) {
    if (v < 0.0) return false;
    total += v;
  }
  return std::fabs(total - 1.0) <= kSimplexTolerance;
}

double stable_log_sum_exp(std::span<const double> x, double tau) {
  const double m = *std::max_element(x.begin(), x.end());
  double acc = 0.0;
  for (double v : x) acc += std::exp((v - m) / tau);
  return m + tau * std::log(acc);
}

}  // namespace

std::string_view to_string(SimpleFamily f) {
  switch (f) {
    case SimpleFamily::weighted_sum: return "weighted-sum";
    case SimpleFamily::max: return "max";
    case SimpleFamily::log_sum_exp: return "log-sum-exp";
    case SimpleFamily::custom: return "custom";
  }
  return "?";
}

std::string_view to_string(ClusteringFamily f) {
  switch (f) {
    case ClusteringFamily::neg_average: return "neg-average";
    case ClusteringFamily::expm1_link: return "expm1-link";
    case ClusteringFamily::custom: return "custom";
  }
  return "?";
}

SimpleFamily parse_simple_family(std::string_view name) {
  if (name == "weighted-sum") return SimpleFamily::weighted_sum;
  if (name == "max") return SimpleFamily::max;
  if (name == "log-sum-exp") return SimpleFamily::log_sum_exp;
  throw ConfigError("unknown simple statistic family '" + std::string(name) +
                    "' (expected weighted-sum, max or log-sum-exp)");
}

ClusteringFamily parse_clustering_family(std::string_view name) {
  if (name == "neg-average") return ClusteringFamily::neg_average;
  if (name == "expm1-link") return ClusteringFamily::expm1_link;
  throw ConfigError("unknown clustering family '" + std::string(name) +
                    "' (expected neg-average or expm1-link)");
}

// ---------------------------------------------------------------------------
// SimpleRiskStatistic

SimpleRiskStatistic SimpleRiskStatistic::weighted_sum(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("weighted-sum: need at least one weight");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("weighted-sum: weight[" + std::to_string(i) +
                                  "] must be finite and >= 0");
    }
  }
  SimpleRiskStatistic r(SimpleFamily::weighted_sum, weights.size());
  r.weights_ = std::move(weights);
  r.name_ = "weighted-sum";
  return r;
}

SimpleRiskStatistic SimpleRiskStatistic::max(std::size_t d) {
  if (d == 0) throw std::invalid_argument("max: dimension must be >= 1");
  SimpleRiskStatistic r(SimpleFamily::max, d);
  r.name_ = "max";
  return r;
}

SimpleRiskStatistic SimpleRiskStatistic::log_sum_exp(std::size_t d, double temperature) {
  if (d == 0) throw std::invalid_argument("log-sum-exp: dimension must be >= 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("log-sum-exp: temperature must be finite and > 0");
  }
  SimpleRiskStatistic r(SimpleFamily::log_sum_exp, d);
  r.temperature_ = temperature;
  r.name_ = "log-sum-exp";
  return r;
}

SimpleRiskStatistic SimpleRiskStatistic::custom(std::size_t d, std::string name, Evaluator f) {
  if (d == 0) throw std::invalid_argument("custom: dimension must be >= 1");
  if (!f) throw std::invalid_argument("custom: evaluator is empty");
  SimpleRiskStatistic r(SimpleFamily::custom, d);
  r.name_ = std::move(name);
  r.custom_ = std::move(f);
  return r;
}

ConjugateDomain SimpleRiskStatistic::conjugate_domain() const {
  switch (family_) {
    case SimpleFamily::weighted_sum: return ConjugateDomain::point;
    case SimpleFamily::max:
    case SimpleFamily::log_sum_exp: return ConjugateDomain::simplex;
    case SimpleFamily::custom: break;
  }
  return ConjugateDomain::unknown;
}

ExtendedReal SimpleRiskStatistic::evaluate(std::span<const double> x) const {
  switch (family_) {
    case SimpleFamily::weighted_sum: {
      double acc = 0.0;
      for (std::size_t i = 0; i < d_; ++i) acc += weights_[i] * x[i];
      return acc;
    }
    case SimpleFamily::max: return *std::max_element(x.begin(), x.end());
    case SimpleFamily::log_sum_exp: return stable_log_sum_exp(x, temperature_);
    case SimpleFamily::custom: return custom_(x);
  }
  return ExtendedReal::infinity();
}

ExtendedReal eval_simple(const SimpleRiskStatistic& r, const ComponentVector& x) {
  require_dimension(r.dimension(), x.size(), "eval_simple");
  return r.evaluate(x.values());
}

ExtendedReal conjugate_simple(const SimpleRiskStatistic& r, const ComponentVector& yhat) {
  require_dimension(r.dimension(), yhat.size(), "conjugate_simple");
  switch (r.family()) {
    case SimpleFamily::weighted_sum:
      return std::ranges::equal(yhat.values(), r.weights()) ? ExtendedReal(0.0)
                                                            : ExtendedReal::infinity();
    case SimpleFamily::max:
      return on_simplex(yhat.values()) ? ExtendedReal(0.0) : ExtendedReal::infinity();
    case SimpleFamily::log_sum_exp: {
      if (!on_simplex(yhat.values())) return ExtendedReal::infinity();
      double acc = 0.0;
      for (double v : yhat.values()) {
        if (v > 0.0) acc += v * std::log(v);
      }
      return r.temperature() * acc;
    }
    case SimpleFamily::custom: break;
  }
  throw UnsupportedError("conjugate_simple: statistic '" + r.name() + "' has no closed-form conjugate");
}

ComponentVector conjugate_maximizer(const SimpleRiskStatistic& r, const ComponentVector& x) {
  require_dimension(r.dimension(), x.size(), "conjugate_maximizer");
  const std::size_t d = r.dimension();
  switch (r.family()) {
    case SimpleFamily::weighted_sum:
      return ComponentVector(std::vector<double>(r.weights().begin(), r.weights().end()));
    case SimpleFamily::max: {
      std::vector<double> y(d, 0.0);
      const auto it = std::max_element(x.values().begin(), x.values().end());
      y[static_cast<std::size_t>(it - x.values().begin())] = 1.0;
      return ComponentVector(std::move(y));
    }
    case SimpleFamily::log_sum_exp: {
      const double tau = r.temperature();
      const double m = *std::max_element(x.values().begin(), x.values().end());
      std::vector<double> y(d);
      double total = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        y[i] = std::exp((x[i] - m) / tau);
        total += y[i];
      }
      for (double& v : y) v /= total;
      return ComponentVector(std::move(y));
    }
    case SimpleFamily::custom: break;
  }
  throw UnsupportedError("conjugate_maximizer: statistic '" + r.name() + "' has no closed-form conjugate");
}

// ---------------------------------------------------------------------------
// ClusteringFunction

ClusteringFunction ClusteringFunction::neg_average(ScenarioSpace space, std::vector<double> gamma) {
  require_dimension(space.components(), gamma.size(), "neg-average gamma");
  require_positive(gamma, "neg-average gamma");
  const std::size_t d = space.components();
  ClusteringFunction f(ClusteringFamily::neg_average, std::move(space),
                       SimpleRiskStatistic::weighted_sum(std::vector<double>(d, 1.0)));
  f.gamma_ = std::move(gamma);
  f.name_ = "neg-average";
  return f;
}

ClusteringFunction ClusteringFunction::expm1_link(ScenarioSpace space, std::vector<double> gamma) {
  require_dimension(space.components(), gamma.size(), "expm1-link gamma");
  require_positive(gamma, "expm1-link gamma");
  const std::size_t d = space.components();
  ClusteringFunction f(ClusteringFamily::expm1_link, std::move(space),
                       SimpleRiskStatistic::weighted_sum(std::vector<double>(d, 1.0)));
  f.gamma_ = std::move(gamma);
  f.name_ = "expm1-link";
  return f;
}

ClusteringFunction ClusteringFunction::custom(ScenarioSpace space, std::string name, Evaluator fn) {
  const std::size_t d = space.components();
  return custom(std::move(space), std::move(name), std::move(fn),
                SimpleRiskStatistic::weighted_sum(std::vector<double>(d, 1.0)));
}

ClusteringFunction ClusteringFunction::custom(ScenarioSpace space, std::string name, Evaluator fn,
                                              SimpleRiskStatistic witness) {
  if (!fn) throw std::invalid_argument("custom clustering: evaluator is empty");
  require_dimension(space.components(), witness.dimension(), "custom clustering witness");
  ClusteringFunction f(ClusteringFamily::custom, std::move(space), std::move(witness));
  f.name_ = std::move(name);
  f.custom_ = std::move(fn);
  return f;
}

double ClusteringFunction::link(double u) const {
  switch (family_) {
    case ClusteringFamily::neg_average: return -u;
    case ClusteringFamily::expm1_link: return std::expm1(-u);
    case ClusteringFamily::custom: break;
  }
  throw UnsupportedError("clustering '" + name_ + "' has no link function");
}

double ClusteringFunction::link_derivative(double u) const {
  switch (family_) {
    case ClusteringFamily::neg_average: return -1.0;
    case ClusteringFamily::expm1_link: return -std::exp(-u);
    case ClusteringFamily::custom: break;
  }
  throw UnsupportedError("clustering '" + name_ + "' has no link function");
}

double ClusteringFunction::link_inverse(double v) const {
  switch (family_) {
    case ClusteringFamily::neg_average: return -v;
    case ClusteringFamily::expm1_link:
      if (!(v > -1.0)) throw RangeError("expm1-link inverse: value must be > -1");
      return -std::log1p(v);
    case ClusteringFamily::custom: break;
  }
  throw UnsupportedError("clustering '" + name_ + "' has no link function");
}

double ClusteringFunction::link_lower_bound() const {
  switch (family_) {
    case ClusteringFamily::neg_average: return -kInf;
    case ClusteringFamily::expm1_link: return -1.0;
    case ClusteringFamily::custom: break;
  }
  throw UnsupportedError("clustering '" + name_ + "' has no link function");
}

ComponentVector ClusteringFunction::evaluate(const ScenarioVector& x) const {
  if (family_ == ClusteringFamily::custom) {
    auto out = custom_(x);
    require_dimension(space_.components(), out.size(), "custom clustering output");
    return out;
  }
  const auto s = block_sum(x);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gamma_[i] * link(s[i] / static_cast<double>(space_.scenarios(i)));
  }
  return ComponentVector(std::move(out));
}

ComponentVector eval_clustering(const ClusteringFunction& f, const ScenarioVector& x) {
  if (!(x.space() == f.space())) throw ShapeError("eval_clustering: scenario space mismatch");
  return f.evaluate(x);
}

ScenarioVector section_clustering(const ClusteringFunction& f, const ComponentVector& x) {
  require_dimension(f.space().components(), x.size(), "section_clustering");
  if (!f.has_link()) {
    throw UnsupportedError("section_clustering: clustering '" + f.name() + "' has no section");
  }
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x[i] / f.gamma()[i];
    if (!(u > f.link_lower_bound())) {
      throw RangeError("section_clustering: component " + std::to_string(i) + " value " +
                       std::to_string(x[i]) + " is outside the image of " + f.name());
    }
    t[i] = f.link_inverse(u);
  }
  return ScenarioVector::constant_blocks(f.space(), t);
}

}  // namespace cxrisk
