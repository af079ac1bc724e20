#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cxrisk/extended_real.hpp"
#include "cxrisk/scenario.hpp"

namespace cxrisk {

enum class SimpleFamily { weighted_sum, max, log_sum_exp, custom };
enum class ClusteringFamily { neg_average, expm1_link, custom };

/// Where the convex conjugate of a catalog statistic is finite.
enum class ConjugateDomain {
  point,    ///< {w} (weighted-sum)
  simplex,  ///< probability simplex (max, log-sum-exp)
  unknown,  ///< custom statistics carry no conjugate
};

/// Tolerance on sum(yhat) == 1 when deciding simplex membership. Grid points
/// such as 12 * 0.01 + 88 * 0.01 miss 1.0 by an ulp.
inline constexpr double kSimplexTolerance = 1e-12;

std::string_view to_string(SimpleFamily f);
std::string_view to_string(ClusteringFamily f);
/// Accepts the hyphenated config names ("weighted-sum", "log-sum-exp", ...).
SimpleFamily parse_simple_family(std::string_view name);
ClusteringFamily parse_clustering_family(std::string_view name);

/// Monotone convex functional R^d -> R u {+inf} from a parametric family.
///
///  * weighted-sum:  <w, x>, w >= 0
///  * max:           max_i x_i
///  * log-sum-exp:   tau * ln(sum_i exp(x_i / tau)), tau > 0
///  * custom:        user callable; evaluable and fuzzable but without a
///                   conjugate, so the dual machinery rejects it.
class SimpleRiskStatistic {
 public:
  using Evaluator = std::function<ExtendedReal(std::span<const double>)>;

  static SimpleRiskStatistic weighted_sum(std::vector<double> weights);
  static SimpleRiskStatistic max(std::size_t d);
  static SimpleRiskStatistic log_sum_exp(std::size_t d, double temperature);
  static SimpleRiskStatistic custom(std::size_t d, std::string name, Evaluator f);

  SimpleFamily family() const { return family_; }
  std::size_t dimension() const { return d_; }
  std::span<const double> weights() const { return weights_; }
  double temperature() const { return temperature_; }
  const std::string& name() const { return name_; }
  bool has_conjugate() const { return family_ != SimpleFamily::custom; }
  ConjugateDomain conjugate_domain() const;

  /// Unchecked evaluation; callers guarantee x.size() == dimension().
  ExtendedReal evaluate(std::span<const double> x) const;

 private:
  SimpleRiskStatistic(SimpleFamily family, std::size_t d) : family_(family), d_(d) {}

  SimpleFamily family_;
  std::size_t d_;
  std::vector<double> weights_;
  double temperature_ = 1.0;
  std::string name_;
  Evaluator custom_;
};

/// Monotone convex map from the scenario space to R^d:
///   phi_i(X) = gamma_i * h(s_i / k_i),  s = block_sum(X),
/// with link h(u) = -u (neg-average) or h(u) = exp(-u) - 1 (expm1-link).
/// Both links are convex, strictly decreasing and vanish at 0, which is what
/// lets the stored witness (all-ones weighted sum) certify correlation.
class ClusteringFunction {
 public:
  using Evaluator = std::function<ComponentVector(const ScenarioVector&)>;

  static ClusteringFunction neg_average(ScenarioSpace space, std::vector<double> gamma);
  static ClusteringFunction expm1_link(ScenarioSpace space, std::vector<double> gamma);
  /// Custom map; `witness` defaults to the all-ones weighted sum.
  static ClusteringFunction custom(ScenarioSpace space, std::string name, Evaluator f);
  static ClusteringFunction custom(ScenarioSpace space, std::string name, Evaluator f,
                                   SimpleRiskStatistic witness);

  ClusteringFamily family() const { return family_; }
  const ScenarioSpace& space() const { return space_; }
  std::span<const double> gamma() const { return gamma_; }
  const SimpleRiskStatistic& witness() const { return witness_; }
  const std::string& name() const { return name_; }
  bool has_link() const { return family_ != ClusteringFamily::custom; }

  // Link h and friends; throw UnsupportedError for custom maps.
  double link(double u) const;
  double link_derivative(double u) const;
  double link_inverse(double v) const;
  /// h maps R onto (link_lower_bound(), +inf).
  double link_lower_bound() const;

  /// Unchecked evaluation; callers guarantee matching space.
  ComponentVector evaluate(const ScenarioVector& x) const;

 private:
  ClusteringFunction(ClusteringFamily family, ScenarioSpace space, SimpleRiskStatistic witness)
      : family_(family), space_(std::move(space)), witness_(std::move(witness)) {}

  ClusteringFamily family_;
  ScenarioSpace space_;
  std::vector<double> gamma_;
  SimpleRiskStatistic witness_;
  std::string name_;
  Evaluator custom_;
};

/// rho(x). Throws ShapeError on dimension mismatch.
ExtendedReal eval_simple(const SimpleRiskStatistic& r, const ComponentVector& x);

/// phi(X). Throws ShapeError on space mismatch.
ComponentVector eval_clustering(const ClusteringFunction& f, const ScenarioVector& x);

/// Closed-form conjugate sup_x { <yhat, x> - rho(x) }:
///   weighted-sum: 0 iff yhat == w exactly, else +inf
///   max:          0 on the simplex, else +inf
///   log-sum-exp:  tau * sum yhat_i ln yhat_i on the simplex, else +inf
/// Throws UnsupportedError for custom statistics.
ExtendedReal conjugate_simple(const SimpleRiskStatistic& r, const ComponentVector& yhat);

/// A maximizer yhat of <yhat, x> - rho*(yhat), i.e. a subgradient of rho at x.
/// For max, ties pick the lowest index.
ComponentVector conjugate_maximizer(const SimpleRiskStatistic& r, const ComponentVector& x);

/// Constant-block preimage X with eval_clustering(f, X) == x.
/// Throws RangeError naming the component when x_i / gamma_i is outside the
/// link's image.
ScenarioVector section_clustering(const ClusteringFunction& f, const ComponentVector& x);

}  // namespace cxrisk
