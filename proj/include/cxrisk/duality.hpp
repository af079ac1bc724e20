#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxrisk/acceptance.hpp"
#include "cxrisk/axiom_report.hpp"
#include "cxrisk/composition.hpp"

namespace cxrisk {

/// Dual variable (yhat, Xhat) with Xhat canonicalised to its block sums:
/// <Xhat, Y> only sees sum_j Xhat^i_j, so nothing is lost.
struct DualPair {
  ComponentVector yhat;
  ComponentVector xhat_block_sums;

  static DualPair from_scenario(ComponentVector yhat, const ScenarioVector& xhat) {
    return {std::move(yhat), block_sum(xhat)};
  }
};

enum class PenaltyMethod { closed_form, grid };

struct PenaltyOptions {
  PenaltyMethod method = PenaltyMethod::closed_form;
  double block_sum_range = 50.0;  ///< grid route searches block sums in [-G, G]
  double block_sum_step = 0.01;
};

/// alpha(yhat, Xhat) = sup over (c, x) in A_rho and (y, Y) in A_phi of
/// -c - <yhat, y - x> + <Xhat, Y>, split as
///   simple_part     = I'_{A_rho}(-1, yhat)    = rho*(yhat)
///   clustering_part = I'_{A_phi}(-yhat, Xhat) = sup_Y <Xhat, Y> - <yhat, phi(Y)>
struct PenaltyValue {
  ExtendedReal value;
  PenaltyMethod method = PenaltyMethod::closed_form;
  ExtendedReal simple_part;
  ExtendedReal clustering_part;
  std::string unbounded;  ///< names the direction when value is +inf

  bool finite() const { return value.is_finite(); }
};

/// Throws UnsupportedError for statistics without a conjugate.
PenaltyValue penalty_alpha(const ComplexRiskStatistic& rho, const DualPair& pair,
                           const PenaltyOptions& options = {});

/// <Xhat, X> - alpha, or -inf when alpha is +inf.
double dual_objective(const ComplexRiskStatistic& rho, const DualPair& pair, const ScenarioVector& x,
                      const PenaltyOptions& options = {});

/// The block sums paired with yhat that make <Xhat, .> tangent to
/// <yhat, phi(.)> at X: Shat_i = yhat_i gamma_i h'(s_i / k_i) / k_i.
ComponentVector matching_block_sums(const ClusteringFunction& f, const ComponentVector& yhat,
                                    const ScenarioVector& x);

struct DualSearch {
  double ymax = 4.0;
  double step = 0.05;
  bool include_analytic = true;
  std::size_t max_grid_points = 2'000'000;  ///< larger grids are subsampled (seeded)
  std::uint64_t seed = 0;
  PenaltyOptions penalty;
};

struct DualResult {
  double value = 0.0;  ///< -inf when no candidate has finite alpha
  std::optional<DualPair> argmax;
  std::optional<PenaltyValue> alpha;
  std::size_t candidates = 0;
  std::size_t finite_candidates = 0;
  bool subsampled = false;
  std::string diagnostic;
};

/// sup over candidate dual pairs of <Xhat, X> - alpha: the analytic
/// candidate (a subgradient of rho at phi(X)) plus a grid over yhat in
/// [0, ymax]^d, each with matching block sums. Ties go to the
/// lexicographically smallest (yhat, Shat).
DualResult dual_evaluate(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                         const DualSearch& search = {});

/// Draws dual pairs until `spec.trials` of them have finite alpha and checks
/// <Xhat, X> - alpha <= rho(X) + tolerance for each. Infinite-alpha draws are
/// counted as skipped.
AxiomReport weak_duality_check(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                               const TrialSpec& spec);

struct GapResult {
  double gap = 0.0;  ///< max(raw, 0)
  double raw = 0.0;  ///< primal analytic - dual value
  ExtendedReal primal;
  DualResult dual;
};

GapResult duality_gap(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                      const DualSearch& search = {});

/// Indicator functions of the acceptance sets and their conjugates.
namespace indicator {

/// 0 on the set, +inf off it.
ExtendedReal simple_set(const SimpleRiskStatistic& r, double c, const ComponentVector& x);
ExtendedReal clustering_set(const ClusteringFunction& f, const ComponentVector& y, const ScenarioVector& x);

/// Support function sup over (c', x') in A_rho of chat c' + <xhat, x'>.
ExtendedReal simple_support(const SimpleRiskStatistic& r, double chat, const ComponentVector& xhat);

/// Support function sup over (y', Y') in A_phi of <yhat, y'> + <Xhat, Y'>,
/// with Xhat given by its block sums.
ExtendedReal clustering_support(const ClusteringFunction& f, const ComponentVector& yhat,
                                const ComponentVector& xhat_block_sums,
                                const PenaltyOptions& options = {});

struct BiconjugateSearch {
  int min_scale_log2 = -10;
  int max_scale_log2 = 30;
  std::size_t simplex_samples = 256;
  std::uint64_t seed = 0;
};

/// Numeric I''_{A_rho}(c, x): sup over dual directions (-t, t yhat) of
/// t (<yhat, x> - c - rho*(yhat)), t over powers of two, plus the origin.
/// Returns 0 on the set and a value growing with 2^max_scale_log2 off it.
double simple_biconjugate(const SimpleRiskStatistic& r, double c, const ComponentVector& x,
                          const BiconjugateSearch& search = {});

}  // namespace indicator

}  // namespace cxrisk
