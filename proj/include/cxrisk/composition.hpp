#pragma once

#include <cstddef>
#include <vector>

#include "cxrisk/axiom_report.hpp"
#include "cxrisk/catalog.hpp"

namespace cxrisk {

enum class Provenance { composed, reconstructed };

/// rho = simple o clustering on the clustering's scenario space.
class ComplexRiskStatistic {
 public:
  /// Throws ShapeError when simple.dimension() != clustering.space().components().
  ComplexRiskStatistic(ClusteringFunction clustering, SimpleRiskStatistic simple,
                       Provenance provenance = Provenance::composed);

  const ClusteringFunction& clustering() const { return clustering_; }
  const SimpleRiskStatistic& simple() const { return simple_; }
  Provenance provenance() const { return provenance_; }
  const ScenarioSpace& space() const { return clustering_.space(); }

  /// Unchecked evaluation.
  ExtendedReal evaluate(const ScenarioVector& x) const {
    return simple_.evaluate(clustering_.evaluate(x).values());
  }

 private:
  ClusteringFunction clustering_;
  SimpleRiskStatistic simple_;
  Provenance provenance_;
};

ComplexRiskStatistic compose(const SimpleRiskStatistic& r, const ClusteringFunction& f);

/// simple(clustering(X)). Throws ShapeError on space mismatch.
ExtendedReal eval_complex(const ComplexRiskStatistic& rho, const ScenarioVector& x);

/// Bracketing bisection used to invert rho along constant-block rays.
struct BisectionConfig {
  double tolerance = 1e-10;          ///< on |rho(ray(t)) - target|
  double initial_half_width = 1.0;   ///< first bracket is [-w, w], then doubled
  double max_magnitude = 0x1p60;     ///< bracket cap; beyond it the target is not in the image
  int max_iterations = 500;
};

/// The clustering rebuilt from rho alone: X -> (rho(X_[k_1]), ..., rho(X_[k_d])).
class ReconstructedClustering {
 public:
  explicit ReconstructedClustering(ComplexRiskStatistic rho) : rho_(std::move(rho)) {}

  /// Throws RangeError if some rho(X_[k_i]) is +inf.
  ComponentVector operator()(const ScenarioVector& x) const;

  const ComplexRiskStatistic& statistic() const { return rho_; }

 private:
  ComplexRiskStatistic rho_;
};

ReconstructedClustering reconstruct_clustering(const ComplexRiskStatistic& rho);

struct RaySolution {
  double t = 0.0;
  double residual = 0.0;
};

/// Solves rho((t * 1)_[k_i]) == target by bracket doubling and bisection.
/// Throws NotInImageError when the bracket passes max_magnitude and
/// SectionUnavailableError when the ray is flat or non-monotone.
RaySolution solve_block_ray(const ComplexRiskStatistic& rho, std::size_t i, double target,
                            const BisectionConfig& config = {});

/// Constant-block X with reconstructed-clustering(X) == x (to the bisection tolerance).
ScenarioVector reconstruct_preimage(const ComplexRiskStatistic& rho, const ComponentVector& x,
                                    const BisectionConfig& config = {});

/// The simple statistic rebuilt from rho: rho(X) for the constant-block
/// preimage X of x. Errors as for solve_block_ray.
ExtendedReal reconstruct_simple(const ComplexRiskStatistic& rho, const ComponentVector& x,
                                const BisectionConfig& config = {});

/// Both reconstructed pieces packed as a complex statistic with provenance
/// `reconstructed`. Outside the image, the rebuilt simple statistic is +inf.
ComplexRiskStatistic decompose(const ComplexRiskStatistic& rho, const BisectionConfig& config = {});

/// Z with constant blocks such that for every i
///   rho(Z_[k_i]) == lambda rho(X_[k_i]) + (1 - lambda) rho(Y_[k_i])
/// within `residual_tolerance`. Throws SectionUnavailableError when that
/// cannot be certified, plus the errors of solve_block_ray.
ScenarioVector construct_c3_witness(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                                    const ScenarioVector& y, double lambda,
                                    const BisectionConfig& config = {},
                                    double residual_tolerance = 1e-9);

/// Property suites. Inputs are uniform in [-5, 5], lambda uniform in [0, 1];
/// trial t draws from Rng::for_trial(seed, t). Throws std::invalid_argument
/// when the check does not belong to the subject's family.
AxiomReport check_axiom(const SimpleRiskStatistic& r, Check axiom, const TrialSpec& spec);
AxiomReport check_axiom(const ClusteringFunction& f, Check axiom, const TrialSpec& spec);
AxiomReport check_axiom(const ComplexRiskStatistic& rho, Check axiom, const TrialSpec& spec,
                        const BisectionConfig& config = {});

/// |rho(X) - rho(X')| for X' a within-block redistribution of X.
AxiomReport check_level_set_constancy(const ComplexRiskStatistic& rho, const TrialSpec& spec);

/// |rho(X) - reconstruct_simple(rho, reconstruct_clustering(rho)(X))|.
/// Trials where no preimage can be built count as skipped.
AxiomReport check_round_trip(const ComplexRiskStatistic& rho, const TrialSpec& spec,
                             const BisectionConfig& config = {});

/// Margin of `lhs <= rhs` in extended reals: lhs - rhs, with inf <= inf
/// treated as satisfied.
double excess(ExtendedReal lhs, ExtendedReal rhs);

}  // namespace cxrisk
