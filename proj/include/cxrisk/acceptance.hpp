#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cxrisk/axiom_report.hpp"
#include "cxrisk/composition.hpp"

namespace cxrisk {

/// (c, x) in the acceptance set of r, i.e. r(x) <= c. +inf <= c is false.
bool accepts_simple(const SimpleRiskStatistic& r, double c, const ComponentVector& x);

/// (y, X) in the acceptance set of f, i.e. f(X) <= y componentwise.
bool accepts_clustering(const ClusteringFunction& f, const ComponentVector& y, const ScenarioVector& x);

enum class SetProperty {
  f_monotone,  ///< (m, n) in A and n >= q  =>  (m, q) in A
  b_monotone,  ///< (m, n) in A and p >= m  =>  (p, n) in A
  convex,
};

/// Samples members of the acceptance set and order-related partners and
/// checks that membership is preserved (margin = violation of the defining
/// inequality). For the clustering set the second-slot order is the scenario
/// preorder.
AxiomReport check_set_monotonicity(const SimpleRiskStatistic& r, SetProperty property,
                                   const TrialSpec& spec);
AxiomReport check_set_monotonicity(const ClusteringFunction& f, SetProperty property,
                                   const TrialSpec& spec);

/// Lattice for the numeric route of the primal representation. Points are
/// integer multiples of `step`. Without explicit bounds the box is
/// [phi(X), phi(X) + extent] in every component.
struct PrimalGrid {
  double step = 0.05;
  double extent = 5.0;
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
  std::size_t max_points = 50'000'000;
};

struct PrimalResult {
  ExtendedReal analytic;   ///< rho(phi(X)); equals eval_complex
  ExtendedReal numeric;    ///< min of rho(x) over grid points x >= phi(X); +inf if none
  double gap = 0.0;        ///< numeric - analytic
  ComponentVector clustering_value;
  std::vector<double> numeric_argmin;
  std::vector<double> box_lower;
  std::vector<double> box_upper;
  double step = 0.0;
  std::size_t points = 0;
  std::vector<std::string> warnings;
};

/// inf { c : (c, x) in A_rho, (x, X) in A_phi } with inf of the empty set = +inf,
/// computed analytically and, independently, by grid search over x.
/// Throws std::invalid_argument when the grid exceeds max_points.
PrimalResult primal_evaluate(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                             const PrimalGrid& grid = {});

}  // namespace cxrisk
