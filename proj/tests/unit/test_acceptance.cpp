#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cxrisk/acceptance.hpp"
#include "cxrisk/random.hpp"
#include "cxrisk/sampling.hpp"

using namespace cxrisk;
using Catch::Matchers::WithinAbs;

namespace {

const ScenarioSpace kSpace21({2, 1});

}  // namespace

TEST_CASE("accepts_simple", "[acceptance]") {
  const auto w = SimpleRiskStatistic::weighted_sum({1, 1});
  CHECK(accepts_simple(w, 6, {1, 2}));
  CHECK(accepts_simple(w, 3, {1, 2}));
  CHECK_FALSE(accepts_simple(SimpleRiskStatistic::max(2), 0, {1, -5}));
  const auto never = SimpleRiskStatistic::custom(1, "inf", [](std::span<const double>) { return ExtendedReal::infinity(); });
  CHECK_FALSE(accepts_simple(never, 1e300, {0}));
}

TEST_CASE("membership is tight at the boundary", "[acceptance][property]") {
  for (const auto& r : {SimpleRiskStatistic::weighted_sum({0.5, 2, 1}), SimpleRiskStatistic::max(3),
                        SimpleRiskStatistic::log_sum_exp(3, 0.4)}) {
    for (std::uint64_t t = 0; t < 500; ++t) {
      Rng rng = Rng::for_trial(12, t);
      const auto x = sampling::component(rng, 3);
      const double v = eval_simple(r, x).value();
      CHECK(accepts_simple(r, v, x));
      CHECK_FALSE(accepts_simple(r, v - 1e-6, x));
    }
  }
}

TEST_CASE("accepts_clustering", "[acceptance]") {
  const auto f = ClusteringFunction::neg_average(kSpace21, {1, 1});
  const ScenarioVector x(kSpace21, {{1, 3}, {2}});
  CHECK(accepts_clustering(f, {-2, -2}, x));
  CHECK(accepts_clustering(f, {-1, -1}, x));
  CHECK_FALSE(accepts_clustering(f, {-3, -3}, x));
  CHECK_FALSE(accepts_clustering(f, {-2, -2.5}, x));
}

TEST_CASE("acceptance-set properties hold for catalog members", "[acceptance][axioms]") {
  const ScenarioSpace space({3, 1, 2});
  const TrialSpec spec{2000, 4, 1e-9};
  for (const auto& r : {SimpleRiskStatistic::weighted_sum({1, 0, 2}), SimpleRiskStatistic::max(3),
                        SimpleRiskStatistic::log_sum_exp(3, 2.0)}) {
    for (auto p : {SetProperty::f_monotone, SetProperty::b_monotone, SetProperty::convex}) {
      CHECK(check_set_monotonicity(r, p, spec).passed());
    }
  }
  for (const auto& f : {ClusteringFunction::neg_average(space, {1, 2, 3}),
                        ClusteringFunction::expm1_link(space, {0.5, 1, 1})}) {
    for (auto p : {SetProperty::f_monotone, SetProperty::b_monotone, SetProperty::convex}) {
      CHECK(check_set_monotonicity(f, p, spec).passed());
    }
  }
}

TEST_CASE("acceptance-set checks flag a non-monotone statistic", "[acceptance][axioms]") {
  const auto broken = SimpleRiskStatistic::custom(2, "neg-first", [](std::span<const double> x) { return -x[0]; });
  CHECK_FALSE(check_set_monotonicity(broken, SetProperty::f_monotone, TrialSpec{500, 0, 1e-9}).passed());
  // b-monotonicity only moves the budget, so it still holds
  CHECK(check_set_monotonicity(broken, SetProperty::b_monotone, TrialSpec{500, 0, 1e-9}).passed());
}

TEST_CASE("primal_evaluate on the linear instance", "[acceptance][primal]") {
  const auto rho = compose(SimpleRiskStatistic::weighted_sum({1, 1}), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  const ScenarioVector x(kSpace21, {{1, 3}, {2}});
  const auto p = primal_evaluate(rho, x);
  CHECK(p.analytic == ExtendedReal(-4.0));
  CHECK(p.analytic == eval_complex(rho, x));
  // phi(X) = (-2, -2) lies on the 0.05 lattice, so the grid reaches it
  CHECK_THAT(p.numeric.value(), WithinAbs(-4.0, 1e-12));
  CHECK(p.warnings.empty());

  const auto z = primal_evaluate(rho, ScenarioVector::zeros(kSpace21));
  CHECK(z.analytic == ExtendedReal(0.0));
  CHECK(z.numeric == ExtendedReal(0.0));
}

TEST_CASE("primal grid value bounds the analytic value from above", "[acceptance][primal][property]") {
  const ScenarioSpace space({2, 2});
  for (const auto& r : {SimpleRiskStatistic::max(2), SimpleRiskStatistic::log_sum_exp(2, 0.5)}) {
    const auto rho = compose(r, ClusteringFunction::expm1_link(space, {1, 1}));
    for (std::uint64_t t = 0; t < 30; ++t) {
      Rng rng = Rng::for_trial(13, t);
      const auto x = sampling::scenario(rng, space, -1, 1);
      const auto p = primal_evaluate(rho, x);
      CHECK(p.analytic == eval_complex(rho, x));
      CHECK(p.numeric.value() >= p.analytic.value());
      CHECK(p.numeric.value() - p.analytic.value() <= 2 * 0.05);  // both families are 1-Lipschitz in sup norm
    }
  }
}

TEST_CASE("primal_evaluate: empty feasible set gives +inf", "[acceptance][primal]") {
  // rho is finite only for x <= -100, while phi stays above -1.
  const ScenarioSpace s1({1});
  const auto restricted = SimpleRiskStatistic::custom(1, "restricted", [](std::span<const double> x) {
    return x[0] <= -100.0 ? ExtendedReal(0.0) : ExtendedReal::infinity();
  });
  const auto rho = compose(restricted, ClusteringFunction::expm1_link(s1, {1}));
  const auto p = primal_evaluate(rho, ScenarioVector(s1, {{0.7}}));
  CHECK(p.analytic.is_infinite());
  CHECK(p.numeric.is_infinite());
  CHECK(p.numeric_argmin.empty());
  CHECK(p.gap == 0.0);
}

TEST_CASE("primal_evaluate warns when the box misses phi(X)", "[acceptance][primal]") {
  const auto rho = compose(SimpleRiskStatistic::weighted_sum({1, 1}), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  PrimalGrid grid;
  grid.lower = std::vector<double>{0, 0};
  grid.upper = std::vector<double>{1, 1};
  const auto p = primal_evaluate(rho, ScenarioVector(kSpace21, {{1, 3}, {2}}), grid);
  CHECK(p.analytic == ExtendedReal(-4.0));
  CHECK_FALSE(p.warnings.empty());
  PrimalGrid huge;
  huge.step = 1e-4;
  CHECK_THROWS_AS(primal_evaluate(rho, ScenarioVector::zeros(kSpace21), huge), std::invalid_argument);
}
