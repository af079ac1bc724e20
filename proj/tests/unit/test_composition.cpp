#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cxrisk/composition.hpp"
#include "cxrisk/errors.hpp"
#include "cxrisk/random.hpp"
#include "cxrisk/sampling.hpp"

using namespace cxrisk;
using Catch::Matchers::WithinAbs;

namespace {

const ScenarioSpace kSpace21({2, 1});

ScenarioVector x13_2() { return ScenarioVector(kSpace21, {{1, 3}, {2}}); }

ComplexRiskStatistic linear21() {
  return compose(SimpleRiskStatistic::weighted_sum({1, 1}), ClusteringFunction::neg_average(kSpace21, {1, 1}));
}

}  // namespace

TEST_CASE("compose and eval_complex", "[composition]") {
  CHECK(eval_complex(linear21(), x13_2()) == ExtendedReal(-4.0));
  const auto mx = compose(SimpleRiskStatistic::max(2), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  CHECK(eval_complex(mx, x13_2()) == ExtendedReal(-2.0));
  for (const auto& r : {SimpleRiskStatistic::weighted_sum({0.5, 2}), SimpleRiskStatistic::max(2)}) {
    for (const auto& f : {ClusteringFunction::neg_average(kSpace21, {1, 3}),
                          ClusteringFunction::expm1_link(kSpace21, {2, 1})}) {
      CHECK(eval_complex(compose(r, f), ScenarioVector::zeros(kSpace21)) == ExtendedReal(0.0));
    }
  }
  // log-sum-exp does not vanish at the origin: rho(0) = tau ln d.
  const auto lse = compose(SimpleRiskStatistic::log_sum_exp(2, 0.5), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  CHECK_THAT(eval_complex(lse, ScenarioVector::zeros(kSpace21)).value(), WithinAbs(0.5 * std::log(2.0), 1e-15));

  CHECK_THROWS_AS(compose(SimpleRiskStatistic::max(3), ClusteringFunction::neg_average(kSpace21, {1, 1})), ShapeError);
  CHECK_THROWS_AS(eval_complex(linear21(), ScenarioVector::zeros(ScenarioSpace({1, 2}))), ShapeError);
}

TEST_CASE("reconstruct_clustering", "[composition]") {
  const auto phi = reconstruct_clustering(linear21());
  CHECK(phi(x13_2()) == ComponentVector{-2, -2});
  const auto lse = compose(SimpleRiskStatistic::log_sum_exp(2, 1.0), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  const double r0 = eval_complex(lse, ScenarioVector::zeros(kSpace21)).value();
  CHECK(reconstruct_clustering(lse)(ScenarioVector::zeros(kSpace21)) == ComponentVector{r0, r0});
  const ScenarioSpace s1({3});
  const auto one = compose(SimpleRiskStatistic::max(1), ClusteringFunction::expm1_link(s1, {2}));
  const ScenarioVector x(s1, {{0.3, -1, 2}});
  CHECK(reconstruct_clustering(one)(x) == ComponentVector{eval_complex(one, x).value()});
}

TEST_CASE("reconstruct_simple", "[composition]") {
  CHECK_THAT(reconstruct_simple(linear21(), {-2, -2}).value(), WithinAbs(-4.0, 1e-9));
  const auto rho = linear21();
  const auto x0 = reconstruct_clustering(rho)(ScenarioVector::zeros(kSpace21));
  CHECK_THAT(reconstruct_simple(rho, x0).value(), WithinAbs(0.0, 1e-9));
}

TEST_CASE("max o neg-average: the ray image is [0, inf)", "[composition]") {
  // rho((t 1)_[k_i]) = max(-t, 0) never drops below 0, so x = (-2, -2) has no
  // constant-block preimage under the reconstructed clustering.
  const auto mx = compose(SimpleRiskStatistic::max(2), ClusteringFunction::neg_average(kSpace21, {1, 1}));
  CHECK_THROWS_AS(reconstruct_simple(mx, {-2, -2}), NotInImageError);
  // On the flat part of the ray, bisection lands where the ray is not strict.
  CHECK_THROWS_AS(reconstruct_simple(mx, {0, 0}), SectionUnavailableError);
  // Strictly inside the increasing part it works.
  CHECK_THAT(reconstruct_simple(mx, {1, 3}).value(), WithinAbs(3.0, 1e-9));
}

TEST_CASE("solve_block_ray brackets and reports", "[composition]") {
  const auto rho = linear21();
  const auto sol = solve_block_ray(rho, 0, 7.0);
  CHECK_THAT(sol.t, WithinAbs(-7.0, 1e-9));
  CHECK(sol.residual <= 1e-10);
  BisectionConfig tight;
  tight.max_magnitude = 4.0;
  CHECK_THROWS_AS(solve_block_ray(rho, 0, 100.0, tight), NotInImageError);
  const auto e = compose(SimpleRiskStatistic::weighted_sum({1, 1}), ClusteringFunction::expm1_link(kSpace21, {1, 1}));
  CHECK_THROWS_AS(solve_block_ray(e, 1, -1.5), NotInImageError);  // below the link's range
}

TEST_CASE("decompose packs the reconstructed pair", "[composition]") {
  const auto rho = compose(SimpleRiskStatistic::log_sum_exp(2, 1.0), ClusteringFunction::expm1_link(kSpace21, {1, 2}));
  const auto dec = decompose(rho);
  CHECK(dec.provenance() == Provenance::reconstructed);
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng = Rng::for_trial(2, t);
    const auto x = sampling::scenario(rng, kSpace21, -1, 1);
    CHECK_THAT(dec.evaluate(x).value(), WithinAbs(rho.evaluate(x).value(), 1e-6));
  }
}

TEST_CASE("construct_c3_witness", "[composition]") {
  const ScenarioSpace s11({1, 1});
  const auto rho = compose(SimpleRiskStatistic::weighted_sum({1, 1}), ClusteringFunction::neg_average(s11, {1, 1}));
  const ScenarioVector x(s11, {{2}, {0}});
  const ScenarioVector y(s11, {{0}, {2}});
  const auto z = construct_c3_witness(rho, x, y, 0.5);
  CHECK_THAT(z.block(0)[0], WithinAbs(1.0, 1e-9));
  CHECK_THAT(z.block(1)[0], WithinAbs(1.0, 1e-9));
  const auto z1 = construct_c3_witness(rho, x, y, 1.0);
  CHECK(block_sum(z1)[0] == Catch::Approx(2.0).margin(1e-9));
  CHECK_THROWS_AS(construct_c3_witness(rho, x, y, 1.5), std::invalid_argument);
}

TEST_CASE("C3 fails for max and log-sum-exp compositions", "[composition][counterexample]") {
  const ScenarioSpace s11({1, 1});
  const auto f = ClusteringFunction::neg_average(s11, {1, 1});

  SECTION("log-sum-exp") {
    // phi(X) = (-5, -5), phi(Y) = (5, 5)
    const auto rho = compose(SimpleRiskStatistic::log_sum_exp(2, 1.0), f);
    const ScenarioVector x(s11, {{5}, {5}});
    const ScenarioVector y(s11, {{-5}, {-5}});
    const auto z = construct_c3_witness(rho, x, y, 0.5);
    const double rz = rho.evaluate(z).value();
    const double bound = 0.5 * rho.evaluate(x).value() + 0.5 * rho.evaluate(y).value();
    // the block targets are ln(1 + e^-5) and ln(1 + e^5); an independent solve
    // of ln(1 + e^{-t}) = (those averaged) gives the witness directly
    const double target = 0.5 * (std::log1p(std::exp(-5.0)) + std::log1p(std::exp(5.0)));
    const double t = -std::log(std::expm1(target));
    CHECK_THAT(z.block(0)[0], WithinAbs(t, 1e-8));
    CHECK_THAT(rz, WithinAbs(std::log(2.0) - t, 1e-8));
    CHECK_THAT(bound, WithinAbs(std::log(2.0), 1e-12));
    CHECK(rz - bound > 2.0);
  }

  SECTION("max") {
    const auto rho = compose(SimpleRiskStatistic::max(2), f);
    const ScenarioVector x(s11, {{1}, {1}});
    const ScenarioVector y(s11, {{-1}, {-1}});
    const auto z = construct_c3_witness(rho, x, y, 0.5);
    CHECK_THAT(rho.evaluate(z).value(), WithinAbs(0.5, 1e-9));
    CHECK(0.5 * rho.evaluate(x).value() + 0.5 * rho.evaluate(y).value() == 0.0);
  }
}

TEST_CASE("axiom suites on the weighted-sum family", "[composition][axioms]") {
  const ScenarioSpace space({2, 1, 3});
  const TrialSpec spec{2000, 17, 1e-9};
  const auto rho = compose(SimpleRiskStatistic::weighted_sum({1, 0.5, 2}),
                           ClusteringFunction::expm1_link(space, {1, 2, 0.5}));
  for (Check c : {Check::A1, Check::A2}) CHECK(check_axiom(rho.simple(), c, spec).passed());
  for (Check c : {Check::B1, Check::B2, Check::B3}) CHECK(check_axiom(rho.clustering(), c, spec).passed());
  for (Check c : {Check::C1, Check::C2, Check::C3}) {
    const auto r = check_axiom(rho, c, spec);
    CHECK(r.passed());
    CHECK(r.trials == spec.trials);
  }
  CHECK(check_level_set_constancy(rho, spec).passed());
  const auto rt = check_round_trip(rho, TrialSpec{500, 1, 1e-6});
  CHECK(rt.passed());
  CHECK(rt.skipped == 0);
}

TEST_CASE("axiom suites catch a broken statistic", "[composition][axioms]") {
  const auto broken = SimpleRiskStatistic::custom(1, "neg-first", [](std::span<const double> x) { return -x[0]; });
  const auto report = check_axiom(broken, Check::A1, TrialSpec{500, 0, 1e-9});
  CHECK(report.violations > 0);
  CHECK(report.worst_margin > 0.0);
  CHECK_THROWS_AS(check_axiom(broken, Check::B1, TrialSpec{}), std::invalid_argument);
}

TEST_CASE("zero trials give an empty report", "[composition][axioms]") {
  const auto r = check_axiom(linear21(), Check::C2, TrialSpec{0, 3, 1e-9});
  CHECK(r.trials == 0);
  CHECK(r.violations == 0);
  CHECK(r.passed());
}

TEST_CASE("level-set constancy on the spec instance", "[composition]") {
  const auto rho = linear21();
  const ScenarioVector a(kSpace21, {{1, 3}, {2}});
  const ScenarioVector b(kSpace21, {{0, 4}, {2}});
  CHECK(rho.evaluate(a) == rho.evaluate(b));
}

TEST_CASE("equal block sums give exactly equal values", "[composition][property]") {
  const ScenarioSpace space({3, 2});
  const auto rho = compose(SimpleRiskStatistic::log_sum_exp(2, 0.3), ClusteringFunction::expm1_link(space, {1, 1}));
  for (std::uint64_t t = 0; t < 300; ++t) {
    Rng rng = Rng::for_trial(6, t);
    const auto x = sampling::scenario(rng, space);
    auto blocks = x.blocks();
    std::swap(blocks[0][0], blocks[0][2]);
    CHECK(rho.evaluate(x) == rho.evaluate(ScenarioVector(space, blocks)));
  }
}

TEST_CASE("excess handles infinities", "[composition]") {
  CHECK(excess(ExtendedReal::infinity(), ExtendedReal::infinity()) == -INFINITY);
  CHECK(excess(ExtendedReal::infinity(), 1.0) == INFINITY);
  CHECK(excess(2.0, 1.0) == 1.0);
}
