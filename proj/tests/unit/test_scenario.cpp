#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "cxrisk/errors.hpp"
#include "cxrisk/extended_real.hpp"
#include "cxrisk/random.hpp"
#include "cxrisk/sampling.hpp"
#include "cxrisk/scenario.hpp"

using namespace cxrisk;

namespace {

ScenarioVector sv(std::vector<std::size_t> k, std::vector<std::vector<double>> blocks) {
  return ScenarioVector(ScenarioSpace(std::move(k)), std::move(blocks));
}

}  // namespace

TEST_CASE("ScenarioSpace rejects empty shapes and empty blocks", "[scenario]") {
  CHECK_THROWS_AS(ScenarioSpace({}), ShapeError);
  CHECK_THROWS_AS(ScenarioSpace({2, 0}), ShapeError);
  ScenarioSpace s({2, 1, 4});
  CHECK(s.components() == 3);
  CHECK(s.total_dimension() == 7);
}

TEST_CASE("ScenarioVector validates block lengths and finiteness", "[scenario]") {
  ScenarioSpace s({2, 1});
  CHECK_THROWS_AS(ScenarioVector(s, {{1.0}, {2.0}}), ShapeError);
  CHECK_THROWS_AS(ScenarioVector(s, {{1.0, 2.0}}), ShapeError);
  CHECK_THROWS_AS(ScenarioVector(s, {{1.0, NAN}, {2.0}}), std::domain_error);
  CHECK_THROWS_AS(ComponentVector({1.0, INFINITY}), std::domain_error);
}

TEST_CASE("block_sum", "[scenario]") {
  CHECK(block_sum(sv({2, 1}, {{1, 2}, {5}})) == ComponentVector{3, 5});
  CHECK(block_sum(ScenarioVector::zeros(ScenarioSpace({3, 2}))) == ComponentVector{0, 0});
  CHECK(block_sum(sv({3}, {{-1, 0, 1}})) == ComponentVector{0});
}

TEST_CASE("exact_sum is correctly rounded and order independent", "[scenario]") {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(exact_sum(v) == 2.0);
  std::vector<double> w{0.1, 0.2, 0.3, -0.6, 1e-17};
  const double reference = exact_sum(w);
  std::sort(w.begin(), w.end());
  do {
    CHECK(exact_sum(w) == reference);
  } while (std::next_permutation(w.begin(), w.end()));
}

TEST_CASE("preorder_geq reads the block-sum inequality literally", "[scenario]") {
  CHECK_FALSE(preorder_geq(sv({2, 1}, {{0, 1}, {5}}), sv({2, 1}, {{2, 3}, {4}})));
  const auto x = sv({2, 1}, {{0.5, -3}, {7}});
  CHECK(preorder_geq(x, x));
  CHECK(preorder_geq(sv({2}, {{0, 0}}), sv({2}, {{1, 0}})));
  CHECK_THROWS_AS(preorder_geq(sv({2}, {{0, 0}}), sv({1, 1}, {{0}, {0}})), ShapeError);
}

TEST_CASE("preorder properties on sampled triples", "[scenario][property]") {
  const ScenarioSpace space({2, 3, 1});
  for (std::uint64_t t = 0; t < 2000; ++t) {
    Rng rng = Rng::for_trial(11, t);
    const auto x = sampling::scenario(rng, space);
    const auto y = sampling::preorder_above(rng, x);  // y >= x
    const auto z = sampling::preorder_above(rng, y);  // z >= y
    REQUIRE(preorder_geq(y, x));
    REQUIRE(preorder_geq(z, y));
    CHECK(preorder_geq(z, x));
    const auto r = sampling::redistribute(rng, x);
    const bool both = preorder_geq(x, r) && preorder_geq(r, x);
    CHECK(both == (block_sum(x) == block_sum(r)));
    const auto w = sampling::scenario(rng, space);
    CHECK((preorder_geq(x, w) && preorder_geq(w, x)) == (block_sum(x) == block_sum(w)));
  }
}

TEST_CASE("inner products", "[scenario]") {
  CHECK(inner_block(sv({2}, {{1, 2}}), sv({2}, {{3, 4}})) == 21.0);
  CHECK(inner_block(sv({2}, {{0, 0}}), sv({2}, {{3, 4}})) == 0.0);
  CHECK(inner_block(sv({1, 1}, {{2}, {-1}}), sv({1, 1}, {{3}, {5}})) == 1.0);
  CHECK(inner_component({1, 2}, {3, 4}) == 11.0);
  CHECK(inner_component({1, 2}, {0, 0}) == 0.0);
  CHECK(inner_component({1, -1}, {1, 1}) == 0.0);
  CHECK_THROWS_AS(inner_component({1, 2}, {1}), ShapeError);
}

TEST_CASE("inner_block is symmetric, bilinear and factors through block sums", "[scenario][property]") {
  const ScenarioSpace space({3, 1, 2});
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Rng rng = Rng::for_trial(5, t);
    const auto x = sampling::scenario(rng, space);
    const auto y = sampling::scenario(rng, space);
    const auto z = sampling::scenario(rng, space);
    const double lambda = rng.unit();
    const double xy = inner_block(x, y);
    const double scale = 1.0 + std::fabs(xy);
    CHECK(std::fabs(xy - inner_component(block_sum(x), block_sum(y))) <= 1e-12 * scale);
    CHECK(xy == inner_block(y, x));
    // lambda x + (1 - lambda) z against y
    const double lhs = inner_block(affine_combination(lambda, x, z), y);
    const double rhs = lambda * xy + (1 - lambda) * inner_block(z, y);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(lhs) + std::fabs(rhs)) * 10);
  }
}

TEST_CASE("block_embed", "[scenario]") {
  const auto x = sv({2, 1}, {{1, 3}, {2}});
  CHECK(block_embed(x, 1) == sv({2, 1}, {{0, 0}, {2}}));
  const auto zero = ScenarioVector::zeros(x.space());
  CHECK(block_embed(zero, 0) == zero);
  const auto single = sv({3}, {{1, -2, 4}});
  CHECK(block_embed(single, 0) == single);
  CHECK_THROWS_AS(block_embed(x, 2), std::out_of_range);
}

TEST_CASE("embeddings sum back to X", "[scenario][property]") {
  const ScenarioSpace space({2, 2, 3});
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng = Rng::for_trial(9, t);
    const auto x = sampling::scenario(rng, space);
    auto total = ScenarioVector::zeros(space);
    for (std::size_t i = 0; i < space.components(); ++i) total = total + block_embed(x, i);
    CHECK(total == x);
  }
}

TEST_CASE("flatten and unflatten round trip", "[scenario]") {
  const auto x = sv({2, 1}, {{1, 3}, {2}});
  CHECK(x.flatten() == std::vector<double>{1, 3, 2});
  CHECK(ScenarioVector::unflatten(x.space(), x.flatten()) == x);
  const std::vector<double> short_row{1, 2};
  CHECK_THROWS_AS(ScenarioVector::unflatten(x.space(), short_row), ShapeError);
}

TEST_CASE("ExtendedReal arithmetic", "[extended-real]") {
  const auto inf = ExtendedReal::infinity();
  CHECK((inf + 3.0).is_infinite());
  CHECK((0.0 * inf) == ExtendedReal(0.0));
  CHECK((2.0 * inf).is_infinite());
  CHECK(ExtendedReal(1.0) < inf);
  CHECK_THROWS_AS(ExtendedReal(NAN), std::domain_error);
  CHECK_THROWS_AS(ExtendedReal(-INFINITY), std::domain_error);
  CHECK_THROWS_AS(inf.value(), std::domain_error);
  CHECK_THROWS_AS(-1.0 * ExtendedReal(2.0), std::domain_error);
  CHECK(inf.to_string() == "+inf");
  CHECK(ExtendedReal(0.5).to_string() == "0.5");
}

TEST_CASE("Rng streams are reproducible", "[random]") {
  Rng a = Rng::for_trial(1, 2);
  Rng b = Rng::for_trial(1, 2);
  Rng c = Rng::for_trial(1, 3);
  const double va = a.unit();
  CHECK(va == b.unit());
  CHECK(va != c.unit());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
