#include "cxrisk/sampling.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace cxrisk::sampling {

ComponentVector component(Rng& rng, std::size_t d, double lo, double hi) {
  std::vector<double> v(d);
  for (double& e : v) e = rng.uniform(lo, hi);
  return ComponentVector(std::move(v));
}

ScenarioVector scenario(Rng& rng, const ScenarioSpace& space, double lo, double hi) {
  std::vector<double> flat(space.total_dimension());
  for (double& e : flat) e = rng.uniform(lo, hi);
  return ScenarioVector::unflatten(space, flat);
}

ComponentVector simplex_point(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  double total = 0.0;
  for (double& e : v) {
    e = -std::log(1.0 - rng.unit());
    total += e;
  }
  for (double& e : v) e /= total;
  return ComponentVector(std::move(v));
}

ComponentVector raise(Rng& rng, const ComponentVector& x) {
  std::vector<double> v = x.vector();
  for (double& e : v) e += rng.uniform(0.0, 5.0);
  return ComponentVector(std::move(v));
}

namespace {

ScenarioVector shift_block_sums(Rng& rng, const ScenarioVector& y, double sign) {
  auto blocks = y.blocks();
  for (auto& block : blocks) {
    const double k = static_cast<double>(block.size());
    std::vector<double> q(block.size());
    double sum = 0.0;
    for (double& e : q) {
      e = rng.uniform(-5.0, 5.0);
      sum += e;
    }
    const double drop = rng.uniform(0.0, 5.0);
    const double shift = (sum + sign * drop) / k;
    for (std::size_t j = 0; j < block.size(); ++j) block[j] += q[j] - shift;
  }
  return ScenarioVector(y.space(), std::move(blocks));
}

}  // namespace

ScenarioVector preorder_above(Rng& rng, const ScenarioVector& y) { return shift_block_sums(rng, y, 1.0); }

ScenarioVector preorder_below(Rng& rng, const ScenarioVector& x) { return shift_block_sums(rng, x, -1.0); }

ScenarioVector redistribute(Rng& rng, const ScenarioVector& x) {
  auto blocks = x.blocks();
  for (auto& block : blocks) {
    for (std::size_t j = block.size(); j > 1; --j) {
      std::swap(block[j - 1], block[rng.below(j)]);
    }
    if (block.size() >= 2) {
      const std::size_t a = rng.below(block.size());
      std::size_t b = rng.below(block.size() - 1);
      if (b >= a) ++b;
      const double delta = rng.uniform(-5.0, 5.0);
      block[a] += delta;
      block[b] -= delta;
    }
  }
  return ScenarioVector(x.space(), std::move(blocks));
}

}  // namespace cxrisk::sampling
