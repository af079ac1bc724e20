#include "cxrisk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "cxrisk/errors.hpp"

namespace cxrisk {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": entries must be finite");
  }
}

}  // namespace

ScenarioSpace::ScenarioSpace(std::vector<std::size_t> k) : k_(std::move(k)) {
  if (k_.empty()) throw ShapeError("ScenarioSpace: need at least one component");
  for (std::size_t i = 0; i < k_.size(); ++i) {
    if (k_[i] == 0) throw ShapeError("ScenarioSpace: k[" + std::to_string(i) + "] must be >= 1");
    total_ += k_[i];
  }
}

ComponentVector::ComponentVector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_, "ComponentVector");
}

ScenarioVector::ScenarioVector(ScenarioSpace space, std::vector<std::vector<double>> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
  if (blocks_.size() != space_.components()) {
    throw ShapeError("ScenarioVector: expected " + std::to_string(space_.components()) +
                     " blocks, got " + std::to_string(blocks_.size()));
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].size() != space_.scenarios(i)) {
      throw ShapeError("ScenarioVector: block " + std::to_string(i) + " has length " +
                       std::to_string(blocks_[i].size()) + ", expected " +
                       std::to_string(space_.scenarios(i)));
    }
    require_finite(blocks_[i], "ScenarioVector");
  }
}

ScenarioVector ScenarioVector::zeros(const ScenarioSpace& space) {
  std::vector<std::vector<double>> blocks;
  blocks.reserve(space.components());
  for (std::size_t k : space.shape()) blocks.emplace_back(k, 0.0);
  return ScenarioVector(space, std::move(blocks));
}

ScenarioVector ScenarioVector::constant_blocks(const ScenarioSpace& space, std::span<const double> t) {
  require_dimension(space.components(), t.size(), "constant_blocks");
  std::vector<std::vector<double>> blocks;
  blocks.reserve(space.components());
  for (std::size_t i = 0; i < t.size(); ++i) blocks.emplace_back(space.scenarios(i), t[i]);
  return ScenarioVector(space, std::move(blocks));
}

ScenarioVector ScenarioVector::unflatten(const ScenarioSpace& space, std::span<const double> flat) {
  if (flat.size() != space.total_dimension()) {
    throw ShapeError("unflatten: expected " + std::to_string(space.total_dimension()) +
                     " values, got " + std::to_string(flat.size()));
  }
  std::vector<std::vector<double>> blocks;
  blocks.reserve(space.components());
  std::size_t offset = 0;
  for (std::size_t k : space.shape()) {
    blocks.emplace_back(flat.begin() + offset, flat.begin() + offset + k);
    offset += k;
  }
  return ScenarioVector(space, std::move(blocks));
}

std::vector<double> ScenarioVector::flatten() const {
  std::vector<double> flat;
  flat.reserve(space_.total_dimension());
  for (const auto& b : blocks_) flat.insert(flat.end(), b.begin(), b.end());
  return flat;
}

// Shewchuk's partials with a final half-way correction; same scheme as
// Python's math.fsum.
double exact_sum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t used = 0;
    for (double y : partials) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;

  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

ComponentVector block_sum(const ScenarioVector& x) {
  std::vector<double> s;
  s.reserve(x.space().components());
  for (const auto& b : x.blocks()) s.push_back(exact_sum(b));
  return ComponentVector(std::move(s));
}

void require_same_space(const ScenarioVector& x, const ScenarioVector& y) {
  if (!(x.space() == y.space())) throw ShapeError("scenario vectors live on different spaces");
}

void require_dimension(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw ShapeError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                     ", got " + std::to_string(actual));
  }
}

bool preorder_geq(const ScenarioVector& x, const ScenarioVector& y) {
  require_same_space(x, y);
  const auto sx = block_sum(x);
  const auto sy = block_sum(y);
  for (std::size_t i = 0; i < sx.size(); ++i) {
    if (!(sx[i] <= sy[i])) return false;
  }
  return true;
}

double inner_component(const ComponentVector& x, const ComponentVector& y) {
  require_dimension(x.size(), y.size(), "inner_component");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double inner_block(const ScenarioVector& x, const ScenarioVector& y) {
  require_same_space(x, y);
  return inner_component(block_sum(x), block_sum(y));
}

ScenarioVector block_embed(const ScenarioVector& x, std::size_t i) {
  if (i >= x.space().components()) {
    throw std::out_of_range("block_embed: component index " + std::to_string(i) +
                            " out of range for d=" + std::to_string(x.space().components()));
  }
  auto blocks = x.blocks();
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j != i) std::fill(blocks[j].begin(), blocks[j].end(), 0.0);
  }
  return ScenarioVector(x.space(), std::move(blocks));
}

ScenarioVector affine_combination(double lambda, const ScenarioVector& x, const ScenarioVector& y) {
  require_same_space(x, y);
  auto blocks = x.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto yb = y.block(i);
    for (std::size_t j = 0; j < blocks[i].size(); ++j) {
      blocks[i][j] = lambda * blocks[i][j] + (1.0 - lambda) * yb[j];
    }
  }
  return ScenarioVector(x.space(), std::move(blocks));
}

ComponentVector affine_combination(double lambda, const ComponentVector& x, const ComponentVector& y) {
  require_dimension(x.size(), y.size(), "affine_combination");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda * x[i] + (1.0 - lambda) * y[i];
  return ComponentVector(std::move(out));
}

ScenarioVector operator+(const ScenarioVector& x, const ScenarioVector& y) {
  require_same_space(x, y);
  auto blocks = x.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto yb = y.block(i);
    for (std::size_t j = 0; j < blocks[i].size(); ++j) blocks[i][j] += yb[j];
  }
  return ScenarioVector(x.space(), std::move(blocks));
}

}  // namespace cxrisk
