#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cxrisk {

/// Shape of the product space R^{k_1} x ... x R^{k_d}.
class ScenarioSpace {
 public:
  /// Throws ShapeError when `k` is empty or any k_i is zero.
  explicit ScenarioSpace(std::vector<std::size_t> k);

  std::size_t components() const { return k_.size(); }
  std::size_t scenarios(std::size_t i) const { return k_.at(i); }
  const std::vector<std::size_t>& shape() const { return k_; }
  std::size_t total_dimension() const { return total_; }

  friend bool operator==(const ScenarioSpace&, const ScenarioSpace&) = default;

 private:
  std::vector<std::size_t> k_;
  std::size_t total_ = 0;
};

/// A point x of R^d, one value per component.
class ComponentVector {
 public:
  ComponentVector() = default;
  /// Throws std::domain_error on non-finite entries.
  explicit ComponentVector(std::vector<double> values);
  ComponentVector(std::initializer_list<double> values)
      : ComponentVector(std::vector<double>(values)) {}

  static ComponentVector zeros(std::size_t d) { return ComponentVector(std::vector<double>(d, 0.0)); }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  friend bool operator==(const ComponentVector&, const ComponentVector&) = default;

 private:
  std::vector<double> values_;
};

/// One element X of the product space, stored block by block.
class ScenarioVector {
 public:
  /// Throws ShapeError when block lengths disagree with `space`,
  /// std::domain_error on non-finite entries.
  ScenarioVector(ScenarioSpace space, std::vector<std::vector<double>> blocks);

  static ScenarioVector zeros(const ScenarioSpace& space);

  /// Block i filled with the constant t_i.
  static ScenarioVector constant_blocks(const ScenarioSpace& space, std::span<const double> t);

  /// Inverse of flatten(): block 1 left to right, then block 2, ...
  static ScenarioVector unflatten(const ScenarioSpace& space, std::span<const double> flat);

  const ScenarioSpace& space() const { return space_; }
  std::span<const double> block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<std::vector<double>>& blocks() const { return blocks_; }

  std::vector<double> flatten() const;

  friend bool operator==(const ScenarioVector&, const ScenarioVector&) = default;

 private:
  ScenarioSpace space_;
  std::vector<std::vector<double>> blocks_;
};

/// Correctly rounded sum of `values`; the result does not depend on order.
double exact_sum(std::span<const double> values);

/// s_i = sum_j X^i_j.
ComponentVector block_sum(const ScenarioVector& x);

/// The scenario preorder, read literally: X >= Y iff every block sum of X is
/// <= the matching block sum of Y. Note the inversion relative to the usual
/// loss ordering. Exact comparison, no tolerance. Throws ShapeError.
bool preorder_geq(const ScenarioVector& x, const ScenarioVector& y);

/// <X, Y> = sum_i s_i(X) s_i(Y). Throws ShapeError.
double inner_block(const ScenarioVector& x, const ScenarioVector& y);

/// Standard dot product on R^d. Throws ShapeError.
double inner_component(const ComponentVector& x, const ComponentVector& y);

/// X_[k_i]: copy of X with every block other than `i` zeroed (0-based).
/// Throws std::out_of_range.
ScenarioVector block_embed(const ScenarioVector& x, std::size_t i);

/// lambda X + (1 - lambda) Y, pointwise.
ScenarioVector affine_combination(double lambda, const ScenarioVector& x, const ScenarioVector& y);
ComponentVector affine_combination(double lambda, const ComponentVector& x, const ComponentVector& y);

/// Pointwise X + Y.
ScenarioVector operator+(const ScenarioVector& x, const ScenarioVector& y);

void require_same_space(const ScenarioVector& x, const ScenarioVector& y);
void require_dimension(std::size_t expected, std::size_t actual, const char* what);

}  // namespace cxrisk
