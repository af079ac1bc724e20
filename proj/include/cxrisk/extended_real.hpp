#pragma once

#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace cxrisk {

/// A value in R u {+inf}.
///
/// Risk statistics may take the value +inf, so every evaluator returns this
/// type instead of a bare double. NaN and -inf are rejected at construction;
/// +inf absorbs addition and nonnegative scaling (with 0 * inf = 0).
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {  // NOLINT: implicit on purpose
    if (v != v || v == -std::numeric_limits<double>::infinity()) {
      throw std::domain_error("ExtendedReal: value must be finite or +inf");
    }
  }

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return value_ != std::numeric_limits<double>::infinity(); }
  bool is_infinite() const { return !is_finite(); }

  /// Raw double; +inf maps to IEEE +inf.
  double raw() const { return value_; }

  /// Finite value or throws.
  double value() const {
    if (!is_finite()) throw std::domain_error("ExtendedReal: value is +inf");
    return value_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(ExtendedReal a, double b) {
    return ExtendedReal(a.value_ - b);
  }

  /// Nonnegative scaling with 0 * inf = 0.
  friend ExtendedReal operator*(double s, ExtendedReal a) {
    if (s < 0.0) throw std::domain_error("ExtendedReal: negative scale");
    if (s == 0.0) return ExtendedReal(0.0);
    return ExtendedReal(s * a.value_);
  }

  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
};

}  // namespace cxrisk
