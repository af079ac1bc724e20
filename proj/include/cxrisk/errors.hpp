#pragma once

#include <stdexcept>
#include <string>

namespace cxrisk {

/// Operands live on different scenario spaces or have mismatched lengths.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested value lies outside the image of a map (section, link range).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Bracket expansion for a ray solve exceeded the configured magnitude cap.
class NotInImageError : public RangeError {
 public:
  using RangeError::RangeError;
};

/// The constant-block ray is not strictly monotone where the solve landed.
class SectionUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation needs a closed-form conjugate the statistic does not have.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed config, descriptor or scenario file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cxrisk
