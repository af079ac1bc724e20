#include "cxrisk/extended_real.hpp"

#include <cstdio>

namespace cxrisk {

std::string ExtendedReal::to_string() const {
  if (is_infinite()) return "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

}  // namespace cxrisk
