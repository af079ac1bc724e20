#include "cxrisk/axiom_report.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

namespace cxrisk {

namespace {

constexpr std::array<std::pair<Check, std::string_view>, 17> kNames{{
    {Check::A1, "A1"},
    {Check::A2, "A2"},
    {Check::B1, "B1"},
    {Check::B2, "B2"},
    {Check::B3, "B3"},
    {Check::C1, "C1"},
    {Check::C2, "C2"},
    {Check::C3, "C3"},
    {Check::level_set, "level-set"},
    {Check::round_trip, "round-trip"},
    {Check::simple_set_f, "simple-set-f"},
    {Check::simple_set_b, "simple-set-b"},
    {Check::simple_set_convex, "simple-set-convex"},
    {Check::clustering_set_f, "clustering-set-f"},
    {Check::clustering_set_b, "clustering-set-b"},
    {Check::clustering_set_convex, "clustering-set-convex"},
    {Check::weak_duality, "weak-duality"},
}};

}  // namespace

std::string_view to_string(Check c) {
  for (const auto& [check, name] : kNames) {
    if (check == c) return name;
  }
  return "?";
}

Check parse_check(std::string_view name) {
  for (const auto& [check, n] : kNames) {
    if (n == name) return check;
  }
  throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

}  // namespace cxrisk
