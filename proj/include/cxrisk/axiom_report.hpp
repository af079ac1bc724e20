#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace cxrisk {

/// Every property suite the library can run.
enum class Check {
  A1, A2,              // simple statistic: monotonicity, convexity
  B1, B2, B3,          // clustering: monotonicity, convexity, correlation
  C1, C2, C3,          // complex statistic: monotonicity, convexity, statistical convexity
  level_set,           // rho constant on level sets of the reconstructed clustering
  round_trip,          // reconstructed (phi, rho) reproduce the original
  simple_set_f, simple_set_b, simple_set_convex,              // acceptance set of rho
  clustering_set_f, clustering_set_b, clustering_set_convex,  // acceptance set of phi
  weak_duality,
};

std::string_view to_string(Check c);
/// Throws std::invalid_argument on unknown names.
Check parse_check(std::string_view name);

/// Trial count, seed and tolerance for one property run.
struct TrialSpec {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

/// Outcome of a property run.
///
/// A margin is the amount by which a trial's inequality fails (positive means
/// the inequality is broken); a trial is a violation when its margin exceeds
/// the tolerance. Skipped trials (no witness could be built, infinite penalty)
/// are counted in `trials` and in `skipped`.
struct AxiomReport {
  Check check = Check::A1;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t skipped = 0;
  std::uint64_t infinite = 0;  ///< trials that met a +inf value
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  static AxiomReport start(Check c, const TrialSpec& spec) {
    AxiomReport r;
    r.check = c;
    r.seed = spec.seed;
    r.tolerance = spec.tolerance;
    return r;
  }

  void record(double margin) {
    ++trials;
    if (margin > worst_margin) worst_margin = margin;
    if (margin > tolerance) ++violations;
  }

  void record_skip() {
    ++trials;
    ++skipped;
  }

  /// Associative merge of two runs of the same check.
  void merge(const AxiomReport& other) {
    trials += other.trials;
    violations += other.violations;
    skipped += other.skipped;
    infinite += other.infinite;
    if (other.worst_margin > worst_margin) worst_margin = other.worst_margin;
  }

  std::uint64_t checked() const { return trials - skipped; }
  bool passed() const { return violations == 0; }
};

}  // namespace cxrisk
