#include "cxrisk/composition.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "cxrisk/errors.hpp"
#include "cxrisk/random.hpp"
#include "cxrisk/sampling.hpp"

namespace cxrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(double v) { return ExtendedReal(v).to_string(); }

ScenarioVector ray_point(const ScenarioSpace& space, std::size_t i, double t) {
  std::vector<std::vector<double>> blocks;
  blocks.reserve(space.components());
  for (std::size_t j = 0; j < space.components(); ++j) {
    blocks.emplace_back(space.scenarios(j), j == i ? t : 0.0);
  }
  return ScenarioVector(space, std::move(blocks));
}

void require_family(Check c, std::initializer_list<Check> allowed, const char* subject) {
  for (Check a : allowed) {
    if (a == c) return;
  }
  throw std::invalid_argument(std::string("check ") + std::string(to_string(c)) +
                              " does not apply to a " + subject);
}

bool touches_infinity(std::initializer_list<ExtendedReal> values) {
  for (const auto& v : values) {
    if (v.is_infinite()) return true;
  }
  return false;
}

ExtendedReal mix(double lambda, ExtendedReal a, ExtendedReal b) {
  return lambda * a + (1.0 - lambda) * b;
}

}  // namespace

double excess(ExtendedReal lhs, ExtendedReal rhs) {
  if (rhs.is_infinite()) return -kInf;
  if (lhs.is_infinite()) return kInf;
  return lhs.raw() - rhs.raw();
}

// ---------------------------------------------------------------------------

ComplexRiskStatistic::ComplexRiskStatistic(ClusteringFunction clustering, SimpleRiskStatistic simple,
                                           Provenance provenance)
    : clustering_(std::move(clustering)), simple_(std::move(simple)), provenance_(provenance) {
  require_dimension(clustering_.space().components(), simple_.dimension(), "compose");
}

ComplexRiskStatistic compose(const SimpleRiskStatistic& r, const ClusteringFunction& f) {
  return ComplexRiskStatistic(f, r, Provenance::composed);
}

ExtendedReal eval_complex(const ComplexRiskStatistic& rho, const ScenarioVector& x) {
  if (!(x.space() == rho.space())) throw ShapeError("eval_complex: scenario space mismatch");
  return rho.evaluate(x);
}

ComponentVector ReconstructedClustering::operator()(const ScenarioVector& x) const {
  if (!(x.space() == rho_.space())) throw ShapeError("reconstructed clustering: space mismatch");
  std::vector<double> out(x.space().components());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const ExtendedReal v = rho_.evaluate(block_embed(x, i));
    if (v.is_infinite()) {
      throw RangeError("reconstructed clustering: rho(X_[k_" + std::to_string(i) + "]) is +inf");
    }
    out[i] = v.raw();
  }
  return ComponentVector(std::move(out));
}

ReconstructedClustering reconstruct_clustering(const ComplexRiskStatistic& rho) {
  return ReconstructedClustering(rho);
}

RaySolution solve_block_ray(const ComplexRiskStatistic& rho, std::size_t i, double target,
                            const BisectionConfig& config) {
  const auto& space = rho.space();
  if (i >= space.components()) throw std::out_of_range("solve_block_ray: component index");
  // Far along the ray a link such as exp(-u) overflows; the value is then
  // larger than any finite target, so it is read as +inf.
  auto f = [&](double t) {
    try {
      return rho.evaluate(ray_point(space, i, t));
    } catch (const std::domain_error&) {
      return ExtendedReal::infinity();
    }
  };
  const ExtendedReal goal(target);

  double lo = -config.initial_half_width;
  double hi = config.initial_half_width;
  ExtendedReal flo = f(lo);
  ExtendedReal fhi = f(hi);
  auto brackets = [&] {
    const bool up = flo <= fhi;
    const ExtendedReal a = up ? flo : fhi;
    const ExtendedReal b = up ? fhi : flo;
    return a <= goal && goal <= b;
  };
  while (!brackets()) {
    if (2.0 * hi > config.max_magnitude) {
      throw NotInImageError("component " + std::to_string(i) + ": target " + describe(target) +
                            " not reached by the constant-block ray within |t| <= " +
                            describe(config.max_magnitude));
    }
    lo *= 2.0;
    hi *= 2.0;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo == fhi) {
    throw SectionUnavailableError("component " + std::to_string(i) +
                                  ": constant-block ray is flat on the bracket");
  }
  const bool increasing = flo < fhi;

  RaySolution best{lo, std::fabs(excess(flo, goal))};
  if (std::fabs(excess(fhi, goal)) < best.residual) best = {hi, std::fabs(excess(fhi, goal))};

  for (int iter = 0; iter < config.max_iterations && best.residual > config.tolerance; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const ExtendedReal fm = f(mid);
    const bool inside = increasing ? (flo <= fm && fm <= fhi) : (fhi <= fm && fm <= flo);
    if (!inside) {
      throw SectionUnavailableError("component " + std::to_string(i) +
                                    ": constant-block ray is not monotone");
    }
    const double r = std::fabs(excess(fm, goal));
    if (r < best.residual) best = {mid, r};
    if ((fm < goal) == increasing) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  // Strictness probe: a flat neighbourhood means the preimage is not unique
  // and the ray cannot serve as a section.
  const double delta = 1e-6 * std::max(1.0, std::fabs(best.t));
  const ExtendedReal left = f(best.t - delta);
  const ExtendedReal centre = f(best.t);
  const ExtendedReal right = f(best.t + delta);
  const bool strict = increasing ? (left < centre && centre < right) : (left > centre && centre > right);
  if (!strict) {
    throw SectionUnavailableError("component " + std::to_string(i) +
                                  ": constant-block ray is not strictly monotone near t=" +
                                  describe(best.t));
  }
  return best;
}

ScenarioVector reconstruct_preimage(const ComplexRiskStatistic& rho, const ComponentVector& x,
                                    const BisectionConfig& config) {
  require_dimension(rho.space().components(), x.size(), "reconstruct_preimage");
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) t[i] = solve_block_ray(rho, i, x[i], config).t;
  return ScenarioVector::constant_blocks(rho.space(), t);
}

ExtendedReal reconstruct_simple(const ComplexRiskStatistic& rho, const ComponentVector& x,
                                const BisectionConfig& config) {
  return rho.evaluate(reconstruct_preimage(rho, x, config));
}

ComplexRiskStatistic decompose(const ComplexRiskStatistic& rho, const BisectionConfig& config) {
  const ReconstructedClustering phi(rho);
  auto clustering = ClusteringFunction::custom(
      rho.space(), "reconstructed(" + rho.clustering().name() + ")",
      [phi](const ScenarioVector& x) { return phi(x); });
  auto simple = SimpleRiskStatistic::custom(
      rho.space().components(), "reconstructed(" + rho.simple().name() + ")",
      [rho, config](std::span<const double> x) -> ExtendedReal {
        try {
          return reconstruct_simple(rho, ComponentVector(std::vector<double>(x.begin(), x.end())), config);
        } catch (const NotInImageError&) {
          return ExtendedReal::infinity();
        }
      });
  return ComplexRiskStatistic(std::move(clustering), std::move(simple), Provenance::reconstructed);
}

ScenarioVector construct_c3_witness(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                                    const ScenarioVector& y, double lambda,
                                    const BisectionConfig& config, double residual_tolerance) {
  require_same_space(x, y);
  if (!(x.space() == rho.space())) throw ShapeError("construct_c3_witness: space mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const std::size_t d = rho.space().components();
  std::vector<double> targets(d);
  for (std::size_t i = 0; i < d; ++i) {
    const ExtendedReal target = mix(lambda, rho.evaluate(block_embed(x, i)), rho.evaluate(block_embed(y, i)));
    if (target.is_infinite()) {
      throw SectionUnavailableError("component " + std::to_string(i) + ": target is +inf");
    }
    targets[i] = target.raw();
  }
  std::vector<double> t(d);
  for (std::size_t i = 0; i < d; ++i) t[i] = solve_block_ray(rho, i, targets[i], config).t;
  auto z = ScenarioVector::constant_blocks(rho.space(), t);
  for (std::size_t i = 0; i < d; ++i) {
    const double r = std::fabs(excess(rho.evaluate(block_embed(z, i)), targets[i]));
    if (!(r <= residual_tolerance)) {
      throw SectionUnavailableError("component " + std::to_string(i) + ": witness residual " +
                                    describe(r) + " exceeds " + describe(residual_tolerance));
    }
  }
  return z;
}

// ---------------------------------------------------------------------------
// Property suites

AxiomReport check_axiom(const SimpleRiskStatistic& r, Check axiom, const TrialSpec& spec) {
  require_family(axiom, {Check::A1, Check::A2}, "simple risk statistic");
  auto report = AxiomReport::start(axiom, spec);
  const std::size_t d = r.dimension();
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    if (axiom == Check::A1) {
      const auto y = sampling::component(rng, d);
      const auto x = sampling::raise(rng, y);
      const ExtendedReal rx = r.evaluate(x.values());
      const ExtendedReal ry = r.evaluate(y.values());
      if (touches_infinity({rx, ry})) ++report.infinite;
      report.record(excess(ry, rx));
    } else {
      const auto x = sampling::component(rng, d);
      const auto y = sampling::component(rng, d);
      const double lambda = rng.unit();
      const ExtendedReal lhs = r.evaluate(affine_combination(lambda, x, y).values());
      const ExtendedReal rx = r.evaluate(x.values());
      const ExtendedReal ry = r.evaluate(y.values());
      if (touches_infinity({lhs, rx, ry})) ++report.infinite;
      report.record(excess(lhs, mix(lambda, rx, ry)));
    }
  }
  return report;
}

AxiomReport check_axiom(const ClusteringFunction& f, Check axiom, const TrialSpec& spec) {
  require_family(axiom, {Check::B1, Check::B2, Check::B3}, "clustering function");
  auto report = AxiomReport::start(axiom, spec);
  const auto& space = f.space();
  const std::size_t d = space.components();
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    double margin = -kInf;
    if (axiom == Check::B1) {
      const auto y = sampling::scenario(rng, space);
      const auto x = sampling::preorder_above(rng, y);
      if (!preorder_geq(x, y)) {
        report.record_skip();
        continue;
      }
      const auto fx = f.evaluate(x);
      const auto fy = f.evaluate(y);
      for (std::size_t i = 0; i < d; ++i) margin = std::max(margin, fy[i] - fx[i]);
    } else if (axiom == Check::B2) {
      const auto x = sampling::scenario(rng, space);
      const auto y = sampling::scenario(rng, space);
      const double lambda = rng.unit();
      const auto lhs = f.evaluate(affine_combination(lambda, x, y));
      const auto fx = f.evaluate(x);
      const auto fy = f.evaluate(y);
      for (std::size_t i = 0; i < d; ++i) {
        margin = std::max(margin, lhs[i] - (lambda * fx[i] + (1.0 - lambda) * fy[i]));
      }
    } else {
      const auto x = sampling::scenario(rng, space);
      const auto fx = f.evaluate(x);
      for (std::size_t i = 0; i < d; ++i) {
        const ExtendedReal w = f.witness().evaluate(f.evaluate(block_embed(x, i)).values());
        if (w.is_infinite()) ++report.infinite;
        margin = std::max(margin, w.is_infinite() ? kInf : std::fabs(w.raw() - fx[i]));
      }
    }
    report.record(margin);
  }
  return report;
}

AxiomReport check_axiom(const ComplexRiskStatistic& rho, Check axiom, const TrialSpec& spec,
                        const BisectionConfig& config) {
  require_family(axiom, {Check::C1, Check::C2, Check::C3}, "complex risk statistic");
  auto report = AxiomReport::start(axiom, spec);
  const auto& space = rho.space();
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    if (axiom == Check::C1) {
      const auto y = sampling::scenario(rng, space);
      const auto x = sampling::preorder_above(rng, y);
      if (!preorder_geq(x, y)) {
        report.record_skip();
        continue;
      }
      const ExtendedReal rx = rho.evaluate(x);
      const ExtendedReal ry = rho.evaluate(y);
      if (touches_infinity({rx, ry})) ++report.infinite;
      report.record(excess(ry, rx));
      continue;
    }
    const auto x = sampling::scenario(rng, space);
    const auto y = sampling::scenario(rng, space);
    const double lambda = rng.unit();
    const ExtendedReal rx = rho.evaluate(x);
    const ExtendedReal ry = rho.evaluate(y);
    if (axiom == Check::C2) {
      const ExtendedReal lhs = rho.evaluate(affine_combination(lambda, x, y));
      if (touches_infinity({lhs, rx, ry})) ++report.infinite;
      report.record(excess(lhs, mix(lambda, rx, ry)));
      continue;
    }
    try {
      const auto z = construct_c3_witness(rho, x, y, lambda, config, spec.tolerance);
      const ExtendedReal rz = rho.evaluate(z);
      if (touches_infinity({rz, rx, ry})) ++report.infinite;
      report.record(excess(rz, mix(lambda, rx, ry)));
    } catch (const SectionUnavailableError&) {
      report.record_skip();
    } catch (const NotInImageError&) {
      report.record_skip();
    }
  }
  return report;
}

AxiomReport check_level_set_constancy(const ComplexRiskStatistic& rho, const TrialSpec& spec) {
  auto report = AxiomReport::start(Check::level_set, spec);
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    const auto x = sampling::scenario(rng, rho.space());
    const auto moved = sampling::redistribute(rng, x);
    const ExtendedReal a = rho.evaluate(x);
    const ExtendedReal b = rho.evaluate(moved);
    if (touches_infinity({a, b})) {
      ++report.infinite;
      report.record(a == b ? 0.0 : kInf);
      continue;
    }
    report.record(std::fabs(a.raw() - b.raw()));
  }
  return report;
}

AxiomReport check_round_trip(const ComplexRiskStatistic& rho, const TrialSpec& spec,
                             const BisectionConfig& config) {
  auto report = AxiomReport::start(Check::round_trip, spec);
  const ReconstructedClustering phi(rho);
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    const auto x = sampling::scenario(rng, rho.space());
    try {
      const ExtendedReal direct = rho.evaluate(x);
      const ExtendedReal rebuilt = reconstruct_simple(rho, phi(x), config);
      if (touches_infinity({direct, rebuilt})) {
        ++report.infinite;
        report.record(direct == rebuilt ? 0.0 : kInf);
        continue;
      }
      report.record(std::fabs(direct.raw() - rebuilt.raw()));
    } catch (const SectionUnavailableError&) {
      report.record_skip();
    } catch (const RangeError&) {
      report.record_skip();
    }
  }
  return report;
}

}  // namespace cxrisk
