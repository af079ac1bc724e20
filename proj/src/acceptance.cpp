#include "cxrisk/acceptance.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cxrisk/errors.hpp"
#include "cxrisk/random.hpp"
#include "cxrisk/sampling.hpp"

namespace cxrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Budget slack: a quarter of the members sit exactly on the boundary.
double slack(Rng& rng) { return rng.unit() < 0.25 ? 0.0 : rng.uniform(0.0, 5.0); }

ComponentVector lower_each(Rng& rng, const ComponentVector& x) {
  std::vector<double> v = x.vector();
  for (double& e : v) e -= rng.uniform(0.0, 5.0);
  return ComponentVector(std::move(v));
}

double worst_excess(const ComponentVector& lhs, const ComponentVector& rhs) {
  double m = -kInf;
  for (std::size_t i = 0; i < lhs.size(); ++i) m = std::max(m, lhs[i] - rhs[i]);
  return m;
}

}  // namespace

bool accepts_simple(const SimpleRiskStatistic& r, double c, const ComponentVector& x) {
  return eval_simple(r, x) <= ExtendedReal(c);
}

bool accepts_clustering(const ClusteringFunction& f, const ComponentVector& y, const ScenarioVector& x) {
  const auto fx = eval_clustering(f, x);
  require_dimension(fx.size(), y.size(), "accepts_clustering");
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (!(fx[i] <= y[i])) return false;
  }
  return true;
}

AxiomReport check_set_monotonicity(const SimpleRiskStatistic& r, SetProperty property,
                                   const TrialSpec& spec) {
  const Check id = property == SetProperty::f_monotone   ? Check::simple_set_f
                   : property == SetProperty::b_monotone ? Check::simple_set_b
                                                         : Check::simple_set_convex;
  auto report = AxiomReport::start(id, spec);
  const std::size_t d = r.dimension();
  auto member = [&](Rng& rng, double& c, ComponentVector& x) {
    x = sampling::component(rng, d);
    const ExtendedReal v = r.evaluate(x.values());
    if (v.is_infinite()) return false;
    c = v.raw() + slack(rng);
    return true;
  };
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    double c = 0.0;
    ComponentVector x;
    if (!member(rng, c, x)) {
      ++report.infinite;
      report.record_skip();
      continue;
    }
    switch (property) {
      case SetProperty::f_monotone: {
        const auto q = lower_each(rng, x);
        report.record(excess(r.evaluate(q.values()), c));
        break;
      }
      case SetProperty::b_monotone: {
        const double p = c + rng.uniform(0.0, 5.0);
        report.record(excess(r.evaluate(x.values()), p));
        break;
      }
      case SetProperty::convex: {
        double c2 = 0.0;
        ComponentVector x2;
        if (!member(rng, c2, x2)) {
          ++report.infinite;
          report.record_skip();
          break;
        }
        const double lambda = rng.unit();
        const ExtendedReal lhs = r.evaluate(affine_combination(lambda, x, x2).values());
        report.record(excess(lhs, lambda * c + (1.0 - lambda) * c2));
        break;
      }
    }
  }
  return report;
}

AxiomReport check_set_monotonicity(const ClusteringFunction& f, SetProperty property,
                                   const TrialSpec& spec) {
  const Check id = property == SetProperty::f_monotone   ? Check::clustering_set_f
                   : property == SetProperty::b_monotone ? Check::clustering_set_b
                                                         : Check::clustering_set_convex;
  auto report = AxiomReport::start(id, spec);
  const auto& space = f.space();
  auto member = [&](Rng& rng, ComponentVector& y, ScenarioVector& x) {
    x = sampling::scenario(rng, space);
    std::vector<double> budget = f.evaluate(x).vector();
    for (double& e : budget) e += slack(rng);
    y = ComponentVector(std::move(budget));
  };
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    Rng rng = Rng::for_trial(spec.seed, trial);
    ComponentVector y;
    ScenarioVector x = ScenarioVector::zeros(space);
    member(rng, y, x);
    switch (property) {
      case SetProperty::f_monotone: {
        const auto q = sampling::preorder_below(rng, x);
        if (!preorder_geq(x, q)) {
          report.record_skip();
          break;
        }
        report.record(worst_excess(f.evaluate(q), y));
        break;
      }
      case SetProperty::b_monotone: {
        report.record(worst_excess(f.evaluate(x), sampling::raise(rng, y)));
        break;
      }
      case SetProperty::convex: {
        ComponentVector y2;
        ScenarioVector x2 = ScenarioVector::zeros(space);
        member(rng, y2, x2);
        const double lambda = rng.unit();
        report.record(worst_excess(f.evaluate(affine_combination(lambda, x, x2)),
                                   affine_combination(lambda, y, y2)));
        break;
      }
    }
  }
  return report;
}

PrimalResult primal_evaluate(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                             const PrimalGrid& grid) {
  if (!(x.space() == rho.space())) throw ShapeError("primal_evaluate: scenario space mismatch");
  if (!(grid.step > 0.0)) throw std::invalid_argument("primal_evaluate: grid step must be > 0");
  const std::size_t d = rho.space().components();

  PrimalResult out;
  out.clustering_value = rho.clustering().evaluate(x);
  const auto& phi = out.clustering_value;
  // By monotonicity of the simple statistic the infimum sits at x = phi(X).
  out.analytic = rho.simple().evaluate(phi.values());
  out.step = grid.step;

  out.box_lower.resize(d);
  out.box_upper.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.box_lower[i] = grid.lower ? grid.lower->at(i) : phi[i];
    out.box_upper[i] = grid.upper ? grid.upper->at(i) : phi[i] + grid.extent;
    if (out.box_lower[i] > phi[i] || out.box_upper[i] < phi[i]) {
      out.warnings.push_back("grid box does not cover phi(X) in component " + std::to_string(i));
    }
  }
  if (grid.lower) require_dimension(d, grid.lower->size(), "primal grid lower");
  if (grid.upper) require_dimension(d, grid.upper->size(), "primal grid upper");

  // Per-component feasible lattice values m * step with max(lower, phi) <= value <= upper.
  std::vector<std::vector<double>> axes(d);
  double total = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double from = std::max(out.box_lower[i], phi[i]);
    const auto first = static_cast<long long>(std::floor(from / grid.step));
    const auto last = static_cast<long long>(std::ceil(out.box_upper[i] / grid.step));
    for (long long m = first; m <= last; ++m) {
      const double v = static_cast<double>(m) * grid.step;
      if (v >= from && v <= out.box_upper[i]) axes[i].push_back(v);
    }
    total *= static_cast<double>(axes[i].size());
  }
  if (total > static_cast<double>(grid.max_points)) {
    throw std::invalid_argument("primal_evaluate: grid has " + std::to_string(total) +
                                " points, above the limit of " + std::to_string(grid.max_points));
  }

  out.numeric = ExtendedReal::infinity();
  if (total > 0.0) {
    std::vector<std::size_t> index(d, 0);
    std::vector<double> point(d);
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < d; ++i) point[i] = axes[i][index[i]];
      ++out.points;
      const ExtendedReal v = rho.simple().evaluate(point);
      // Strict comparison keeps the lexicographically first minimiser.
      if (v < out.numeric) {
        out.numeric = v;
        out.numeric_argmin = point;
      }
      std::size_t i = d;
      for (;;) {
        if (i == 0) {
          done = true;
          break;
        }
        --i;
        if (++index[i] < axes[i].size()) break;
        index[i] = 0;
      }
    }
  } else {
    out.warnings.push_back("grid contains no feasible point x >= phi(X)");
  }

  if (out.analytic.is_infinite()) {
    out.gap = out.numeric.is_infinite() ? 0.0 : -kInf;
  } else {
    out.gap = out.numeric.is_infinite() ? kInf : out.numeric.raw() - out.analytic.raw();
  }
  return out;
}

}  // namespace cxrisk
