#include "cxrisk/duality.hpp"

#include <algorithm>
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

// Relative slack on the neg-average cancellation Shat_i + a_i / k_i == 0.
constexpr double kCancellationTolerance = 1e-12;

struct BlockSup {
  ExtendedReal value;
  std::string unbounded;
};

// sup over s of  shat * s - a * h(s / k),  a >= 0.
BlockSup block_sup_closed_form(const ClusteringFunction& f, std::size_t i, double a, double shat) {
  const double k = static_cast<double>(f.space().scenarios(i));
  auto where = [i] { return "block " + std::to_string(i); };
  switch (f.family()) {
    case ClusteringFamily::neg_average: {
      // Linear in s with slope shat + a / k.
      const double slope = shat + a / k;
      const double scale = std::max(std::fabs(shat), a / k);
      if (std::fabs(slope) <= kCancellationTolerance * scale) return {0.0, {}};
      return {ExtendedReal::infinity(), where() + ": net block-sum coefficient is nonzero"};
    }
    case ClusteringFamily::expm1_link: {
      if (a == 0.0) {
        if (shat == 0.0) return {0.0, {}};
        return {ExtendedReal::infinity(), where() + ": linear term without curvature"};
      }
      if (shat > 0.0) return {ExtendedReal::infinity(), where() + ": positive block-sum coefficient"};
      if (shat == 0.0) return {a, {}};  // supremum approached as s -> +inf
      const double s_star = -k * std::log(-shat * k / a);
      return {shat * s_star + shat * k + a, {}};
    }
    case ClusteringFamily::custom: break;
  }
  throw UnsupportedError("clustering '" + f.name() + "' has no closed-form conjugate");
}

BlockSup block_sup_grid(const ClusteringFunction& f, std::size_t i, double a, double shat,
                        const PenaltyOptions& options) {
  if (!f.has_link()) throw UnsupportedError("clustering '" + f.name() + "' has no link function");
  const double k = static_cast<double>(f.space().scenarios(i));
  const double g = options.block_sum_range;
  const auto n = static_cast<long long>(std::floor(2.0 * g / options.block_sum_step + 1e-9));
  double best = -kInf;
  for (long long m = 0; m <= n; ++m) {
    const double s = -g + static_cast<double>(m) * options.block_sum_step;
    best = std::max(best, shat * s - a * f.link(s / k));
  }
  return {best, {}};
}

BlockSup clustering_support_impl(const ClusteringFunction& f, const ComponentVector& yhat,
                                 const ComponentVector& shat, const PenaltyOptions& options) {
  const std::size_t d = f.space().components();
  require_dimension(d, yhat.size(), "clustering support yhat");
  require_dimension(d, shat.size(), "clustering support block sums");
  for (std::size_t i = 0; i < d; ++i) {
    if (yhat[i] > 0.0) {
      return {ExtendedReal::infinity(),
              "component " + std::to_string(i) + ": sup over y >= phi(Y) is unbounded"};
    }
  }
  ExtendedReal total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double a = -yhat[i] * f.gamma()[i];
    BlockSup part = options.method == PenaltyMethod::grid ? block_sup_grid(f, i, a, shat[i], options)
                                                          : block_sup_closed_form(f, i, a, shat[i]);
    if (part.value.is_infinite()) return part;
    total = total + part.value;
  }
  return {total, {}};
}

double normalise_zero(double v) { return v == 0.0 ? 0.0 : v; }

bool lex_less(const DualPair& a, const DualPair& b) {
  const auto ay = a.yhat.values();
  const auto by = b.yhat.values();
  if (!std::ranges::equal(ay, by)) return std::ranges::lexicographical_compare(ay, by);
  return std::ranges::lexicographical_compare(a.xhat_block_sums.values(), b.xhat_block_sums.values());
}

std::vector<double> grid_axis(double ymax, double step) {
  const auto n = static_cast<long long>(std::floor(ymax / step + 1e-9));
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(n + 1));
  for (long long m = 0; m <= n; ++m) axis.push_back(static_cast<double>(m) * step);
  return axis;
}

}  // namespace

ComponentVector matching_block_sums(const ClusteringFunction& f, const ComponentVector& yhat,
                                    const ScenarioVector& x) {
  require_dimension(f.space().components(), yhat.size(), "matching_block_sums");
  const auto s = block_sum(x);
  std::vector<double> out(yhat.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double k = static_cast<double>(f.space().scenarios(i));
    out[i] = normalise_zero(yhat[i] * f.gamma()[i] * f.link_derivative(s[i] / k) / k);
  }
  return ComponentVector(std::move(out));
}

PenaltyValue penalty_alpha(const ComplexRiskStatistic& rho, const DualPair& pair,
                           const PenaltyOptions& options) {
  const std::size_t d = rho.space().components();
  require_dimension(d, pair.yhat.size(), "penalty_alpha yhat");
  require_dimension(d, pair.xhat_block_sums.size(), "penalty_alpha block sums");

  PenaltyValue out;
  out.method = options.method;
  for (std::size_t i = 0; i < d; ++i) {
    if (pair.yhat[i] < 0.0) {
      out.value = out.simple_part = out.clustering_part = ExtendedReal::infinity();
      out.unbounded = "yhat[" + std::to_string(i) + "] < 0: sup over y >= phi(Y) is unbounded";
      return out;
    }
  }
  out.simple_part = indicator::simple_support(rho.simple(), -1.0, pair.yhat);
  std::vector<double> negated(d);
  for (std::size_t i = 0; i < d; ++i) negated[i] = -pair.yhat[i];
  const BlockSup clustering =
      clustering_support_impl(rho.clustering(), ComponentVector(std::move(negated)), pair.xhat_block_sums, options);
  out.clustering_part = clustering.value;
  out.value = out.simple_part + out.clustering_part;
  if (out.simple_part.is_infinite()) {
    out.unbounded = "yhat outside the domain of the conjugate of " + rho.simple().name();
  } else if (clustering.value.is_infinite()) {
    out.unbounded = clustering.unbounded;
  }
  return out;
}

double dual_objective(const ComplexRiskStatistic& rho, const DualPair& pair, const ScenarioVector& x,
                      const PenaltyOptions& options) {
  const PenaltyValue alpha = penalty_alpha(rho, pair, options);
  if (!alpha.finite()) return -kInf;
  return inner_component(pair.xhat_block_sums, block_sum(x)) - alpha.value.raw();
}

DualResult dual_evaluate(const ComplexRiskStatistic& rho, const ScenarioVector& x, const DualSearch& search) {
  if (!(x.space() == rho.space())) throw ShapeError("dual_evaluate: scenario space mismatch");
  if (!(search.step > 0.0)) throw std::invalid_argument("dual_evaluate: step must be > 0");
  const std::size_t d = rho.space().components();
  const auto s = block_sum(x);

  DualResult out;
  out.value = -kInf;
  auto consider = [&](ComponentVector yhat) {
    ++out.candidates;
    DualPair pair{yhat, matching_block_sums(rho.clustering(), yhat, x)};
    PenaltyValue alpha = penalty_alpha(rho, pair, search.penalty);
    if (!alpha.finite()) return;
    ++out.finite_candidates;
    const double value = inner_component(pair.xhat_block_sums, s) - alpha.value.raw();
    if (!out.argmax || value > out.value || (value == out.value && lex_less(pair, *out.argmax))) {
      out.value = value;
      out.argmax = std::move(pair);
      out.alpha = std::move(alpha);
    }
  };

  if (search.include_analytic) {
    consider(conjugate_maximizer(rho.simple(), rho.clustering().evaluate(x)));
  }

  const auto axis = grid_axis(search.ymax, search.step);
  const double total = std::pow(static_cast<double>(axis.size()), static_cast<double>(d));
  std::vector<double> point(d);
  if (total <= static_cast<double>(search.max_grid_points)) {
    std::vector<std::size_t> index(d, 0);
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < d; ++i) point[i] = axis[index[i]];
      consider(ComponentVector(point));
      std::size_t i = d;
      for (;;) {
        if (i == 0) {
          done = true;
          break;
        }
        --i;
        if (++index[i] < axis.size()) break;
        index[i] = 0;
      }
    }
  } else {
    out.subsampled = true;
    Rng rng(search.seed);
    for (std::size_t n = 0; n < search.max_grid_points; ++n) {
      for (std::size_t i = 0; i < d; ++i) point[i] = axis[rng.below(axis.size())];
      consider(ComponentVector(point));
    }
  }
  if (!out.argmax) out.diagnostic = "no candidate dual pair has finite penalty";
  return out;
}

AxiomReport weak_duality_check(const ComplexRiskStatistic& rho, const ScenarioVector& x,
                               const TrialSpec& spec) {
  if (!(x.space() == rho.space())) throw ShapeError("weak_duality_check: scenario space mismatch");
  auto report = AxiomReport::start(Check::weak_duality, spec);
  const auto& simple = rho.simple();
  const std::size_t d = rho.space().components();
  const ExtendedReal value = rho.evaluate(x);
  const auto s = block_sum(x);
  const auto axis = grid_axis(4.0, 0.05);
  const std::uint64_t max_draws = 100 * spec.trials + 1000;

  // One stream for the whole check: reseeding the engine per draw dominated the cost.
  Rng rng(spec.seed);
  for (std::uint64_t draw = 0; draw < max_draws && report.checked() < spec.trials; ++draw) {
    std::vector<double> y(d);
    const double kind = rng.unit();
    if (kind < 0.3) {
      for (double& e : y) e = axis[rng.below(axis.size())];
    } else if (kind < 0.65) {
      y = simple.conjugate_domain() == ConjugateDomain::point
              ? std::vector<double>(simple.weights().begin(), simple.weights().end())
              : sampling::simplex_point(rng, d).vector();
    } else {
      y = conjugate_maximizer(simple, sampling::component(rng, d)).vector();
    }
    ComponentVector yhat(std::move(y));
    ComponentVector shat = rng.unit() < 0.8
                               ? matching_block_sums(rho.clustering(), yhat, sampling::scenario(rng, rho.space()))
                               : sampling::component(rng, d);
    const DualPair pair{std::move(yhat), std::move(shat)};
    const PenaltyValue alpha = penalty_alpha(rho, pair);
    if (!alpha.finite()) {
      report.record_skip();
      continue;
    }
    const double objective = inner_component(pair.xhat_block_sums, s) - alpha.value.raw();
    if (value.is_infinite()) ++report.infinite;
    report.record(value.is_infinite() ? -kInf : objective - value.raw());
  }
  return report;
}

GapResult duality_gap(const ComplexRiskStatistic& rho, const ScenarioVector& x, const DualSearch& search) {
  GapResult out;
  out.primal = eval_complex(rho, x);
  out.dual = dual_evaluate(rho, x, search);
  if (out.primal.is_infinite() || out.dual.value == -kInf) {
    out.raw = kInf;
  } else {
    out.raw = out.primal.raw() - out.dual.value;
  }
  out.gap = std::max(0.0, out.raw);
  return out;
}

// ---------------------------------------------------------------------------

namespace indicator {

ExtendedReal simple_set(const SimpleRiskStatistic& r, double c, const ComponentVector& x) {
  return accepts_simple(r, c, x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
}

ExtendedReal clustering_set(const ClusteringFunction& f, const ComponentVector& y, const ScenarioVector& x) {
  return accepts_clustering(f, y, x) ? ExtendedReal(0.0) : ExtendedReal::infinity();
}

ExtendedReal simple_support(const SimpleRiskStatistic& r, double chat, const ComponentVector& xhat) {
  require_dimension(r.dimension(), xhat.size(), "simple_support");
  if (chat > 0.0) return ExtendedReal::infinity();  // c' -> +inf stays in the set
  if (chat == 0.0) {
    // Catalog statistics are finite on all of R^d.
    const bool zero = std::ranges::all_of(xhat.values(), [](double v) { return v == 0.0; });
    return zero ? ExtendedReal(0.0) : ExtendedReal::infinity();
  }
  // Perspective of the conjugate: t rho*(xhat / t) with t = -chat.
  const double t = -chat;
  std::vector<double> scaled(xhat.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = xhat[i] / t;
  return t * conjugate_simple(r, ComponentVector(std::move(scaled)));
}

ExtendedReal clustering_support(const ClusteringFunction& f, const ComponentVector& yhat,
                                const ComponentVector& xhat_block_sums, const PenaltyOptions& options) {
  return clustering_support_impl(f, yhat, xhat_block_sums, options).value;
}

double simple_biconjugate(const SimpleRiskStatistic& r, double c, const ComponentVector& x,
                          const BiconjugateSearch& search) {
  require_dimension(r.dimension(), x.size(), "simple_biconjugate");
  const std::size_t d = r.dimension();
  std::vector<ComponentVector> directions;
  if (r.conjugate_domain() == ConjugateDomain::point) {
    directions.emplace_back(std::vector<double>(r.weights().begin(), r.weights().end()));
  } else if (r.conjugate_domain() == ConjugateDomain::simplex) {
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> e(d, 0.0);
      e[i] = 1.0;
      directions.emplace_back(std::move(e));
    }
    Rng rng(search.seed);
    for (std::size_t n = 0; n < search.simplex_samples; ++n) directions.push_back(sampling::simplex_point(rng, d));
  } else {
    throw UnsupportedError("simple_biconjugate: statistic '" + r.name() + "' has no conjugate");
  }

  double best = 0.0;  // the origin (chat, xhat) = (0, 0)
  for (const auto& y : directions) {
    for (int e = search.min_scale_log2; e <= search.max_scale_log2; ++e) {
      const double t = std::ldexp(1.0, e);
      std::vector<double> xhat(d);
      for (std::size_t i = 0; i < d; ++i) xhat[i] = t * y[i];
      const ComponentVector dir(std::move(xhat));
      const ExtendedReal support = simple_support(r, -t, dir);
      if (support.is_infinite()) continue;
      best = std::max(best, -t * c + inner_component(dir, x) - support.raw());
    }
  }
  return best;
}

}  // namespace indicator

}  // namespace cxrisk
