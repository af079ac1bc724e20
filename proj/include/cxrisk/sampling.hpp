#pragma once

#include "cxrisk/random.hpp"
#include "cxrisk/scenario.hpp"

namespace cxrisk::sampling {

/// Entries uniform in [lo, hi].
ComponentVector component(Rng& rng, std::size_t d, double lo = -5.0, double hi = 5.0);
ScenarioVector scenario(Rng& rng, const ScenarioSpace& space, double lo = -5.0, double hi = 5.0);

/// Uniform draw from the probability simplex.
ComponentVector simplex_point(Rng& rng, std::size_t d);

/// x + p with p_i uniform in [0, 5], so the result is >= x componentwise.
ComponentVector raise(Rng& rng, const ComponentVector& x);

/// A random Z whose every block sum is <= the matching block sum of `y`
/// (so Z >= Y in the scenario preorder). Entries are perturbed freely within
/// each block; only the block-sum direction is constrained.
ScenarioVector preorder_above(Rng& rng, const ScenarioVector& y);

/// A random Q whose every block sum is >= the matching block sum of `x`
/// (so X >= Q in the scenario preorder).
ScenarioVector preorder_below(Rng& rng, const ScenarioVector& x);

/// Redistributes mass inside each block (shuffle plus a transfer between two
/// entries), keeping block sums equal up to rounding.
ScenarioVector redistribute(Rng& rng, const ScenarioVector& x);

}  // namespace cxrisk::sampling
