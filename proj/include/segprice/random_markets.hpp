#pragma once

#include <random>

#include "segprice/market.hpp"

namespace segprice {

// Random market with common bounded support whose per-segment profits are
// concave: mixtures of uniforms sharing the upper support end and concave
// piecewise-linear survival ramps. Every draw is grid-certified concave
// before being returned. Deterministic under the caller's engine state.
MarketInstance random_concave_market(std::mt19937_64& rng,
                                     int max_segments = 16);

// Random market of purely atomic segments (1..max_atoms values each) for
// enumeration cross-checks.
MarketInstance random_atomic_market(std::mt19937_64& rng,
                                    int max_segments = 3, int max_atoms = 5);

}  // namespace segprice
