#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segprice/market.hpp"

namespace segprice {

struct PricePoint {
  Real price = 0;
  Real profit = 0;
};

struct SearchOptions {
  // Dense-grid resolution; kinks and atoms are always evaluated exactly, so
  // the grid only needs to localize the optimum between them.
  int grid_n = 10'000;
  // Required for an unbounded support unless the distribution has a
  // flat-revenue tail at zero cost (then the search self-caps past the tail
  // start and asserts zero marginal gain).
  std::optional<Real> price_cap;
};

// Maximizer of the segment profit over [cost, support end]. Grid + exact
// candidate evaluation + golden-section polish; purely atomic distributions
// are enumerated exactly instead. Ties break toward the lowest price.
PricePoint optimal_segment_price(const SegmentDistribution& dist, Real cost,
                                 const SearchOptions& opt = {});

struct UniformPriceResult {
  Real price = 0;
  Real profit = 0;
  // True when the polished grid search beat every exact candidate by more
  // than 1e-6 (relative): a sign the instance's optimum sits away from any
  // kink, atom, or per-segment optimum, which none of the supported
  // closed-form families do.
  bool grid_beat_candidates = false;
};

// Maximizer of the aggregate profit over one shared price. Candidates
// include every per-segment optimal price, atom, and breakpoint, plus any
// caller-provided extras; ties break toward the lowest price.
UniformPriceResult optimal_uniform_price(const MarketInstance& m,
                                         const SearchOptions& opt = {},
                                         std::span<const Real> extra_candidates = {});

// p = (cost + theta_bar) / 2 and the aggregate profit there. All segments
// must share the upper support end theta_bar.
PricePoint midpoint_price_profit(const MarketInstance& m, Real theta_bar);

// Value at price p of the sum of per-segment triangles through (cost, 0),
// (peak price, peak weighted profit), (theta_bar, 0). Peaks at or outside
// (cost, theta_bar) degenerate to a single linear piece.
Real lower_envelope_value(Real cost, Real theta_bar,
                          std::span<const PricePoint> peaks, Real p);

// Max of the summed lower-envelope triangles over the per-segment optimal
// prices. Lower-bounds the optimal uniform profit whenever every segment's
// profit is concave on the common support.
Real lower_envelope_profit(const MarketInstance& m, Real theta_bar);

// Expected aggregate profit when the price is drawn uniformly from
// [cost, theta_bar]: composite Simpson with quad_n panels, split exactly at
// kinks and atoms. quad_n must be >= 2.
Real random_pricing_expectation(const MarketInstance& m, Real theta_bar,
                                int quad_n = 2048);

struct PricingReport {
  std::vector<Real> per_segment_prices;
  std::vector<Real> per_segment_profits;  // weighted: alpha_k * profit_k
  Real pi_star = 0;
  Real pi_uniform = 0;
  Real uniform_price = 0;
  // Present only with a common bounded support.
  std::optional<Real> midpoint_price;
  std::optional<Real> pi_midpoint;
  std::optional<Real> pi_random_expect;
  // Present only when additionally every segment is grid-certified concave.
  std::optional<Real> pi_lower_envelope;
  // pi_uniform / pi_star; 1 when pi_star is 0.
  Real ratio = 1;
  std::vector<std::string> notes;
};

struct AnalyzeOptions {
  int grid_n = 10'000;
  int quad_n = 2048;
  int shape_grid_n = 512;
};

// Full per-instance evaluation. Fields whose preconditions fail are left
// absent rather than raising.
PricingReport analyze(const MarketInstance& m, const AnalyzeOptions& opt = {});

}  // namespace segprice
