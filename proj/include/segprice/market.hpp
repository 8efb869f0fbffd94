#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "segprice/distribution.hpp"

namespace segprice {

struct Segment {
  Real weight;
  SegmentDistribution dist;
};

// Weighted collection of segments facing one seller with constant marginal
// cost. Weights must be nonnegative and sum to 1 within 1e-12, and the cost
// may not exceed any segment's top value (otherwise no efficient sale exists
// in that segment). Immutable; safe to share across threads.
class MarketInstance {
 public:
  MarketInstance(std::vector<Segment> segments, Real cost);

  std::size_t size() const { return segments_.size(); }
  const Segment& segment(std::size_t k) const { return segments_[k]; }
  const std::vector<Segment>& segments() const { return segments_; }
  Real cost() const { return cost_; }

  Real max_support_hi() const;
  bool all_bounded() const;
  // The shared upper support end, or nullopt when segments disagree.
  std::optional<Real> common_support_hi() const;

 private:
  std::vector<Segment> segments_;
  Real cost_;
};

// (price - cost) * Pr[value >= price]. Throws std::domain_error for prices
// below cost; callers needing negative margins must extend the range
// explicitly.
Real segment_profit(const SegmentDistribution& dist, Real cost, Real price);

// Weighted sum of per-segment profits at a per-segment price vector.
Real market_profit(const MarketInstance& m, std::span<const Real> prices);

// Profit when every segment is offered the same price.
Real uniform_market_profit(const MarketInstance& m, Real price);
// Same but with atom mass at `price` excluded (right limit); used by
// quadrature at subinterval starts.
Real uniform_market_profit_above(const MarketInstance& m, Real price);

}  // namespace segprice
