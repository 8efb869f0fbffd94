#pragma once

#include <span>
#include <vector>

#include "segprice/market.hpp"

namespace segprice {

// Interim types for the two-period contracting problem: the buyer first
// learns her type (a segment), then her value. Requires a zero-cost market
// with common bounded support. The value axis is discretized for the
// threshold search.
class ScreeningInstance {
 public:
  explicit ScreeningInstance(MarketInstance market, int grid_n = 50);

  const MarketInstance& market() const { return market_; }
  std::size_t types() const { return market_.size(); }
  Real theta_bar() const { return theta_bar_; }
  const std::vector<Real>& grid() const { return grid_; }
  // All types expose a density (needed by the rent and threshold machinery;
  // the static profit works without one).
  bool has_densities() const;

 private:
  MarketInstance market_;
  Real theta_bar_;
  std::vector<Real> grid_;
};

struct ScreeningReport {
  Real pi_static = 0;         // one posted price for every type
  Real pi_seq_threshold = 0;  // best deterministic threshold menu found;
                              // a lower bound on the sequential optimum
  Real pi_star_bound = 0;     // discrimination profit, upper bound
  std::vector<Real> thresholds;
  std::vector<Real> base_utilities;
};

// Best profit from a single posted price across types; coincides with the
// optimal uniform price profit.
Real static_profit(const ScreeningInstance& s);

struct RentFloorResult {
  bool feasible = false;
  std::vector<Real> u;
};

// Componentwise-minimal nonnegative base utilities satisfying every pairwise
// interim truth-telling constraint for the given threshold allocations,
// found by iterated relaxation of the difference-constraint system.
// Infeasible (positive-gain cycle) profiles report feasible = false.
RentFloorResult interim_rent_floor(std::span<const Real> thresholds,
                                   const ScreeningInstance& s);

// Exhaustive grid search over threshold menus for K <= 3 (coordinate ascent
// from the static menu for larger K), always including the static menu at
// the exact posted price so the static profit is never undercut.
ScreeningReport threshold_seq_optimum(const ScreeningInstance& s);

}  // namespace segprice
