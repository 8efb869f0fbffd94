#include "segprice/shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segprice {

namespace {

constexpr Real kRelTol = 1e-9L;

Real scaled_tol(Real a, Real b, Real c) {
  return kRelTol * std::max({Real(1), std::fabs(a), std::fabs(b), std::fabs(c)});
}

// Evaluation cap when some support is unbounded: twice the largest finite
// landmark across the market.
Real grid_cap(const MarketInstance& m) {
  if (m.all_bounded()) return m.max_support_hi();
  Real landmark = 1;
  for (const auto& s : m.segments()) {
    const auto& d = s.dist;
    if (d.bounded()) landmark = std::max(landmark, d.support_hi());
    landmark = std::max(landmark, d.support_lo());
    for (const auto& pc : d.pieces()) {
      landmark = std::max(landmark, pc.lo);
      if (pc.hi < kInfinity) landmark = std::max(landmark, pc.hi);
    }
    for (Real a : d.atoms()) landmark = std::max(landmark, a);
  }
  return 2 * landmark;
}

}  // namespace

const char* to_string(ShapeFlag f) {
  switch (f) {
    case ShapeFlag::holds: return "yes";
    case ShapeFlag::fails: return "no";
    case ShapeFlag::not_evaluable: return "n/a";
  }
  return "?";
}

bool ShapeDiagnosis::all_concave() const {
  return std::all_of(concave_profit.begin(), concave_profit.end(),
                     [](bool b) { return b; });
}

ShapeDiagnosis diagnose_shape(const MarketInstance& m, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("diagnose_shape: grid_n must be >= 16");

  const Real lo = m.cost();
  const Real hi = grid_cap(m);
  ShapeDiagnosis diag;
  diag.grid_used = grid_n;
  diag.bounded_support = m.all_bounded();
  diag.common_support = m.common_support_hi().has_value();

  std::vector<Real> grid(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    grid[i] = lo + (hi - lo) * i / (grid_n - 1);
  }

  for (const auto& seg : m.segments()) {
    const auto& d = seg.dist;

    std::vector<Real> profit(grid_n);
    for (int i = 0; i < grid_n; ++i) {
      profit[i] = (grid[i] - lo) * d.survival(grid[i]);
    }
    bool concave = true;
    for (int i = 1; i + 1 < grid_n; ++i) {
      const Real d2 = profit[i + 1] - 2 * profit[i] + profit[i - 1];
      if (d2 > scaled_tol(profit[i - 1], profit[i], profit[i + 1])) {
        concave = false;
        break;
      }
    }
    diag.concave_profit.push_back(concave);

    if (!d.has_density()) {
      diag.regular.push_back(ShapeFlag::not_evaluable);
      diag.mhr.push_back(ShapeFlag::not_evaluable);
      continue;
    }

    // Virtual value p - S/f and inverse hazard S/f where the density is
    // usable: strictly inside the support and positive.
    std::vector<Real> phi, inv_hazard;
    for (int i = 0; i < grid_n; ++i) {
      const Real p = grid[i];
      if (p <= d.support_lo() || p >= d.support_hi()) continue;
      const auto f = d.density(p);
      if (!f || *f <= 0) continue;
      const Real ih = d.survival_above(p) / *f;
      inv_hazard.push_back(ih);
      phi.push_back(p - ih);
    }
    if (phi.size() < 2) {
      diag.regular.push_back(ShapeFlag::not_evaluable);
      diag.mhr.push_back(ShapeFlag::not_evaluable);
      continue;
    }
    bool regular = true, mhr = true;
    for (std::size_t i = 1; i < phi.size(); ++i) {
      if (phi[i] < phi[i - 1] - scaled_tol(phi[i - 1], phi[i], 0)) regular = false;
      if (inv_hazard[i] > inv_hazard[i - 1] + scaled_tol(inv_hazard[i - 1], inv_hazard[i], 0)) {
        mhr = false;
      }
    }
    diag.regular.push_back(regular ? ShapeFlag::holds : ShapeFlag::fails);
    diag.mhr.push_back(mhr ? ShapeFlag::holds : ShapeFlag::fails);
  }
  return diag;
}

}  // namespace segprice
