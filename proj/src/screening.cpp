#include "segprice/screening.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segprice/pricing.hpp"

namespace segprice {

namespace {

// Integral of Pr[value > z] over [a, b]: composite Simpson split exactly at
// the distribution's kinks and atoms. Spans covering many decades (the
// near-tight instances push the support end past 1e100) are additionally
// split geometrically: survival decays like 1/z out there and equal spacing
// would overestimate the integral by astronomical factors.
Real integrate_survival(const SegmentDistribution& d, Real a, Real b, int panels) {
  if (b <= a) return 0;
  std::vector<Real> splits{a, b};
  for (Real p : d.candidate_prices()) {
    if (p > a && p < b) splits.push_back(p);
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  std::vector<Real> refined;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    const Real lo = splits[i];
    const Real hi = splits[i + 1];
    refined.push_back(lo);
    if (lo > 0 && hi / lo > 10) {
      for (Real p = lo * 10; p < hi && p / hi < 1; p *= 10) refined.push_back(p);
    }
  }
  refined.push_back(splits.back());
  splits = std::move(refined);

  Real total = 0;
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    const Real lo = splits[i];
    const Real hi = splits[i + 1];
    int n = std::max(4, (int)std::llround((long double)panels * (hi - lo) / (b - a)));
    if (n % 2) ++n;
    const Real h = (hi - lo) / n;
    Real acc = d.survival_above(lo) + d.survival_above(hi);
    for (int j = 1; j < n; ++j) {
      acc += d.survival_above(lo + h * j) * (j % 2 ? 4 : 2);
    }
    total += acc * h / 3;
  }
  return total;
}

// Minimal nonnegative fixed point of u_k >= u_{k'} + D(k, k'); reports
// infeasibility when a positive-gain cycle keeps pushing utilities up.
RentFloorResult relax_rent_floor(const std::vector<std::vector<Real>>& gain, Real tol) {
  const std::size_t n = gain.size();
  RentFloorResult res;
  res.u.assign(n, 0);
  for (std::size_t round = 0; round + 1 <= n; ++round) {
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t kp = 0; kp < n; ++kp) {
        const Real need = res.u[kp] + gain[k][kp];
        if (need > res.u[k] + tol) {
          res.u[k] = need;
          changed = true;
        }
      }
    }
    if (!changed) {
      res.feasible = true;
      return res;
    }
  }
  // One verification pass: any remaining strict violation means a cycle.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t kp = 0; kp < n; ++kp) {
      if (res.u[kp] + gain[k][kp] > res.u[k] + tol) return res;
    }
  }
  res.feasible = true;
  return res;
}

}  // namespace

ScreeningInstance::ScreeningInstance(MarketInstance market, int grid_n)
    : market_(std::move(market)) {
  if (grid_n < 2) throw std::invalid_argument("ScreeningInstance: grid_n < 2");
  if (market_.cost() != 0) {
    throw std::invalid_argument("ScreeningInstance: the contracting model assumes zero cost");
  }
  // Types must live on a common bounded value interval [0, theta_bar];
  // individual supports may end earlier (their CDF is 1 from there on).
  if (!market_.all_bounded()) {
    throw std::invalid_argument("ScreeningInstance: bounded supports required");
  }
  theta_bar_ = market_.max_support_hi();
  grid_.resize(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    grid_[i] = theta_bar_ * i / (grid_n - 1);
  }
}

bool ScreeningInstance::has_densities() const {
  return std::all_of(market_.segments().begin(), market_.segments().end(),
                     [](const Segment& s) { return s.dist.has_density(); });
}

Real static_profit(const ScreeningInstance& s) {
  return optimal_uniform_price(s.market()).profit;
}

RentFloorResult interim_rent_floor(std::span<const Real> thresholds,
                                   const ScreeningInstance& s) {
  const std::size_t n = s.types();
  if (thresholds.size() != n) {
    throw std::invalid_argument("interim_rent_floor: one threshold per type");
  }
  for (Real t : thresholds) {
    if (!(t >= 0) || !(t <= s.theta_bar())) {
      throw std::invalid_argument("interim_rent_floor: threshold outside the support");
    }
  }
  const int panels = std::max<int>(64, 4 * (int)s.grid().size());
  // rent[k][j] = expected surplus of a type-k buyer under type-j's threshold
  std::vector<std::vector<Real>> rent(n, std::vector<Real>(n));
  Real scale = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      rent[k][j] =
          integrate_survival(s.market().segment(k).dist, thresholds[j], s.theta_bar(), panels);
      scale = std::max(scale, std::fabs(rent[k][j]));
    }
  }
  std::vector<std::vector<Real>> gain(n, std::vector<Real>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) gain[k][j] = rent[k][j] - rent[k][k];
  }
  return relax_rent_floor(gain, 1e-12L * scale);
}

namespace {

struct SearchTables {
  // suffix[k][i]: integral of type k's survival from grid[i] to theta_bar
  std::vector<std::vector<Real>> suffix;
  // revenue[k][i]: alpha_k * grid[i] * Pr_k[value >= grid[i]]
  std::vector<std::vector<Real>> revenue;
  Real scale = 1;
};

SearchTables build_tables(const ScreeningInstance& s) {
  const auto& grid = s.grid();
  const std::size_t n = s.types();
  const std::size_t g = grid.size();
  SearchTables t;
  t.suffix.assign(n, std::vector<Real>(g, 0));
  t.revenue.assign(n, std::vector<Real>(g, 0));
  const int cell_panels = 8;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& seg = s.market().segment(k);
    for (std::size_t i = g - 1; i-- > 0;) {
      t.suffix[k][i] = t.suffix[k][i + 1] +
                       integrate_survival(seg.dist, grid[i], grid[i + 1], cell_panels);
    }
    for (std::size_t i = 0; i < g; ++i) {
      t.revenue[k][i] = seg.weight * grid[i] * seg.dist.survival(grid[i]);
      t.scale = std::max(t.scale, t.suffix[k][i]);
    }
  }
  return t;
}

struct ProfileValue {
  bool feasible = false;
  Real objective = 0;
  std::vector<Real> u;
};

ProfileValue value_profile(const ScreeningInstance& s, const SearchTables& t,
                           std::span<const std::size_t> idx) {
  const std::size_t n = s.types();
  std::vector<std::vector<Real>> gain(n, std::vector<Real>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      gain[k][j] = t.suffix[k][idx[j]] - t.suffix[k][idx[k]];
    }
  }
  auto floor = relax_rent_floor(gain, 1e-12L * t.scale);
  ProfileValue v;
  if (!floor.feasible) return v;
  v.feasible = true;
  v.u = std::move(floor.u);
  for (std::size_t k = 0; k < n; ++k) {
    v.objective += t.revenue[k][idx[k]] - s.market().segment(k).weight * v.u[k];
  }
  return v;
}

}  // namespace

ScreeningReport threshold_seq_optimum(const ScreeningInstance& s) {
  const std::size_t n = s.types();
  const auto& grid = s.grid();
  const auto tables = build_tables(s);

  ScreeningReport rep;
  const auto uni = optimal_uniform_price(s.market());
  rep.pi_static = uni.profit;

  Real pi_star = 0;
  std::vector<Real> seg_optima;
  for (const auto& seg : s.market().segments()) {
    const auto best = optimal_segment_price(seg.dist, 0);
    seg_optima.push_back(best.price);
    pi_star += seg.weight * best.profit;
  }
  rep.pi_star_bound = pi_star;

  // The static menu at the exact posted price: zero rents by symmetry, so
  // the threshold optimum can never fall below the static profit.
  rep.pi_seq_threshold = uni.profit;
  rep.thresholds.assign(n, uni.price);
  rep.base_utilities.assign(n, 0);

  auto consider = [&](std::span<const std::size_t> idx) {
    const auto v = value_profile(s, tables, idx);
    if (v.feasible && v.objective > rep.pi_seq_threshold) {
      rep.pi_seq_threshold = v.objective;
      rep.thresholds.clear();
      for (std::size_t k = 0; k < n; ++k) rep.thresholds.push_back(grid[idx[k]]);
      rep.base_utilities = v.u;
    }
  };

  const std::size_t g = grid.size();
  if (n <= 3) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      consider(idx);
      std::size_t pos = 0;
      while (pos < n && ++idx[pos] == g) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
  } else {
    // Coordinate ascent from the best common grid threshold.
    std::size_t start = 0;
    Real best_common = -1;
    for (std::size_t i = 0; i < g; ++i) {
      Real sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += tables.revenue[k][i];
      if (sum > best_common) {
        best_common = sum;
        start = i;
      }
    }
    std::vector<std::size_t> idx(n, start);
    bool improved = true;
    Real best = value_profile(s, tables, idx).feasible
                    ? value_profile(s, tables, idx).objective
                    : -kInfinity;
    for (int sweep = 0; sweep < 32 && improved; ++sweep) {
      improved = false;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t keep = idx[k];
        std::size_t arg = keep;
        for (std::size_t i = 0; i < g; ++i) {
          idx[k] = i;
          const auto v = value_profile(s, tables, idx);
          if (v.feasible && v.objective > best + 1e-15L) {
            best = v.objective;
            arg = i;
            improved = true;
          }
        }
        idx[k] = arg;
      }
    }
    consider(idx);
  }

  // The rents from a discrimination-style menu at the per-segment optima.
  {
    const auto floor = interim_rent_floor(seg_optima, s);
    if (floor.feasible) {
      Real obj = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto& seg = s.market().segment(k);
        obj += seg.weight * (seg_optima[k] * seg.dist.survival(seg_optima[k]) - floor.u[k]);
      }
      if (obj > rep.pi_seq_threshold) {
        rep.pi_seq_threshold = obj;
        rep.thresholds = seg_optima;
        rep.base_utilities = floor.u;
      }
    }
  }

  if (rep.pi_seq_threshold > rep.pi_star_bound + 1e-9L * std::max<Real>(1, rep.pi_star_bound) ||
      rep.pi_static > rep.pi_seq_threshold + 1e-9L * std::max<Real>(1, rep.pi_seq_threshold)) {
    throw std::logic_error("threshold_seq_optimum: profit sandwich violated");
  }
  return rep;
}

}  // namespace segprice
