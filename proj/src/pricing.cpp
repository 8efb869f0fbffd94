#include "segprice/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "segprice/shape.hpp"

namespace segprice {

namespace {

constexpr Real kGoldenRatio = 0.61803398874989484820L;
constexpr Real kGoldenTol = 1e-10L;

Real tie_eps(Real best) {
  return 64 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::fabs(best));
}

// Keeps the lowest price among near-equal profits: callers offer points in
// ascending price order and only a strictly better profit replaces the
// incumbent.
struct AscendingScan {
  bool seen = false;
  Real price = 0;
  Real profit = 0;

  void offer(Real p, Real f) {
    if (!seen || f > profit + tie_eps(profit)) {
      seen = true;
      price = p;
      profit = f;
    }
  }
};

template <typename F>
PricePoint golden_max(const F& f, Real a, Real b) {
  Real x1 = b - kGoldenRatio * (b - a);
  Real x2 = a + kGoldenRatio * (b - a);
  Real f1 = f(x1);
  Real f2 = f(x2);
  int guard = 0;
  while (b - a > kGoldenTol * std::max<Real>(1, std::fabs(a) + std::fabs(b)) &&
         ++guard < 400) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? PricePoint{x1, f1} : PricePoint{x2, f2};
}

bool purely_atomic(const SegmentDistribution& d) {
  return !d.has_density() && !d.atoms().empty();
}

// Upper end of the search interval; throws when an unbounded support cannot
// be capped soundly.
Real search_cap(const SegmentDistribution& d, Real cost, const SearchOptions& opt) {
  if (d.bounded()) return d.support_hi();
  if (opt.price_cap) return *opt.price_cap;
  if (cost == 0 && d.kind() == DistKind::PiecewiseCdf) {
    const auto& tail = d.pieces().back();
    if (tail.hi == kInfinity && tail.form == PieceForm::LinearOverP && tail.c1 == 0) {
      return tail.lo + std::max<Real>(1, tail.lo);
    }
  }
  throw std::invalid_argument(
      "optimal price search: unbounded support requires a price cap");
}

struct SearchOutcome {
  PricePoint best;
  Real best_candidate_profit = 0;
};

// Shared maximizer over [lo, hi]: exact candidates first, then a dense grid
// and a golden polish which must strictly beat them. Kinks and atoms are
// evaluated in closed form, so a grid point that merely ties a candidate
// never displaces it.
template <typename F>
SearchOutcome grid_candidate_search(const F& f, Real lo, Real hi,
                                    std::vector<Real> candidates, int grid_n) {
  AscendingScan scan;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (Real p : candidates) {
    if (p < lo || p > hi) continue;
    scan.offer(p, f(p));
  }
  const Real best_candidate = scan.seen ? scan.profit : -kInfinity;

  if (hi <= lo) {
    if (!scan.seen) scan.offer(lo, f(lo));
    SearchOutcome out;
    out.best = {scan.price, scan.profit};
    out.best_candidate_profit = best_candidate;
    return out;
  }

  const Real step = (hi - lo) / (grid_n - 1);
  int best_grid_idx = 0;
  Real best_grid_profit = -kInfinity;
  for (int i = 0; i < grid_n; ++i) {
    const Real p = i + 1 == grid_n ? hi : lo + step * i;
    const Real fp = f(p);
    scan.offer(p, fp);
    if (fp > best_grid_profit) {
      best_grid_profit = fp;
      best_grid_idx = i;
    }
  }

  // Polish inside the cells bracketing the best grid point.
  const Real bl = lo + step * std::max(0, best_grid_idx - 1);
  const Real bh = std::min(hi, lo + step * (best_grid_idx + 1));
  const PricePoint polished = golden_max(f, bl, bh);
  scan.offer(polished.price, polished.profit);

  SearchOutcome out;
  out.best = {scan.price, scan.profit};
  out.best_candidate_profit = best_candidate;
  return out;
}

}  // namespace

PricePoint optimal_segment_price(const SegmentDistribution& dist, Real cost,
                                 const SearchOptions& opt) {
  if (opt.grid_n < 2) throw std::invalid_argument("optimal_segment_price: grid_n < 2");
  const Real lo = cost;
  const Real hi = search_cap(dist, cost, opt);
  const auto profit_at = [&](Real p) { return (p - cost) * dist.survival(p); };

  if (purely_atomic(dist)) {
    AscendingScan scan;
    scan.offer(lo, 0);
    for (Real a : dist.atoms()) {
      if (a >= lo && a <= hi) scan.offer(a, profit_at(a));
    }
    return {scan.price, scan.profit};
  }

  std::vector<Real> cands = dist.candidate_prices();
  cands.push_back(lo);
  if (std::isfinite(hi)) cands.push_back(hi);
  return grid_candidate_search(profit_at, lo, hi, std::move(cands), opt.grid_n).best;
}

namespace {

UniformPriceResult uniform_price_impl(const MarketInstance& m, const SearchOptions& opt,
                                      std::span<const Real> extra_candidates,
                                      bool add_segment_optima) {
  if (opt.grid_n < 2) throw std::invalid_argument("optimal_uniform_price: grid_n < 2");
  const Real cost = m.cost();
  const auto profit_at = [&](Real p) { return uniform_market_profit(m, p); };

  Real hi = cost;
  Real tail_anchor = cost;
  bool unbounded = false;
  for (const auto& s : m.segments()) {
    const Real cap = search_cap(s.dist, cost, opt);
    hi = std::max(hi, cap);
    if (!s.dist.bounded()) {
      unbounded = true;
      tail_anchor = std::max(tail_anchor, s.dist.pieces().back().lo);
    }
  }
  if (unbounded && !opt.price_cap) {
    // Flat tails only: past every landmark the aggregate profit must have
    // stopped growing, otherwise the supremum is not attained.
    const Real at_anchor = profit_at(tail_anchor);
    const Real at_cap = profit_at(hi);
    if (at_cap > at_anchor + 1e-9L * std::max<Real>(1, std::fabs(at_anchor))) {
      throw std::invalid_argument(
          "optimal_uniform_price: profit still increasing at the self-imposed cap");
    }
  }

  std::vector<Real> cands;
  bool all_atomic = true;
  for (const auto& s : m.segments()) {
    auto c = s.dist.candidate_prices();
    cands.insert(cands.end(), c.begin(), c.end());
    if (!purely_atomic(s.dist)) all_atomic = false;
    if (add_segment_optima && !purely_atomic(s.dist)) {
      cands.push_back(optimal_segment_price(s.dist, cost, opt).price);
    }
  }
  cands.insert(cands.end(), extra_candidates.begin(), extra_candidates.end());
  cands.push_back(cost);

  UniformPriceResult res;
  if (all_atomic) {
    // Exact enumeration over atom locations.
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    AscendingScan scan;
    scan.offer(cost, 0);
    for (Real p : cands) {
      if (p >= cost && p <= hi) scan.offer(p, profit_at(p));
    }
    res.price = scan.price;
    res.profit = scan.profit;
    return res;
  }

  if (std::isfinite(hi)) cands.push_back(hi);
  const auto out = grid_candidate_search(profit_at, cost, hi, std::move(cands), opt.grid_n);
  res.price = out.best.price;
  res.profit = out.best.profit;
  res.grid_beat_candidates =
      out.best.profit >
      out.best_candidate_profit +
          1e-6L * std::max<Real>(1, std::fabs(out.best_candidate_profit));
  return res;
}

}  // namespace

UniformPriceResult optimal_uniform_price(const MarketInstance& m, const SearchOptions& opt,
                                         std::span<const Real> extra_candidates) {
  return uniform_price_impl(m, opt, extra_candidates, /*add_segment_optima=*/true);
}

namespace {

Real checked_theta_bar(const MarketInstance& m, Real theta_bar, const char* who) {
  for (const auto& s : m.segments()) {
    const Real hi = s.dist.support_hi();
    if (!(std::isfinite(hi)) ||
        std::fabs(hi - theta_bar) > 1e-9L * std::max<Real>(1, std::fabs(theta_bar))) {
      throw std::invalid_argument(std::string(who) +
                                  ": segments must share the bounded upper support end");
    }
  }
  if (!(theta_bar >= m.cost())) {
    throw std::invalid_argument(std::string(who) + ": theta_bar below cost");
  }
  return theta_bar;
}

}  // namespace

PricePoint midpoint_price_profit(const MarketInstance& m, Real theta_bar) {
  checked_theta_bar(m, theta_bar, "midpoint_price_profit");
  const Real p = (m.cost() + theta_bar) / 2;
  return {p, uniform_market_profit(m, p)};
}

Real lower_envelope_value(Real cost, Real theta_bar, std::span<const PricePoint> peaks,
                          Real p) {
  if (p < cost || p > theta_bar) return 0;
  Real total = 0;
  for (const auto& peak : peaks) {
    const Real pk = peak.price;
    const Real r = peak.profit;
    if (r <= 0) continue;
    Real value;
    if (pk <= cost) {
      value = r * (theta_bar - p) / (theta_bar - cost);
    } else if (pk >= theta_bar) {
      value = r * (p - cost) / (theta_bar - cost);
    } else if (p <= pk) {
      value = r * (p - cost) / (pk - cost);
    } else {
      value = r * (theta_bar - p) / (theta_bar - pk);
    }
    total += value;
  }
  return total;
}

Real lower_envelope_profit(const MarketInstance& m, Real theta_bar) {
  checked_theta_bar(m, theta_bar, "lower_envelope_profit");
  std::vector<PricePoint> peaks;
  peaks.reserve(m.size());
  for (const auto& s : m.segments()) {
    const auto best = optimal_segment_price(s.dist, m.cost());
    peaks.push_back({best.price, s.weight * best.profit});
  }
  Real best = 0;
  for (const auto& peak : peaks) {
    best = std::max(best, lower_envelope_value(m.cost(), theta_bar, peaks, peak.price));
  }
  return best;
}

Real random_pricing_expectation(const MarketInstance& m, Real theta_bar, int quad_n) {
  if (quad_n < 2) throw std::invalid_argument("random_pricing_expectation: quad_n < 2");
  checked_theta_bar(m, theta_bar, "random_pricing_expectation");
  const Real cost = m.cost();
  if (theta_bar <= cost) return 0;

  std::vector<Real> splits{cost, theta_bar};
  for (const auto& s : m.segments()) {
    for (Real p : s.dist.candidate_prices()) {
      if (p > cost && p < theta_bar) splits.push_back(p);
    }
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  const Real total_len = theta_bar - cost;
  Real integral = 0;
  for (std::size_t s = 0; s + 1 < splits.size(); ++s) {
    const Real a = splits[s];
    const Real b = splits[s + 1];
    int panels = (int)std::llround((long double)quad_n * (b - a) / total_len);
    panels = std::max(2, panels);
    if (panels % 2) ++panels;
    const Real h = (b - a) / panels;
    // Left endpoint uses the right limit so an atom exactly at a subinterval
    // boundary is integrated on its own side only.
    Real acc = uniform_market_profit_above(m, a) + uniform_market_profit(m, b);
    for (int j = 1; j < panels; ++j) {
      acc += uniform_market_profit(m, a + h * j) * (j % 2 ? 4 : 2);
    }
    integral += acc * h / 3;
  }
  return integral / total_len;
}

PricingReport analyze(const MarketInstance& m, const AnalyzeOptions& opt) {
  PricingReport rep;
  const SearchOptions sopt{opt.grid_n, std::nullopt};
  const Real cost = m.cost();

  std::vector<PricePoint> seg_best;
  seg_best.reserve(m.size());
  for (const auto& s : m.segments()) {
    seg_best.push_back(optimal_segment_price(s.dist, cost, sopt));
  }

  const auto common_hi = m.common_support_hi();
  const bool common_bounded = common_hi.has_value() && m.all_bounded();

  std::vector<Real> extras;
  for (const auto& b : seg_best) extras.push_back(b.price);
  if (common_bounded) extras.push_back((cost + *common_hi) / 2);
  const auto uni = uniform_price_impl(m, sopt, extras, /*add_segment_optima=*/false);
  rep.pi_uniform = uni.profit;
  rep.uniform_price = uni.price;
  if (uni.grid_beat_candidates) {
    rep.notes.push_back(
        "uniform-price grid search beat every exact candidate by more than 1e-6; "
        "the reported optimum may sit between closed-form evaluation points");
  }

  // The shared prices are feasible for every segment, so folding them into
  // the per-segment maxima can only tighten the discrimination benchmark.
  for (std::size_t k = 0; k < m.size(); ++k) {
    for (Real p : {uni.price, common_bounded ? (cost + *common_hi) / 2 : uni.price}) {
      const Real f = segment_profit(m.segment(k).dist, cost, p);
      if (f > seg_best[k].profit) seg_best[k] = {p, f};
    }
  }

  for (std::size_t k = 0; k < m.size(); ++k) {
    rep.per_segment_prices.push_back(seg_best[k].price);
    rep.per_segment_profits.push_back(m.segment(k).weight * seg_best[k].profit);
    rep.pi_star += rep.per_segment_profits.back();
  }

  if (common_bounded) {
    const auto mid = midpoint_price_profit(m, *common_hi);
    rep.midpoint_price = mid.price;
    rep.pi_midpoint = mid.profit;
    rep.pi_random_expect = random_pricing_expectation(m, *common_hi, opt.quad_n);
    const auto diag = diagnose_shape(m, opt.shape_grid_n);
    if (diag.all_concave()) {
      rep.pi_lower_envelope = lower_envelope_profit(m, *common_hi);
    }
  }

  rep.ratio = rep.pi_star > 0 ? rep.pi_uniform / rep.pi_star : 1;
  return rep;
}

}  // namespace segprice
