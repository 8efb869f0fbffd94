#include "segprice/random_markets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "segprice/shape.hpp"

namespace segprice {

namespace {

Real uniform_in(std::mt19937_64& rng, Real lo, Real hi) {
  // 53 random bits; plenty for instance sampling and stable across platforms
  const Real u = (Real)(rng() >> 11) / (Real)(1ull << 53);
  return lo + (hi - lo) * u;
}

int int_in(std::mt19937_64& rng, int lo, int hi) {
  return lo + (int)(rng() % (std::uint64_t)(hi - lo + 1));
}

// Mixture of uniforms on [a_j, theta_bar]: the survival is piecewise linear,
// flat at 1 before the first a_j, with slopes that only get steeper.
SegmentDistribution uniform_mixture(std::mt19937_64& rng, Real theta_bar) {
  const int comps = int_in(rng, 2, 3);
  std::vector<Real> starts(comps), w(comps);
  Real wsum = 0;
  for (int j = 0; j < comps; ++j) {
    starts[j] = uniform_in(rng, 0, 0.85L * theta_bar);
    w[j] = uniform_in(rng, 0.2L, 1);
    wsum += w[j];
  }
  for (auto& x : w) x /= wsum;
  std::sort(starts.begin(), starts.end());

  std::vector<SurvivalPiece> pieces;
  if (starts.front() > 0) {
    pieces.push_back({PieceForm::LinearSurvival, 0, starts.front(), 1, 0});
  }
  Real level = 1;
  for (int j = 0; j < comps; ++j) {
    const Real lo = starts[j];
    const Real hi = j + 1 < comps ? starts[j + 1] : theta_bar;
    Real slope = 0;
    for (int i = 0; i <= j; ++i) slope -= w[i] / (theta_bar - starts[i]);
    if (hi > lo) {
      pieces.push_back({PieceForm::LinearSurvival, lo, hi, level - slope * lo, slope});
      level += slope * (hi - lo);
    }
  }
  return SegmentDistribution::piecewise(std::move(pieces));
}

// Piecewise-linear survival ramp from 1 at 0 to 0 at theta_bar with
// nonincreasing slopes.
SegmentDistribution concave_ramp(std::mt19937_64& rng, Real theta_bar) {
  const int knots = int_in(rng, 1, 4);
  std::vector<Real> xs{0};
  for (int j = 0; j < knots; ++j) xs.push_back(uniform_in(rng, 0.05L * theta_bar, 0.95L * theta_bar));
  xs.push_back(theta_bar);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const std::size_t n = xs.size() - 1;
  std::vector<Real> steep(n);
  Real weighted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    steep[i] = uniform_in(rng, 0.1L, 1) + (i ? steep[i - 1] : 0);  // strictly increasing
    weighted += steep[i] * (xs[i + 1] - xs[i]);
  }
  std::vector<SurvivalPiece> pieces;
  Real level = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Real slope = -steep[i] / weighted;  // total drop scales to exactly 1
    pieces.push_back({PieceForm::LinearSurvival, xs[i], xs[i + 1], level - slope * xs[i], slope});
    level += slope * (xs[i + 1] - xs[i]);
  }
  return SegmentDistribution::piecewise(std::move(pieces));
}

std::vector<Real> random_weights(std::mt19937_64& rng, int k) {
  std::vector<Real> w(k);
  Real sum = 0;
  for (auto& x : w) {
    x = uniform_in(rng, 0.2L, 1);
    sum += x;
  }
  Real partial = 0;
  for (int i = 0; i + 1 < k; ++i) {
    w[i] /= sum;
    partial += w[i];
  }
  w[k - 1] = 1 - partial;  // exact unit total
  return w;
}

}  // namespace

MarketInstance random_concave_market(std::mt19937_64& rng, int max_segments) {
  if (max_segments < 1) throw std::invalid_argument("random_concave_market: max_segments < 1");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int k = int_in(rng, 1, max_segments);
    const Real theta_bar = uniform_in(rng, 0.5L, 4);
    const Real cost = rng() % 10 < 7 ? 0 : uniform_in(rng, 0, 0.15L * theta_bar);
    const auto weights = random_weights(rng, k);

    std::vector<Segment> segs;
    for (int i = 0; i < k; ++i) {
      switch (int_in(rng, 0, 2)) {
        case 0:
          segs.push_back({weights[i], SegmentDistribution::uniform(
                                          uniform_in(rng, 0, 0.8L * theta_bar), theta_bar)});
          break;
        case 1:
          segs.push_back({weights[i], uniform_mixture(rng, theta_bar)});
          break;
        default:
          segs.push_back({weights[i], concave_ramp(rng, theta_bar)});
          break;
      }
    }
    MarketInstance m(std::move(segs), cost);
    const auto diag = diagnose_shape(m, 128);
    if (diag.common_support && diag.bounded_support && diag.all_concave()) return m;
  }
  throw std::logic_error("random_concave_market: certification kept failing");
}

MarketInstance random_atomic_market(std::mt19937_64& rng, int max_segments, int max_atoms) {
  const int k = int_in(rng, 1, max_segments);
  const auto weights = random_weights(rng, k);
  std::vector<Segment> segs;
  for (int i = 0; i < k; ++i) {
    const int atoms = int_in(rng, 1, max_atoms);
    std::vector<Real> values(atoms);
    Real v = uniform_in(rng, 0.05L, 2);
    for (int j = 0; j < atoms; ++j) {
      values[j] = v;
      v += uniform_in(rng, 0.05L, 2);
    }
    if (atoms == 1) {
      segs.push_back({weights[i], SegmentDistribution::dirac(values[0])});
      continue;
    }
    std::vector<Real> masses(atoms);
    Real sum = 0;
    for (auto& x : masses) {
      x = uniform_in(rng, 0.1L, 1);
      sum += x;
    }
    Real partial = 0;
    for (int j = 0; j + 1 < atoms; ++j) {
      masses[j] /= sum;
      partial += masses[j];
    }
    masses[atoms - 1] = 1 - partial;
    segs.push_back({weights[i], SegmentDistribution::discrete(values, masses)});
  }
  return MarketInstance(std::move(segs), 0);
}

}  // namespace segprice
