#include "segprice/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace segprice {

namespace {
constexpr Real kWeightTol = 1e-12L;
}

MarketInstance::MarketInstance(std::vector<Segment> segments, Real cost)
    : segments_(std::move(segments)), cost_(cost) {
  if (segments_.empty()) throw std::invalid_argument("MarketInstance: no segments");
  if (!(cost_ >= 0)) throw std::invalid_argument("MarketInstance: cost must be >= 0");
  Real total = 0;
  for (const auto& s : segments_) {
    if (!(s.weight >= 0)) throw std::invalid_argument("MarketInstance: negative weight");
    total += s.weight;
    if (cost_ > s.dist.support_hi()) {
      throw std::invalid_argument(
          "MarketInstance: cost exceeds a segment's top value (no efficient sale)");
    }
  }
  if (std::fabs(total - 1) > kWeightTol) {
    throw std::invalid_argument("MarketInstance: weights must sum to 1");
  }
}

Real MarketInstance::max_support_hi() const {
  Real hi = 0;
  for (const auto& s : segments_) hi = std::max(hi, s.dist.support_hi());
  return hi;
}

bool MarketInstance::all_bounded() const {
  for (const auto& s : segments_) {
    if (!s.dist.bounded()) return false;
  }
  return true;
}

std::optional<Real> MarketInstance::common_support_hi() const {
  const Real hi = segments_.front().dist.support_hi();
  const Real tol = 1e-12L * std::max<Real>(1, std::fabs(hi));
  for (const auto& s : segments_) {
    const Real h = s.dist.support_hi();
    if (h == kInfinity && hi == kInfinity) continue;
    if (std::fabs(h - hi) > tol) return std::nullopt;
  }
  return hi;
}

Real segment_profit(const SegmentDistribution& dist, Real cost, Real price) {
  if (price < cost) {
    throw std::domain_error("segment_profit: price below marginal cost");
  }
  return (price - cost) * dist.survival(price);
}

Real market_profit(const MarketInstance& m, std::span<const Real> prices) {
  if (prices.size() != m.size()) {
    throw std::invalid_argument("market_profit: one price per segment required");
  }
  Real total = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    total += m.segment(k).weight * segment_profit(m.segment(k).dist, m.cost(), prices[k]);
  }
  return total;
}

Real uniform_market_profit(const MarketInstance& m, Real price) {
  Real total = 0;
  for (const auto& s : m.segments()) {
    total += s.weight * segment_profit(s.dist, m.cost(), price);
  }
  return total;
}

Real uniform_market_profit_above(const MarketInstance& m, Real price) {
  Real total = 0;
  for (const auto& s : m.segments()) {
    total += s.weight * (price - m.cost()) * s.dist.survival_above(price);
  }
  return total;
}

}  // namespace segprice
