#include "segprice/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace segprice {

namespace {

constexpr Real kMassTol = 1e-12L;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("SegmentDistribution: " + msg);
}

}  // namespace

const char* to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Uniform: return "uniform";
    case DistKind::TruncatedExponential: return "trunc_exp";
    case DistKind::Triangular: return "triangular";
    case DistKind::Dirac: return "dirac";
    case DistKind::PiecewiseCdf: return "piecewise";
  }
  return "?";
}

Real SurvivalPiece::survival(Real p) const {
  switch (form) {
    case PieceForm::LinearSurvival:
      return c1 * p + c0;
    case PieceForm::LinearOverP:
      if (p <= 0) return c0 == 0 ? c1 : kInfinity;
      return (c1 * p + c0) / p;
    case PieceForm::ExpRampOverP: {
      const Real x = c0 * p;
      if (x <= 0) return 1;
      return -std::expm1(-x) / x;
    }
  }
  return 0;
}

Real SurvivalPiece::density(Real p) const {
  switch (form) {
    case PieceForm::LinearSurvival:
      return -c1;
    case PieceForm::LinearOverP:
      if (p <= 0) return 0;
      return c0 / (p * p);
    case PieceForm::ExpRampOverP: {
      const Real x = c0 * p;
      if (x <= 0) return 0;
      // d/dp [ (1 - e^{-x})/x ] with x = c0 p
      return (-std::expm1(-x) - x * std::exp(-x)) / (c0 * p * p);
    }
  }
  return 0;
}

SegmentDistribution SegmentDistribution::uniform(Real lo, Real hi) {
  if (!(lo >= 0) || !(hi > lo) || !std::isfinite(hi)) {
    fail("uniform requires 0 <= lo < hi < inf");
  }
  SegmentDistribution d;
  d.kind_ = DistKind::Uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  d.has_density_ = true;
  d.params_ = {lo, hi};
  return d;
}

SegmentDistribution SegmentDistribution::truncated_exponential(Real rate, Real cap) {
  if (!(rate > 0) || !(cap > 0) || !std::isfinite(cap)) {
    fail("truncated_exponential requires rate > 0 and finite cap > 0");
  }
  SegmentDistribution d;
  d.kind_ = DistKind::TruncatedExponential;
  d.lo_ = 0;
  d.hi_ = cap;
  d.has_density_ = true;
  d.params_ = {rate, cap};
  return d;
}

SegmentDistribution SegmentDistribution::triangular(Real peak_value, Real peak_quantile) {
  if (!(peak_value > 0) || !(peak_quantile > 0) || !(peak_quantile < 1)) {
    fail("triangular requires v > 0 and q in (0, 1)");
  }
  SegmentDistribution d;
  d.kind_ = DistKind::Triangular;
  d.lo_ = 0;
  d.hi_ = peak_value;
  d.has_density_ = true;
  d.params_ = {peak_value, peak_quantile};
  d.atoms_ = {peak_value};
  return d;
}

SegmentDistribution SegmentDistribution::dirac(Real value) {
  if (!(value >= 0) || !std::isfinite(value)) {
    fail("dirac requires a finite value >= 0");
  }
  SegmentDistribution d;
  d.kind_ = DistKind::Dirac;
  d.lo_ = value;
  d.hi_ = value;
  d.has_density_ = false;
  d.params_ = {value};
  d.atoms_ = {value};
  return d;
}

SegmentDistribution SegmentDistribution::piecewise(std::vector<SurvivalPiece> pieces) {
  if (pieces.empty()) fail("piecewise requires at least one piece");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& pc = pieces[i];
    if (!(pc.lo >= 0) || !(pc.hi > pc.lo)) fail("piece interval must satisfy 0 <= lo < hi");
    if (i + 1 < pieces.size() && pieces[i + 1].lo != pc.hi) {
      fail("pieces must tile the support contiguously");
    }
    if (pc.hi == kInfinity) {
      if (i + 1 != pieces.size()) fail("only the last piece may be unbounded");
      if (pc.form != PieceForm::LinearOverP || pc.c1 != 0 || !(pc.c0 > 0)) {
        fail("an unbounded tail must be a flat-revenue LinearOverP piece");
      }
    }
    if (pc.lo == 0 && pc.form == PieceForm::LinearOverP && pc.c0 != 0) {
      fail("a LinearOverP piece starting at 0 must have c0 = 0");
    }
  }

  // Monotonicity and range screening on a per-piece sample.
  Real prev = 1 + kMassTol;
  for (const auto& pc : pieces) {
    const Real hi = pc.hi == kInfinity ? pc.lo + std::max<Real>(1, pc.lo) : pc.hi;
    const int samples = 17;
    for (int j = 0; j <= samples; ++j) {
      const Real p = pc.lo + (hi - pc.lo) * j / samples;
      if (p <= pieces.front().lo) continue;
      const Real s = pc.survival(p);
      if (!(s >= -kMassTol) || !(s <= 1 + kMassTol)) fail("survival must stay within [0, 1]");
      if (s > prev + kMassTol) fail("survival must be nonincreasing");
      prev = s;
    }
  }
  const auto& last = pieces.back();
  if (last.hi < kInfinity) {
    if (last.survival(last.hi) < -kMassTol) fail("survival negative at the support end");
  }

  SegmentDistribution d;
  d.kind_ = DistKind::PiecewiseCdf;
  d.lo_ = pieces.front().lo;
  d.hi_ = pieces.back().hi;
  d.has_density_ = false;
  for (const auto& pc : pieces) {
    const bool flat = (pc.form == PieceForm::LinearSurvival && pc.c1 == 0) ||
                      (pc.form == PieceForm::LinearOverP && pc.c0 == 0);
    if (!flat) d.has_density_ = true;
  }

  // Atoms live where the survival drops across a boundary.
  if (pieces.front().survival(d.lo_) < 1 - kMassTol && d.lo_ > 0) {
    // Mass sits at the lower support end itself.
    d.atoms_.push_back(d.lo_);
  }
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Real left = pieces[i].survival(pieces[i].hi);
    const Real right = pieces[i + 1].survival(pieces[i + 1].lo);
    if (left - right > kMassTol) d.atoms_.push_back(pieces[i].hi);
  }
  if (last.hi < kInfinity && last.survival(last.hi) > kMassTol) {
    d.atoms_.push_back(last.hi);
  }

  d.pieces_ = std::move(pieces);
  return d;
}

SegmentDistribution SegmentDistribution::discrete(const std::vector<Real>& values,
                                                  const std::vector<Real>& masses) {
  if (values.size() < 2 || values.size() != masses.size()) {
    fail("discrete requires >= 2 values with matching masses (use dirac for one)");
  }
  Real total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0)) fail("discrete values must be >= 0");
    if (i > 0 && !(values[i] > values[i - 1])) fail("discrete values must be strictly increasing");
    if (!(masses[i] > 0)) fail("discrete masses must be positive");
    total += masses[i];
  }
  if (std::fabs(total - 1) > kMassTol) fail("discrete masses must sum to 1");

  // Step survival: level on (v_i, v_{i+1}] is the mass at or above v_{i+1}.
  std::vector<SurvivalPiece> pieces;
  Real suffix = 1;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    suffix -= masses[i];
    pieces.push_back({PieceForm::LinearSurvival, values[i], values[i + 1], suffix, 0});
  }
  return piecewise(std::move(pieces));
}

Real SegmentDistribution::survival(Real p) const {
  if (p <= lo_) return 1;
  switch (kind_) {
    case DistKind::Uniform:
      if (p >= hi_) return 0;
      return (hi_ - p) / (hi_ - lo_);
    case DistKind::TruncatedExponential: {
      if (p >= hi_) return 0;
      const Real rate = params_[0];
      return (std::exp(-rate * p) - std::exp(-rate * hi_)) / (-std::expm1(-rate * hi_));
    }
    case DistKind::Triangular: {
      if (p > hi_) return 0;
      const Real v = params_[0], q = params_[1];
      return v * q / (p * (1 - q) + v * q);  // equals q at p = v
    }
    case DistKind::Dirac:
      return p <= params_[0] ? 1 : 0;
    case DistKind::PiecewiseCdf: {
      if (p > hi_) return 0;
      // piece intervals are (lo, hi]: the piece owning p includes any atom at p
      auto it = std::lower_bound(pieces_.begin(), pieces_.end(), p,
                                 [](const SurvivalPiece& pc, Real x) { return pc.hi < x; });
      if (it == pieces_.end()) return 0;
      return std::clamp<Real>(it->survival(p), 0, 1);
    }
  }
  return 0;
}

Real SegmentDistribution::survival_above(Real p) const {
  if (p < lo_) return 1;
  switch (kind_) {
    case DistKind::Uniform:
    case DistKind::TruncatedExponential:
      return survival(p);  // atomless
    case DistKind::Triangular: {
      if (p >= hi_) return 0;
      return survival(p);
    }
    case DistKind::Dirac:
      return p < params_[0] ? 1 : 0;
    case DistKind::PiecewiseCdf: {
      if (p >= hi_) return 0;
      // right limit: the piece on [lo, hi) side of p
      auto it = std::upper_bound(pieces_.begin(), pieces_.end(), p,
                                 [](Real x, const SurvivalPiece& pc) { return x < pc.hi; });
      if (it == pieces_.end()) return 0;
      return std::clamp<Real>(it->survival(p), 0, 1);
    }
  }
  return 0;
}

Real SegmentDistribution::cdf(Real p) const { return 1 - survival_above(p); }

std::optional<Real> SegmentDistribution::density(Real p) const {
  if (!has_density_) return std::nullopt;
  switch (kind_) {
    case DistKind::Uniform:
      if (p < lo_ || p > hi_) return 0.0L;
      return 1 / (hi_ - lo_);
    case DistKind::TruncatedExponential: {
      if (p < 0 || p > hi_) return 0.0L;
      const Real rate = params_[0];
      return rate * std::exp(-rate * p) / (-std::expm1(-rate * hi_));
    }
    case DistKind::Triangular: {
      const Real v = params_[0], q = params_[1];
      if (p < 0 || p > v) return 0.0L;
      // continuous part only; closed at v so quadrature sees no false jump
      const Real den = p * (1 - q) + v * q;
      return v * q * (1 - q) / (den * den);
    }
    case DistKind::Dirac:
      return std::nullopt;
    case DistKind::PiecewiseCdf: {
      if (p < lo_ || p > hi_) return 0.0L;
      auto it = std::lower_bound(pieces_.begin(), pieces_.end(), p,
                                 [](const SurvivalPiece& pc, Real x) { return pc.hi < x; });
      if (it == pieces_.end()) return 0.0L;
      return it->density(p);
    }
  }
  return std::nullopt;
}

std::vector<Real> SegmentDistribution::candidate_prices() const {
  std::vector<Real> pts;
  if (lo_ >= 0) pts.push_back(lo_);
  if (hi_ < kInfinity) pts.push_back(hi_);
  for (const auto& pc : pieces_) {
    pts.push_back(pc.lo);
    if (pc.hi < kInfinity) pts.push_back(pc.hi);
  }
  pts.insert(pts.end(), atoms_.begin(), atoms_.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace segprice
