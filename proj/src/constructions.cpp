#include "segprice/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace segprice {

namespace {

// Solves (1 - e^{-x})/x = r for the unique positive root; the left side
// decreases from 1 to 0, so r must lie in (0, 1).
Real solve_ramp_level(Real r) {
  if (!(r > 0) || !(r < 1)) {
    throw ConstructionError("ramp-continuity-feasible",
                            "continuity equation needs a level in (0, 1)");
  }
  Real lo = 0;
  Real hi = std::max<Real>(4, 2 / r);
  for (int i = 0; i < 256 && (hi - lo) > 1e-14L * std::max<Real>(1, hi); ++i) {
    const Real mid = (lo + hi) / 2;
    const Real val = -std::expm1(-mid) / mid;
    (val > r ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

MarketInstance equal_weights(std::vector<SegmentDistribution> dists, Real cost) {
  const Real w = Real(1) / (Real)dists.size();
  std::vector<Segment> segs;
  segs.reserve(dists.size());
  for (auto& d : dists) segs.push_back({w, std::move(d)});
  return MarketInstance(std::move(segs), cost);
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::TightPair: return "tight-pair";
    case Family::UnboundedFlat: return "unbounded-flat";
    case Family::Staircase: return "staircase";
    case Family::TriangularRegular: return "triangular";
    case Family::TruncExpMhr: return "trunc-exp";
    case Family::DiracWorstCase: return "dirac";
  }
  return "?";
}

std::optional<Family> family_from_string(const std::string& name) {
  for (Family f : {Family::TightPair, Family::UnboundedFlat, Family::Staircase,
                   Family::TriangularRegular, Family::TruncExpMhr,
                   Family::DiracWorstCase}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

Construction tight_pair(Real a, Real epsilon, std::optional<Real> kappa_opt) {
  if (!(a > 1)) throw ConstructionError("parameter-range", "tight_pair requires a > 1");
  if (!(epsilon > 0) || !(epsilon < 1)) {
    throw ConstructionError("parameter-range", "tight_pair requires 0 < epsilon < 1");
  }

  // kappa fixes the support end via M = a + epsilon^{-1/kappa}. The halving
  // schedule stops at the largest kappa whose junction-concavity certificate
  // holds; tiny epsilon can push M past representable range, which is
  // reported as a failure of that certificate.
  std::string blocker = "kappa-certificate";
  std::optional<Real> chosen;
  Real m_minus_a = 0;
  std::vector<Real> schedule;
  if (kappa_opt) {
    schedule.push_back(*kappa_opt);
  } else {
    Real k = 0.5L;
    for (int i = 0; i < 60; ++i, k /= 2) schedule.push_back(k);
  }
  for (Real kappa : schedule) {
    if (!(kappa > 0) || !(kappa < 1)) {
      blocker = "parameter-range";
      continue;
    }
    const Real t = std::pow(epsilon, 1 / kappa);  // = 1/(M - a)
    if (!(t > 0)) {
      blocker = "kappa-certificate";
      break;  // underflow; smaller kappa only underflows harder
    }
    const Real span = 1 / t;
    if (!std::isfinite(span) || !(span > a)) {
      blocker = "support-representable";
      break;
    }
    if (!(epsilon / a + t < 1)) {
      blocker = "tail-level-bound";
      continue;
    }
    const Real lhs = std::exp(-1 / (epsilon / a + t));
    const Real rhs = (1 - (a * t + epsilon)) / (span - a);
    if (!(span > 2 * a) || !(lhs >= rhs)) {
      blocker = "kappa-certificate";
      continue;
    }
    chosen = kappa;
    m_minus_a = span;
    break;
  }
  if (!chosen) {
    throw ConstructionError(blocker,
                            "tight_pair: no kappa on the halving schedule certifies the "
                            "construction for a=" + std::to_string((double)a) +
                            ", epsilon=" + std::to_string((double)epsilon) +
                            " (violated: " + blocker + ")");
  }

  const Real kappa = *chosen;
  const Real m_upper = a + m_minus_a;
  const Real x1 = solve_ramp_level(1 / a);            // x = a * lambda1
  const Real lambda1 = x1 / a;
  const Real level2 = epsilon / a + 1 / m_minus_a;    // continuity level for segment 2
  const Real x2 = solve_ramp_level(level2);
  const Real lambda2 = x2 / a;

  const Real gamma = epsilon + a / m_minus_a;         // profit of segment 2 at the kink
  const Real beta = (1 - gamma) / (m_upper - 2 * a);  // middle-piece slope
  if (!(std::exp(-x2) >= beta)) {
    throw ConstructionError("junction-concavity",
                            "tight_pair: ramp slope at the kink falls below the "
                            "middle-piece slope");
  }

  std::vector<SurvivalPiece> f1{
      {PieceForm::ExpRampOverP, 0, a, lambda1, 0},
      {PieceForm::LinearOverP, a, m_upper, m_upper / (m_upper - a), -1 / (m_upper - a)},
  };
  std::vector<SurvivalPiece> f2{
      {PieceForm::ExpRampOverP, 0, a, lambda2, 0},
  };
  if (m_upper - a < m_upper) {
    f2.push_back({PieceForm::LinearOverP, a, m_upper - a, gamma - beta * a, beta});
    f2.push_back({PieceForm::LinearOverP, m_upper - a, m_upper, m_upper / a, -1 / a});
  } else {
    // The closing wedge of width a is beyond representable resolution at
    // this support end; extending the middle piece leaves a residual mass
    // of order 1/M, far below every tolerance in play.
    f2.push_back({PieceForm::LinearOverP, a, m_upper, gamma - beta * a, beta});
  }

  Construction c{
      {Family::TightPair, 2, epsilon, a, 10, kappa, {}},
      equal_weights({SegmentDistribution::piecewise(std::move(f1)),
                     SegmentDistribution::piecewise(std::move(f2))},
                    0),
      {},
  };
  c.metadata["a"] = a;
  c.metadata["epsilon"] = epsilon;
  c.metadata["kappa"] = kappa;
  c.metadata["support_end"] = m_upper;
  c.metadata["lambda1"] = lambda1;
  c.metadata["lambda2"] = lambda2;
  c.metadata["kink_profit"] = gamma;
  c.metadata["mid_slope"] = beta;
  return c;
}

Construction staircase(int k) {
  if (k < 2) throw ConstructionError("parameter-range", "staircase requires K >= 2");
  std::vector<SegmentDistribution> dists;
  std::map<std::string, Real> meta;
  for (int i = 1; i <= k; ++i) {
    const Real v = Real(1) / (k - i + 1);
    const Real v_next = i < k ? Real(1) / (k - i) : 0;
    const Real eps = i < k ? (v_next - v) / 2 : v * 1e-3L;
    std::vector<SurvivalPiece> pieces{
        {PieceForm::LinearOverP, 0, v, 0, 1},
        {PieceForm::LinearOverP, v, v + eps, v * (v + eps) / eps, -v / eps},
    };
    dists.push_back(SegmentDistribution::piecewise(std::move(pieces)));
    meta["eps_" + std::to_string(i)] = eps;
  }
  meta["gap_fraction"] = 0.5L;
  return Construction{{Family::Staircase, k, 0.01, 2, 10, std::nullopt, {}},
                      equal_weights(std::move(dists), 0), std::move(meta)};
}

Construction triangular_regular(int k) {
  if (k < 2) throw ConstructionError("parameter-range", "triangular requires K >= 2");
  std::vector<SegmentDistribution> dists;
  for (int i = 1; i <= k; ++i) {
    dists.push_back(SegmentDistribution::triangular(Real(1) / (k - i + 1), 0.5L));
  }
  Construction c{{Family::TriangularRegular, k, 0.01, 2, 10, std::nullopt, {}},
                 equal_weights(std::move(dists), 0),
                 {}};
  c.metadata["peak_quantile"] = 0.5L;
  return c;
}

Construction trunc_exp_mhr(int k, Real cap) {
  if (k < 2) throw ConstructionError("parameter-range", "trunc-exp requires K >= 2");
  if (!(cap > 1)) throw ConstructionError("parameter-range", "trunc-exp requires L > 1");
  std::vector<SegmentDistribution> dists;
  for (int i = 1; i <= k; ++i) {
    dists.push_back(SegmentDistribution::truncated_exponential(Real(k - i + 1), cap));
  }
  Construction c{{Family::TruncExpMhr, k, 0.01, 2, cap, std::nullopt, {}},
                 equal_weights(std::move(dists), 0),
                 {}};
  c.metadata["cap"] = cap;
  return c;
}

Construction dirac_worst_case(int k, Real epsilon) {
  if (k < 1) throw ConstructionError("parameter-range", "dirac requires K >= 1");
  if (!(epsilon > 0)) throw ConstructionError("parameter-range", "dirac requires eps > 0");
  const Real growth = (1 + epsilon) / epsilon;
  std::vector<Segment> segs;
  Real mass = 0;
  for (int i = 1; i <= k; ++i) {
    const Real value = i < k ? (epsilon / k) * std::pow(growth, (Real)i)
                             : (Real(1) / k) * std::pow(growth, (Real)(k - 1));
    const Real weight = 1 / ((Real)k * value);
    segs.push_back({weight, SegmentDistribution::dirac(value)});
    mass += weight;
  }
  if (std::fabs(mass - 1) > 1e-12L) {
    throw ConstructionError("mass-telescoping",
                            "dirac: weights failed to telescope to 1");
  }
  Construction c{{Family::DiracWorstCase, k, epsilon, 2, 10, std::nullopt, {}},
                 MarketInstance(std::move(segs), 0),
                 {}};
  c.metadata["epsilon"] = epsilon;
  return c;
}

Construction unbounded_flat(std::vector<Real> peaks) {
  if (peaks.empty()) {
    throw ConstructionError("parameter-range", "unbounded-flat requires peaks");
  }
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (!(peaks[i] > 0) || (i > 0 && peaks[i] < peaks[i - 1])) {
      throw ConstructionError("parameter-range",
                              "unbounded-flat peaks must be positive and sorted");
    }
  }
  std::vector<SegmentDistribution> dists;
  for (Real p : peaks) {
    // Unit survival up to the peak, then the flat-revenue tail p*/price.
    std::vector<SurvivalPiece> pieces{
        {PieceForm::LinearOverP, 0, p, 0, 1},
        {PieceForm::LinearOverP, p, kInfinity, p, 0},
    };
    dists.push_back(SegmentDistribution::piecewise(std::move(pieces)));
  }
  Construction c{{Family::UnboundedFlat, (int)peaks.size(), 0.01, 2, 10, std::nullopt, peaks},
                 equal_weights(std::move(dists), 0),
                 {}};
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    c.metadata["peak_" + std::to_string(i + 1)] = peaks[i];
  }
  return c;
}

Construction unbounded_flat(int k) {
  if (k < 1) throw ConstructionError("parameter-range", "unbounded-flat requires K >= 1");
  std::vector<Real> peaks;
  for (int i = 1; i <= k; ++i) peaks.push_back((Real)i);
  return unbounded_flat(std::move(peaks));
}

Construction build_construction(const ConstructionParams& p) {
  switch (p.family) {
    case Family::TightPair: return tight_pair(p.a, p.epsilon, p.kappa);
    case Family::UnboundedFlat:
      return p.peaks.empty() ? unbounded_flat(p.k) : unbounded_flat(p.peaks);
    case Family::Staircase: return staircase(p.k);
    case Family::TriangularRegular: return triangular_regular(p.k);
    case Family::TruncExpMhr: return trunc_exp_mhr(p.k, p.cap_l);
    case Family::DiracWorstCase: return dirac_worst_case(p.k, p.epsilon);
  }
  throw ConstructionError("parameter-range", "unknown family");
}

}  // namespace segprice
