#pragma once

#include <limits>
#include <optional>
#include <vector>

namespace segprice {

// Core scalar. Extended precision keeps the worst-case instance families
// representable: some of them place the upper end of the support thousands
// of decimal orders above the interesting price region.
using Real = long double;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

// Building block of a piecewise CDF. Each piece is a named closed-form
// survival expression on a price interval; pieces are evaluated exactly,
// never tabulated.
enum class PieceForm {
  // survival(p) = c1 * p + c0
  LinearSurvival,
  // survival(p) = (c1 * p + c0) / p; the zero-cost revenue is linear in p
  LinearOverP,
  // survival(p) = (1 - exp(-c0 * p)) / (c0 * p); tends to 1 as p -> 0
  ExpRampOverP,
};

struct SurvivalPiece {
  PieceForm form = PieceForm::LinearSurvival;
  Real lo = 0;
  Real hi = 0;  // +infinity allowed for a terminal flat-revenue tail
  Real c0 = 0;
  Real c1 = 0;

  Real survival(Real p) const;
  // -dS/dp on the interior; 0 where the survival is flat.
  Real density(Real p) const;
};

enum class DistKind {
  Uniform,
  TruncatedExponential,
  Triangular,
  Dirac,
  PiecewiseCdf,
};

const char* to_string(DistKind kind);

// One segment's demand distribution. Immutable after construction; all
// queries are pure. Atoms follow the closed-survival convention: survival(p)
// is Pr[value >= p], so a point-mass buyer purchases at a price equal to her
// value and every supremum used downstream is attained.
class SegmentDistribution {
 public:
  // Values spread evenly on [lo, hi], 0 <= lo < hi.
  static SegmentDistribution uniform(Real lo, Real hi);
  // Exponential with the given rate truncated to [0, cap].
  static SegmentDistribution truncated_exponential(Real rate, Real cap);
  // Quantile-space triangle: continuous below the peak value v plus an atom
  // of mass q at v. F(p) = p(1-q) / (p(1-q) + v q) for p < v, 1 at p >= v.
  static SegmentDistribution triangular(Real peak_value, Real peak_quantile);
  // Point mass at a single value.
  static SegmentDistribution dirac(Real value);
  // Contiguous closed-form pieces; validated for monotonicity and total mass.
  static SegmentDistribution piecewise(std::vector<SurvivalPiece> pieces);
  // Finite support on >= 2 atoms; implemented as a step piecewise CDF.
  static SegmentDistribution discrete(const std::vector<Real>& values,
                                      const std::vector<Real>& masses);

  DistKind kind() const { return kind_; }
  Real support_lo() const { return lo_; }
  Real support_hi() const { return hi_; }
  bool bounded() const { return hi_ < kInfinity; }

  // Right-continuous CDF, Pr[value <= p].
  Real cdf(Real p) const;
  // Pr[value >= p]; includes the atom at p if one exists.
  Real survival(Real p) const;
  // Pr[value > p] = 1 - F(p); excludes the atom at p.
  Real survival_above(Real p) const;

  bool has_density() const { return has_density_; }
  // Density of the continuous part, nullopt when none is declared (Dirac,
  // pure-step piecewise CDFs).
  std::optional<Real> density(Real p) const;

  const std::vector<Real>& atoms() const { return atoms_; }
  // Atoms, kinks, and finite support endpoints: the points optimizers must
  // evaluate exactly.
  std::vector<Real> candidate_prices() const;

  const std::vector<SurvivalPiece>& pieces() const { return pieces_; }
  // Closed-form parameters in factory order (serialization support):
  // Uniform {lo, hi}, TruncatedExponential {rate, cap},
  // Triangular {v, q}, Dirac {v}, PiecewiseCdf {}.
  const std::vector<Real>& params() const { return params_; }

 private:
  SegmentDistribution() = default;

  DistKind kind_ = DistKind::Uniform;
  Real lo_ = 0;
  Real hi_ = 0;
  bool has_density_ = false;
  std::vector<Real> params_;
  std::vector<SurvivalPiece> pieces_;  // PiecewiseCdf only
  std::vector<Real> atoms_;
};

}  // namespace segprice
