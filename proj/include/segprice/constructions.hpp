#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "segprice/market.hpp"

namespace segprice {

enum class Family {
  TightPair,
  UnboundedFlat,
  Staircase,
  TriangularRegular,
  TruncExpMhr,
  DiracWorstCase,
};

const char* to_string(Family f);
std::optional<Family> family_from_string(const std::string& name);

struct ConstructionParams {
  Family family = Family::Staircase;
  int k = 2;
  Real epsilon = 0.01;       // TightPair, DiracWorstCase
  Real a = 2;                // TightPair
  Real cap_l = 10;           // TruncExpMhr
  std::optional<Real> kappa; // TightPair; auto-selected when absent
  std::vector<Real> peaks;   // UnboundedFlat
};

// Raised when a family's defining conditions cannot be certified for the
// requested parameters; `condition` names the first check that failed.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(std::string condition, const std::string& what)
      : std::runtime_error(what), condition(std::move(condition)) {}
  std::string condition;
};

struct Construction {
  ConstructionParams params;
  MarketInstance market;
  // Solved quantities (rates, kappa, support end, ...) for reproducibility.
  std::map<std::string, Real> metadata;
};

// Two equal-weight segments on [0, M] whose aggregate profit is maximized at
// the first kink, where one segment contributes almost nothing. The optimal
// uniform price captures 1/2 + epsilon*(a+1)/2 of the discrimination profit
// at most, while both profit functions stay concave. Throws
// ConstructionError when no kappa on the halving schedule certifies the
// junction-concavity condition within representable range.
Construction tight_pair(Real a, Real epsilon,
                        std::optional<Real> kappa = std::nullopt);

// Equal-weight triangle profits peaking at 1/(K-k+1) with disjoint upper
// support ends: uniform pricing earns 1/K against a harmonic-sum optimum.
Construction staircase(int k);

// Equal-weight triangular segments (peak quantile 1/2) sharing [0, 1]:
// regular but the profit ratio decays like 2 log 2 / log K.
Construction triangular_regular(int k);

// Truncated exponentials with rates K, K-1, ..., 1 on [0, cap]: monotone
// hazard rate, common bounded support, uniform profit at most 1/K.
Construction trunc_exp_mhr(int k, Real cap);

// Point masses at geometrically spaced values weighted so every segment
// contributes 1/K under discrimination; the uniform profit is (1+eps)/K.
Construction dirac_worst_case(int k, Real epsilon);

// Unit-survival ramp up to each peak followed by a flat-revenue tail on an
// unbounded support: uniform pricing at the largest peak matches the
// discrimination profit exactly.
Construction unbounded_flat(std::vector<Real> peaks);
Construction unbounded_flat(int k);  // default peaks 1, 2, ..., K

// Dispatch on params.family.
Construction build_construction(const ConstructionParams& params);

}  // namespace segprice
