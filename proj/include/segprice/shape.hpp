#pragma once

#include <vector>

#include "segprice/market.hpp"

namespace segprice {

// Grid-certified checks can fail to apply when no density is declared.
enum class ShapeFlag { holds, fails, not_evaluable };

const char* to_string(ShapeFlag f);

struct ShapeDiagnosis {
  std::vector<bool> concave_profit;   // per segment, on the market grid
  std::vector<ShapeFlag> regular;     // virtual value nondecreasing
  std::vector<ShapeFlag> mhr;         // inverse hazard rate nonincreasing
  bool common_support = false;        // equal upper support ends
  bool bounded_support = false;
  int grid_used = 0;

  bool all_concave() const;
};

// Necessary-condition certification on a uniform grid spanning
// [cost, max support end] (capped at twice the largest finite landmark when
// some support is unbounded). Second differences test concavity; regularity
// and MHR are tested where a positive density is available and reported
// not_evaluable otherwise. grid_n must be >= 16.
ShapeDiagnosis diagnose_shape(const MarketInstance& m, int grid_n);

}  // namespace segprice
