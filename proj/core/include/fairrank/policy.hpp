#pragma once

#include "fairrank/types.hpp"

namespace fairrank {

/// Worst constraint violations of a ranking policy, all in L-infinity.
struct ValidationReport {
  bool ok = false;
  double row_residual = 0.0;     ///< max |sum_k x_uik - 1|
  double column_residual = 0.0;  ///< max |sum_i x_uik - 1| over real positions
  double dummy_residual = 0.0;   ///< max |sum_i x_uim - (|I| - m + 1)|
  double negativity = 0.0;       ///< max(0, -x_uik)

  double worst() const;
};

/// Checks the doubly stochastic constraints (unit rows, unit real columns,
/// dummy column of mass |I| - m + 1, non-negativity) for every user.
/// Throws ShapeError when the tensor does not match `shape`.
ValidationReport validate_policy(const RankingPolicy& policy, const ProblemShape& shape,
                                 double tol = kFeasibilityTolerance);

/// Every item equally likely at every real position: x_uik = 1/|I|, dummy
/// column (|I| - m + 1)/|I|.
RankingPolicy uniform_policy(const ProblemShape& shape);

/// The single-user slice of uniform_policy.
Matrix uniform_plan(Index num_items, Index num_positions);

}  // namespace fairrank
