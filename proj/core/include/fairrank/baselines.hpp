#pragma once

#include "fairrank/types.hpp"

namespace fairrank {

/// Deterministic ranking by descending relevance per user (ties: lower item
/// index first). The top m - 1 items fill the real positions, the rest the dummy.
RankingPolicy max_relevance_policy(const RelevanceMatrix& relevance, const ProblemShape& shape);

/// Deterministic greedy NSW construction. Positions are filled in order; for
/// each position every user (in index order) receives the unassigned item
/// with the largest log(1 + r(u, i) e(k) / max(Imp_i, impact_floor)), where
/// Imp accumulates all earlier assignments.
RankingPolicy nsw_greedy_policy(const RelevanceMatrix& relevance, const ExposureModel& exposure,
                                const ProblemShape& shape, double impact_floor = kRelevanceFloor);

}  // namespace fairrank
