#pragma once

#include "fairrank/types.hpp"

namespace fairrank {

inline constexpr double kDefaultImpactChangeThreshold = 0.10;

/// Average expected relevance-weighted exposure per user.
double user_utility(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                    const ExposureModel& exposure);

/// (1/|I|) sum_i max_j (Imp_i(X_j) - Imp_i(X_i)); j ranges over all items,
/// so the result is never negative.
double mean_max_envy(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                     const ExposureModel& exposure);

/// Fraction of items whose impact exceeds (1 + threshold) times their impact
/// under the uniform policy.
double items_better_off(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                        const ExposureModel& exposure,
                        double threshold = kDefaultImpactChangeThreshold);

/// Fraction of items whose impact falls below (1 - threshold) times their
/// impact under the uniform policy.
double items_worse_off(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                       const ExposureModel& exposure,
                       double threshold = kDefaultImpactChangeThreshold);

/// All metrics of one policy plus the NSW objective.
struct PolicyMetrics {
  double objective = 0.0;
  double user_utility = 0.0;
  double mean_max_envy = 0.0;
  double items_better_off = 0.0;
  double items_worse_off = 0.0;
};

PolicyMetrics evaluate_policy(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                              const ExposureModel& exposure,
                              double threshold = kDefaultImpactChangeThreshold);

}  // namespace fairrank
