#include "fairrank/metrics.hpp"

#include <cmath>
#include <limits>

#include "fairrank/errors.hpp"
#include "fairrank/nsw.hpp"

namespace fairrank {

namespace {

// w(u, j) = sum_{k < m} e(k) x_ujk: expected exposure of item j's allocation for user u.
Matrix exposure_allocation(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                           const ExposureModel& exposure) {
  if (relevance.num_users() != policy.num_users() || relevance.num_items() != policy.num_items()) {
    throw ShapeError("relevance matrix does not match the policy dimensions");
  }
  if (exposure.num_positions() != policy.num_positions()) {
    throw ShapeError("exposure model does not match the number of positions");
  }
  const Index real = exposure.num_real_positions();
  Matrix w(policy.num_users(), policy.num_items());
  for (Index u = 0; u < policy.num_users(); ++u) {
    const Matrix& x = policy.user(u);
    if (x.rows() != policy.num_items() || x.cols() != policy.num_positions()) {
      throw ShapeError("ragged policy tensor");
    }
    w.row(u) = (x.leftCols(real) * exposure.values()).transpose();
  }
  return w;
}

Vector uniform_impact(const RelevanceMatrix& relevance, const ExposureModel& exposure) {
  const double per_item = exposure.values().sum() / static_cast<double>(relevance.num_items());
  return relevance.values().colwise().sum().transpose() * per_item;
}

double fraction_changed(const Vector& imp, const Vector& baseline, double factor, bool above) {
  Index count = 0;
  for (Index i = 0; i < imp.size(); ++i) {
    const double bound = factor * baseline(i);
    if (above ? imp(i) > bound : imp(i) < bound) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(imp.size());
}

}  // namespace

double user_utility(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                    const ExposureModel& exposure) {
  const Matrix w = exposure_allocation(policy, relevance, exposure);
  return relevance.values().cwiseProduct(w).sum() / static_cast<double>(policy.num_users());
}

double mean_max_envy(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                     const ExposureModel& exposure) {
  const Matrix w = exposure_allocation(policy, relevance, exposure);
  // swapped(i, j) = Imp_i(X_j)
  const Matrix swapped = relevance.values().transpose() * w;
  double total = 0.0;
  for (Index i = 0; i < swapped.rows(); ++i) {
    total += swapped.row(i).maxCoeff() - swapped(i, i);
  }
  return total / static_cast<double>(swapped.rows());
}

double items_better_off(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                        const ExposureModel& exposure, double threshold) {
  return fraction_changed(impact(policy, relevance, exposure), uniform_impact(relevance, exposure),
                          1.0 + threshold, true);
}

double items_worse_off(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                       const ExposureModel& exposure, double threshold) {
  return fraction_changed(impact(policy, relevance, exposure), uniform_impact(relevance, exposure),
                          1.0 - threshold, false);
}

PolicyMetrics evaluate_policy(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                              const ExposureModel& exposure, double threshold) {
  PolicyMetrics out;
  // Deterministic baselines can leave an item without exposure; report -inf
  // instead of failing.
  const Vector imp = impact(policy, relevance, exposure);
  out.objective = imp.minCoeff() > 0.0 ? nsw_objective(imp)
                                       : -std::numeric_limits<double>::infinity();
  out.user_utility = user_utility(policy, relevance, exposure);
  out.mean_max_envy = mean_max_envy(policy, relevance, exposure);
  out.items_better_off = items_better_off(policy, relevance, exposure, threshold);
  out.items_worse_off = items_worse_off(policy, relevance, exposure, threshold);
  return out;
}

}  // namespace fairrank
