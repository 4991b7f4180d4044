#include "fairrank/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "fairrank/errors.hpp"

namespace fairrank {

namespace {

void check_relevance(const RelevanceMatrix& relevance, const ProblemShape& shape) {
  shape.validate();
  if (relevance.num_users() != shape.num_users || relevance.num_items() != shape.num_items) {
    throw ShapeError("relevance matrix does not match the problem shape");
  }
}

}  // namespace

RankingPolicy max_relevance_policy(const RelevanceMatrix& relevance, const ProblemShape& shape) {
  check_relevance(relevance, shape);
  const Index real = shape.num_real_positions();
  const Index dummy = shape.num_positions - 1;

  RankingPolicy policy(shape.num_users, shape.num_items, shape.num_positions);
  std::vector<Index> order(static_cast<std::size_t>(shape.num_items));
  for (Index u = 0; u < shape.num_users; ++u) {
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return relevance(u, a) > relevance(u, b);
    });
    Matrix& x = policy.user(u);
    for (Index rank = 0; rank < shape.num_items; ++rank) {
      x(order[static_cast<std::size_t>(rank)], rank < real ? rank : dummy) = 1.0;
    }
  }
  return policy;
}

RankingPolicy nsw_greedy_policy(const RelevanceMatrix& relevance, const ExposureModel& exposure,
                                const ProblemShape& shape, double impact_floor) {
  check_relevance(relevance, shape);
  if (exposure.num_positions() != shape.num_positions) {
    throw ShapeError("exposure model does not match the problem shape");
  }
  if (!(impact_floor > 0.0)) throw InputError("impact_floor must be positive");

  const Index users = shape.num_users;
  const Index items = shape.num_items;
  const Index dummy = shape.num_positions - 1;

  RankingPolicy policy(users, items, shape.num_positions);
  std::vector<std::vector<char>> assigned(static_cast<std::size_t>(users),
                                          std::vector<char>(static_cast<std::size_t>(items), 0));
  Vector current = Vector::Zero(items);

  for (Index k = 0; k < shape.num_real_positions(); ++k) {
    const double e = exposure(k);
    for (Index u = 0; u < users; ++u) {
      auto& taken = assigned[static_cast<std::size_t>(u)];
      // log(1 + r e / Imp) is increasing in r / Imp, so compare the ratio.
      Index best = -1;
      double best_ratio = -1.0;
      for (Index i = 0; i < items; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double ratio = relevance(u, i) / std::max(current(i), impact_floor);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = i;
        }
      }
      taken[static_cast<std::size_t>(best)] = 1;
      policy(u, best, k) = 1.0;
      current(best) += relevance(u, best) * e;
    }
  }

  for (Index u = 0; u < users; ++u) {
    const auto& taken = assigned[static_cast<std::size_t>(u)];
    for (Index i = 0; i < items; ++i) {
      if (!taken[static_cast<std::size_t>(i)]) policy(u, i, dummy) = 1.0;
    }
  }
  return policy;
}

}  // namespace fairrank
