#pragma once

#include <vector>

#include "fairrank/adam.hpp"
#include "fairrank/types.hpp"

namespace fairrank {

/// Imp_i = sum_u sum_{k < m} r(u, i) e(k) x_uik. The dummy position adds nothing.
Vector impact(const RankingPolicy& policy, const RelevanceMatrix& relevance,
              const ExposureModel& exposure);

/// F = sum_i log Imp_i. Throws DomainError if some impact is not positive.
double nsw_objective(const Vector& impacts);

/// dF/dx_uik = r(u, i) e(k) / Imp_i on real positions, 0 on the dummy column.
PolicyGradient nsw_gradient_wrt_policy(const RankingPolicy& policy,
                                       const RelevanceMatrix& relevance,
                                       const ExposureModel& exposure);

/// Same gradient when the impacts are already known.
PolicyGradient nsw_gradient_wrt_policy(const Vector& impacts, const RelevanceMatrix& relevance,
                                       const ExposureModel& exposure, Index num_items);

/// One forward/backward pass of the relaxed objective F(X*(C)).
struct CostEvaluation {
  RankingPolicy policy;   ///< X*(C), one Sinkhorn solve per user
  CostTensor gradient;    ///< dF/dC through the unrolled solves
  Vector impacts;
  double objective = 0.0;
  double policy_grad_norm = 0.0;  ///< ||dF/dX||_2
  std::vector<Vector> log_u;  ///< final duals per user
  std::vector<Vector> log_v;
  std::vector<int> iterations;
  std::vector<double> residuals;
  int unconverged_users = 0;
};

/// Solves every user's Sinkhorn problem for `costs`, evaluates F and
/// backpropagates dF/dX to dF/dC. Users are processed in parallel; results do
/// not depend on the thread count.
CostEvaluation evaluate_costs(const CostTensor& costs, const RelevanceMatrix& relevance,
                              const ExposureModel& exposure, const SolverConfig& config);

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;
  double cost_grad_norm = 0.0;    ///< ||dF/dC||_2, the stopping quantity
  double policy_grad_norm = 0.0;  ///< ||dF/dX||_2 over real positions
  int max_sinkhorn_iterations = 0;
  double mean_sinkhorn_iterations = 0.0;
  int unconverged_users = 0;
  double seconds = 0.0;  ///< wall time since the solve started
};

enum class StopReason {
  kGradientThreshold,  ///< ||dF/dC||_2 <= grad_threshold
  kMaxIterations,      ///< outer_max_iters reached
  kSinkhornStalled,    ///< more than half of the users failed to converge
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  StopReason stop_reason = StopReason::kMaxIterations;
  int best_iteration = 0;  ///< iteration whose costs produced the returned policy
  bool polished = false;   ///< returned policy came from the final larger-budget re-solve
};

struct SolveResult {
  RankingPolicy policy;
  CostTensor costs;
  SolveTrace trace;
};

/// Gradient ascent on the transport costs: each outer iteration solves one
/// Sinkhorn problem per user, backpropagates dF/dX through the recorded
/// iterations to dF/dC and takes an Adam ascent step. Starts from the costs
/// of the uniform policy; stops when ||dF/dC||_2 <= grad_threshold, after
/// outer_max_iters, or when more than half of the users fail to converge.
///
/// Returns the highest-objective iterate among those whose every user plan
/// met 10 * sinkhorn_tol, so the result always passes validate_policy at
/// that tolerance. Iteration 0 is the uniform policy. If a better iterate
/// had unconverged users, its costs are re-solved once with 100x the
/// Sinkhorn budget and used when that re-solve is feasible and still better.
///
/// Throws SolverError when no iterate qualifies, DomainError on non-positive
/// impacts, ShapeError on inconsistent inputs.
SolveResult solve_fair_ranking(const RelevanceMatrix& relevance, const ExposureModel& exposure,
                               const ProblemShape& shape, const SolverConfig& config);

}  // namespace fairrank
