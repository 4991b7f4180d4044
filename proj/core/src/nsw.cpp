#include "fairrank/nsw.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "fairrank/errors.hpp"
#include "fairrank/policy.hpp"
#include "fairrank/sinkhorn.hpp"

namespace fairrank {

namespace {

// Plans whose marginal residual is within this multiple of sinkhorn_tol may be returned.
constexpr double kFeasibleSlack = 10.0;
// Iteration budget multiplier for the final re-solve of the best costs.
constexpr int kPolishBudget = 100;

void check_inputs(const RankingPolicy& policy, const RelevanceMatrix& relevance,
                  const ExposureModel& exposure) {
  if (relevance.num_users() != policy.num_users() || relevance.num_items() != policy.num_items()) {
    throw ShapeError("relevance matrix does not match the policy dimensions");
  }
  if (exposure.num_positions() != policy.num_positions()) {
    throw ShapeError("exposure model does not match the number of positions");
  }
  for (const auto& slice : policy.slices()) {
    if (slice.rows() != policy.num_items() || slice.cols() != policy.num_positions()) {
      throw ShapeError("ragged policy tensor");
    }
  }
}

}  // namespace

Vector impact(const RankingPolicy& policy, const RelevanceMatrix& relevance,
              const ExposureModel& exposure) {
  check_inputs(policy, relevance, exposure);
  const Index real = exposure.num_real_positions();
  Vector imp = Vector::Zero(policy.num_items());
  for (Index u = 0; u < policy.num_users(); ++u) {
    const Vector exposed = policy.user(u).leftCols(real) * exposure.values();
    imp.array() += relevance.values().row(u).transpose().array() * exposed.array();
  }
  return imp;
}

double nsw_objective(const Vector& impacts) {
  double total = 0.0;
  for (Index i = 0; i < impacts.size(); ++i) {
    if (!(impacts(i) > 0.0)) {
      throw DomainError("impact of item " + std::to_string(i) + " is not positive");
    }
    total += std::log(impacts(i));
  }
  return total;
}

PolicyGradient nsw_gradient_wrt_policy(const Vector& impacts, const RelevanceMatrix& relevance,
                                       const ExposureModel& exposure, Index num_items) {
  if (impacts.size() != num_items || relevance.num_items() != num_items) {
    throw ShapeError("impact vector does not match the number of items");
  }
  if (!(impacts.minCoeff() > 0.0)) throw DomainError("gradient needs strictly positive impacts");

  const Index real = exposure.num_real_positions();
  PolicyGradient grad(relevance.num_users(), num_items, exposure.num_positions());
  const Vector inv_impact = impacts.cwiseInverse();
  for (Index u = 0; u < relevance.num_users(); ++u) {
    const Vector weight =
        relevance.values().row(u).transpose().cwiseProduct(inv_impact);
    grad.user(u).leftCols(real).noalias() = weight * exposure.values().transpose();
  }
  return grad;
}

PolicyGradient nsw_gradient_wrt_policy(const RankingPolicy& policy,
                                       const RelevanceMatrix& relevance,
                                       const ExposureModel& exposure) {
  return nsw_gradient_wrt_policy(impact(policy, relevance, exposure), relevance, exposure,
                                 policy.num_items());
}

CostEvaluation evaluate_costs(const CostTensor& costs, const RelevanceMatrix& relevance,
                              const ExposureModel& exposure, const SolverConfig& config) {
  const Index users = costs.num_users();
  const Index items = costs.num_items();
  if (relevance.num_users() != users || relevance.num_items() != items ||
      exposure.num_positions() != costs.num_positions()) {
    throw ShapeError("cost tensor does not match relevance and exposure");
  }
  const Marginals marginals = Marginals::for_ranking(items, costs.num_positions());
  const auto n = static_cast<std::size_t>(users);
  const long n_users = static_cast<long>(users);

  CostEvaluation out;
  out.policy = RankingPolicy(users, items, costs.num_positions());
  out.gradient = CostTensor(users, items, costs.num_positions());
  out.log_u.resize(n);
  out.log_v.resize(n);
  out.iterations.resize(n);
  out.residuals.resize(n);
  std::vector<SinkhornState> states(n);

#pragma omp parallel for schedule(static)
  for (long u = 0; u < n_users; ++u) {
    auto solved = sinkhorn_solve(costs.user(u), marginals, config, true);
    out.policy.user(u) = std::move(solved.plan);
    states[static_cast<std::size_t>(u)] = std::move(solved.state);
  }
  for (std::size_t u = 0; u < n; ++u) {
    out.iterations[u] = states[u].iterations_used;
    out.residuals[u] = states[u].final_residual;
    if (!states[u].converged) ++out.unconverged_users;
  }

  out.impacts = impact(out.policy, relevance, exposure);
  out.objective = nsw_objective(out.impacts);
  const PolicyGradient policy_grad = nsw_gradient_wrt_policy(out.impacts, relevance, exposure, items);

#pragma omp parallel for schedule(static)
  for (long u = 0; u < n_users; ++u) {
    auto& st = states[static_cast<std::size_t>(u)];
    out.gradient.user(u) = sinkhorn_backward(st, policy_grad.user(u));
    out.log_u[static_cast<std::size_t>(u)] = std::move(st.log_u);
    out.log_v[static_cast<std::size_t>(u)] = std::move(st.log_v);
    st = SinkhornState{};
  }

  double sq = 0.0;
  for (const auto& g : policy_grad.slices()) sq += g.squaredNorm();  // dummy column is zero
  out.policy_grad_norm = std::sqrt(sq);
  return out;
}

SolveResult solve_fair_ranking(const RelevanceMatrix& relevance, const ExposureModel& exposure,
                               const ProblemShape& shape, const SolverConfig& config) {
  shape.validate();
  config.validate();
  if (relevance.num_users() != shape.num_users || relevance.num_items() != shape.num_items) {
    throw ShapeError("relevance matrix does not match the problem shape");
  }
  if (exposure.num_positions() != shape.num_positions) {
    throw ShapeError("exposure model does not match the problem shape");
  }

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  const Index users = shape.num_users;
  const long n_users = static_cast<long>(users);

  SolveResult result;
  CostTensor costs(users, shape.num_items, shape.num_positions);
  const Matrix initial_cost =
      cost_from_policy(uniform_plan(shape.num_items, shape.num_positions), config.epsilon);
  for (auto& slice : costs.slices()) slice = initial_cost;

  AdamState adam;
  double best_objective = -std::numeric_limits<double>::infinity();
  // Highest objective over all iterates, including ones with unconverged users.
  double best_any_objective = -std::numeric_limits<double>::infinity();
  CostTensor best_any_costs;
  int best_any_iteration = -1;

  for (int it = 0; it < config.outer_max_iters; ++it) {
    CostEvaluation eval = evaluate_costs(costs, relevance, exposure, config);

    TraceRecord record;
    record.iteration = it;
    record.objective = eval.objective;
    record.policy_grad_norm = eval.policy_grad_norm;
    record.unconverged_users = eval.unconverged_users;
    long total_iters = 0;
    for (int n : eval.iterations) {
      record.max_sinkhorn_iterations = std::max(record.max_sinkhorn_iterations, n);
      total_iters += n;
    }
    record.mean_sinkhorn_iterations = static_cast<double>(total_iters) / static_cast<double>(users);
    double sq = 0.0;
    for (const auto& g : eval.gradient.slices()) sq += g.squaredNorm();
    record.cost_grad_norm = std::sqrt(sq);
    record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.trace.records.push_back(record);

    const bool feasible =
        std::all_of(eval.residuals.begin(), eval.residuals.end(),
                    [&](double r) { return r <= kFeasibleSlack * config.sinkhorn_tol; });
    if (feasible && record.objective > best_objective) {
      best_objective = record.objective;
      result.policy = std::move(eval.policy);
      result.costs = costs;
      result.trace.best_iteration = it;
    } else if (!feasible && record.objective > best_any_objective) {
      best_any_objective = record.objective;
      best_any_costs = costs;
      best_any_iteration = it;
    }

    if (2 * static_cast<long>(record.unconverged_users) > n_users) {
      result.trace.stop_reason = StopReason::kSinkhornStalled;
      break;
    }
    if (record.cost_grad_norm <= config.grad_threshold) {
      result.trace.stop_reason = StopReason::kGradientThreshold;
      break;
    }
    if (it + 1 == config.outer_max_iters) break;

    // Fold the duals into the costs. Row and column shifts change neither
    // X*(C) nor dF/dC, and the next solve starts from a balanced kernel.
    for (Index u = 0; u < users; ++u) {
      Matrix& c = costs.user(u);
      c.colwise() -= config.epsilon * eval.log_u[static_cast<std::size_t>(u)];
      c.rowwise() -= config.epsilon * eval.log_v[static_cast<std::size_t>(u)].transpose();
    }
    adam_update(costs, eval.gradient, adam, config);
  }

  // The best objective may belong to an iterate whose inner solves ran out of
  // budget. Re-solve those costs with a larger budget and keep the result if
  // it is feasible and still better.
  if (best_any_objective > best_objective) {
    const Marginals marginals = Marginals::for_ranking(shape.num_items, shape.num_positions);
    SolverConfig polish = config;
    polish.sinkhorn_max_iters = config.sinkhorn_max_iters * kPolishBudget;
    polish.sinkhorn_tol = kFeasibleSlack * config.sinkhorn_tol;
    RankingPolicy candidate(users, shape.num_items, shape.num_positions);
    std::vector<char> ok(static_cast<std::size_t>(users), 0);
#pragma omp parallel for schedule(static)
    for (long u = 0; u < n_users; ++u) {
      auto solved = sinkhorn_solve(best_any_costs.user(u), marginals, polish, false);
      ok[static_cast<std::size_t>(u)] = solved.state.converged;
      candidate.user(u) = std::move(solved.plan);
    }
    if (std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) {
      const double objective = nsw_objective(impact(candidate, relevance, exposure));
      if (objective > best_objective) {
        result.policy = std::move(candidate);
        result.costs = std::move(best_any_costs);
        result.trace.best_iteration = best_any_iteration;
        result.trace.polished = true;
      }
    }
  }

  if (result.policy.num_users() == 0) {
    throw SolverError("no outer iteration produced a feasible policy");
  }
  return result;
}

}  // namespace fairrank
