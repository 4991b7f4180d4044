#pragma once

#include <vector>

#include "fairrank/types.hpp"

namespace fairrank {

/// Row and column masses of a per-user transport plan: every item carries
/// mass 1, every real position mass 1 and the dummy position |I| - m + 1.
struct Marginals {
  Vector row;
  Vector col;

  static Marginals for_ranking(Index num_items, Index num_positions);
};

/// Everything the reverse pass needs to replay a log-domain Sinkhorn solve.
///
/// The plan is x_ik = exp(log_u_i + log_kernel_ik + log_v_k) with
/// log_kernel = -C / epsilon. `log_v_history[t]` holds the column duals after
/// iteration t + 1 (empty when recording was off). The row duals of every
/// iteration are a deterministic function of the previous column duals, so
/// the reverse pass recomputes them bit-for-bit instead of storing |I| values
/// per iteration.
struct SinkhornState {
  Matrix log_kernel;
  Vector log_u;
  Vector log_v;
  Marginals marginals;
  double epsilon = 0.0;
  std::vector<Vector> log_v_history;
  int iterations_used = 0;
  double final_residual = 0.0;
  bool converged = false;

  bool has_history() const {
    return iterations_used > 0 &&
           log_v_history.size() == static_cast<std::size_t>(iterations_used);
  }
};

struct SinkhornResult {
  Matrix plan;
  SinkhornState state;
};

/// Solves min <C, X> + eps * sum x (log x - 1) over plans with the given
/// marginals. Duals start at zero and alternate
///   log_u <- log(row) - logsumexp_k(log_kernel + log_v)
///   log_v <- log(col) - logsumexp_i(log_kernel + log_u)
/// until the L-infinity marginal residual of the plan is <= sinkhorn_tol.
/// Running out of iterations is not an error: `state.converged` is false.
///
/// Throws InputError on non-finite costs, non-positive marginals or bad
/// dimensions.
SinkhornResult sinkhorn_solve(const Matrix& cost, const Marginals& marginals,
                              const SolverConfig& config, bool record_iterates = true);

/// Reverse-mode derivative of the unrolled solve recorded in `state`:
/// maps dF/dX to dF/dC. Throws StateError if the iterates were not recorded.
Matrix sinkhorn_backward(const SinkhornState& state, const Matrix& grad_plan);

/// c_ik = -epsilon * log(x_ik), the cost whose entropic optimum is `plan`.
/// Throws DomainError on a non-positive entry.
Matrix cost_from_policy(const Matrix& plan, double epsilon);

/// L-infinity marginal residual of `plan`.
double marginal_residual(const Matrix& plan, const Marginals& marginals);

}  // namespace fairrank
