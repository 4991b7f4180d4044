#include "fairrank/sinkhorn.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank {

namespace {

// out_i = logsumexp_k(log_kernel_ik + log_v_k)
void row_logsumexp(const Matrix& log_kernel, const Vector& log_v, Matrix& work, Vector& out) {
  work.noalias() = log_kernel.rowwise() + log_v.transpose();
  const Vector peak = work.rowwise().maxCoeff();
  work.colwise() -= peak;
  out = peak.array() + work.array().exp().rowwise().sum().log();
}

// out_k = logsumexp_i(log_kernel_ik + log_u_i)
void col_logsumexp(const Matrix& log_kernel, const Vector& log_u, Matrix& work, Vector& out) {
  work.noalias() = log_kernel.colwise() + log_u;
  const Eigen::RowVectorXd peak = work.colwise().maxCoeff();
  work.rowwise() -= peak;
  out = peak.transpose().array() + work.array().exp().colwise().sum().log().transpose();
}

// exp(log_u_i + log_kernel_ik + log_v_k)
Matrix reconstruct(const Matrix& log_kernel, const Vector& log_u, const Vector& log_v) {
  Matrix plan = log_kernel;
  plan.colwise() += log_u;
  plan.rowwise() += log_v.transpose();
  return plan.array().exp().matrix();
}

}  // namespace

Marginals Marginals::for_ranking(Index num_items, Index num_positions) {
  Marginals m;
  m.row = Vector::Ones(num_items);
  m.col = Vector::Ones(num_positions);
  m.col(num_positions - 1) = static_cast<double>(num_items - num_positions + 1);
  return m;
}

double marginal_residual(const Matrix& plan, const Marginals& marginals) {
  const double rows = (plan.rowwise().sum() - marginals.row).cwiseAbs().maxCoeff();
  const double cols = (plan.colwise().sum().transpose() - marginals.col).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

SinkhornResult sinkhorn_solve(const Matrix& cost, const Marginals& marginals,
                              const SolverConfig& config, bool record_iterates) {
  if (cost.rows() != marginals.row.size() || cost.cols() != marginals.col.size()) {
    throw InputError("cost matrix dimensions do not match the marginals");
  }
  if (cost.size() == 0) throw InputError("empty cost matrix");
  if (!cost.allFinite()) throw InputError("cost matrix contains a non-finite entry");
  if (!(marginals.row.minCoeff() > 0.0) || !(marginals.col.minCoeff() > 0.0)) {
    throw InputError("marginals must be strictly positive");
  }
  if (!(config.epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (config.sinkhorn_max_iters < 1) throw InputError("sinkhorn_max_iters must be positive");

  const Index rows = cost.rows();
  const Index cols = cost.cols();

  SinkhornResult result;
  SinkhornState& st = result.state;
  st.log_kernel = -cost / config.epsilon;
  st.marginals = marginals;
  st.epsilon = config.epsilon;
  st.log_u = Vector::Zero(rows);
  st.log_v = Vector::Zero(cols);

  const Vector log_row = marginals.row.array().log();
  const Vector log_col = marginals.col.array().log();

  Matrix work(rows, cols);
  Vector row_lse(rows);
  Vector col_lse(cols);
  row_logsumexp(st.log_kernel, st.log_v, work, row_lse);

  if (record_iterates) {
    st.log_v_history.reserve(static_cast<std::size_t>(std::min(config.sinkhorn_max_iters, 64)));
  }

  bool met = false;
  for (int it = 1; it <= config.sinkhorn_max_iters; ++it) {
    st.log_u = log_row - row_lse;
    col_logsumexp(st.log_kernel, st.log_u, work, col_lse);
    st.log_v = log_col - col_lse;
    if (record_iterates) st.log_v_history.push_back(st.log_v);
    st.iterations_used = it;

    // Columns are exact after the v update; the row sums come for free from
    // the logsumexp the next u update needs anyway.
    row_logsumexp(st.log_kernel, st.log_v, work, row_lse);
    const double row_residual =
        ((st.log_u + row_lse).array().exp() - marginals.row.array()).abs().maxCoeff();
    if (row_residual <= config.sinkhorn_tol) {
      met = true;
      break;
    }
  }

  result.plan = reconstruct(st.log_kernel, st.log_u, st.log_v);
  st.final_residual = marginal_residual(result.plan, marginals);
  // The plan residual can exceed the stopping residual by rounding alone.
  st.converged = met || st.final_residual <= config.sinkhorn_tol;
  return result;
}

Matrix sinkhorn_backward(const SinkhornState& state, const Matrix& grad_plan) {
  if (!state.has_history()) {
    throw StateError("sinkhorn_backward needs a solve with recorded iterates");
  }
  const Index rows = state.log_kernel.rows();
  const Index cols = state.log_kernel.cols();
  if (grad_plan.rows() != rows || grad_plan.cols() != cols) {
    throw ShapeError("upstream gradient does not match the plan dimensions");
  }

  const Vector& row = state.marginals.row;
  const Vector& col = state.marginals.col;
  const Vector log_row = row.array().log();
  const auto& vs = state.log_v_history;
  const int iters = state.iterations_used;
  const Vector zero_v = Vector::Zero(cols);

  Matrix work(rows, cols);
  Vector lse(rows);
  // Replays the row update of iteration t (0-based) exactly as the forward pass ran it.
  auto row_dual = [&](int t) -> Vector {
    row_logsumexp(state.log_kernel, t > 0 ? vs[static_cast<std::size_t>(t - 1)] : zero_v, work,
                  lse);
    return log_row - lse;
  };

  // Output x = exp(a_T + f + b_T): d/d(log x) = grad * x.
  Vector a = row_dual(iters - 1);
  const Matrix plan = reconstruct(state.log_kernel, a, vs.back());
  const Matrix through_log = grad_plan.cwiseProduct(plan);

  Matrix kernel_bar = through_log;
  Vector u_bar = through_log.rowwise().sum();
  Vector v_bar = through_log.colwise().sum().transpose();

  for (int t = iters - 1; t >= 0; --t) {
    if (t != iters - 1) a = row_dual(t);
    const Vector& b = vs[static_cast<std::size_t>(t)];
    const Vector& b_prev = t > 0 ? vs[static_cast<std::size_t>(t - 1)] : zero_v;

    // b = log(col) - logsumexp_i(f + a): softmax weights are x_t / col.
    {
      const Matrix x_t = reconstruct(state.log_kernel, a, b);
      const Vector w = v_bar.cwiseQuotient(col);
      kernel_bar.noalias() -= (x_t.array().rowwise() * w.transpose().array()).matrix();
      u_bar.noalias() -= x_t * w;
    }
    // a = log(row) - logsumexp_k(f + b_prev): softmax weights are y_t / row.
    {
      const Matrix y_t = reconstruct(state.log_kernel, a, b_prev);
      const Vector z = u_bar.cwiseQuotient(row);
      kernel_bar.noalias() -= (y_t.array().colwise() * z.array()).matrix();
      v_bar.noalias() = -(y_t.transpose() * z);
    }
    u_bar.setZero();
  }

  // log_kernel = -C / epsilon
  return -kernel_bar / state.epsilon;
}

Matrix cost_from_policy(const Matrix& plan, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!plan.allFinite() || !(plan.minCoeff() > 0.0)) {
    throw DomainError("cost_from_policy needs a strictly positive plan");
  }
  return -epsilon * plan.array().log().matrix();
}

}  // namespace fairrank
