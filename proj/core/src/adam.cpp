#include "fairrank/adam.hpp"

#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank {

void adam_update(CostTensor& params, const CostTensor& grads, AdamState& state,
                 const SolverConfig& config) {
  if (grads.num_users() != params.num_users()) {
    throw ShapeError("adam_update: gradient and parameter tensors differ in size");
  }
  if (state.first_moment.num_users() == 0) {
    state.first_moment = CostTensor(params.num_users(), params.num_items(), params.num_positions());
    state.second_moment = state.first_moment;
    state.step = 0;
  }

  ++state.step;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(b1, step);
  const double correction2 = 1.0 - std::pow(b2, step);

  for (Index u = 0; u < params.num_users(); ++u) {
    const Matrix& g = grads.user(u);
    Matrix& m = state.first_moment.user(u);
    Matrix& v = state.second_moment.user(u);
    if (g.rows() != params.user(u).rows() || g.cols() != params.user(u).cols()) {
      throw ShapeError("adam_update: gradient slice shape mismatch");
    }
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseAbs2();
    // Ascent: move along +m_hat.
    params.user(u).array() += config.adam_lr * (m.array() / correction1) /
                              ((v.array() / correction2).sqrt() + config.adam_eps);
  }
}

}  // namespace fairrank
