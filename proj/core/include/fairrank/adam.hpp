#pragma once

#include <cstdint>

#include "fairrank/types.hpp"

namespace fairrank {

/// First and second moment estimates, one slice per user.
struct AdamState {
  CostTensor first_moment;
  CostTensor second_moment;
  std::int64_t step = 0;
};

/// One Adam step in the ascent direction: params += lr * m_hat / (sqrt(v_hat) + eps).
/// An empty state is initialized to zeros on first use.
void adam_update(CostTensor& params, const CostTensor& grads, AdamState& state,
                 const SolverConfig& config);

}  // namespace fairrank
