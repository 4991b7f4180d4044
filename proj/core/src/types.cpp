#include "fairrank/types.hpp"

#include <cmath>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank {

void ProblemShape::validate() const {
  if (num_users < 1 || num_items < 1) {
    throw ShapeError("problem shape needs at least one user and one item");
  }
  if (num_positions < 2) {
    throw ShapeError("num_positions must be >= 2 (one real position plus the dummy)");
  }
  if (num_positions > num_items) {
    throw ShapeError("num_positions (" + std::to_string(num_positions) +
                     ") must not exceed num_items (" + std::to_string(num_items) + ")");
  }
}

RelevanceMatrix::RelevanceMatrix(Matrix values) : values_(std::move(values)) {
  for (Index u = 0; u < values_.rows(); ++u) {
    for (Index i = 0; i < values_.cols(); ++i) {
      const double r = values_(u, i);
      if (!(r > 0.0 && r <= 1.0)) {
        throw DomainError("relevance(" + std::to_string(u) + ", " + std::to_string(i) +
                          ") = " + std::to_string(r) + " is outside (0, 1]");
      }
    }
  }
}

ExposureModel::ExposureModel(Vector values) : values_(std::move(values)) {
  if (values_.size() < 1) {
    throw InputError("exposure model needs at least one real position");
  }
  for (Index k = 0; k < values_.size(); ++k) {
    const double e = values_(k);
    if (!(e > 0.0 && e <= 1.0)) {
      throw InputError("exposure e(" + std::to_string(k + 1) + ") is outside (0, 1]");
    }
    if (k > 0 && e > values_(k - 1)) {
      throw InputError("exposure must be non-increasing in position");
    }
  }
}

void require_finite(const CostTensor& costs) {
  for (const auto& slice : costs.slices()) {
    if (!slice.allFinite()) throw InputError("cost tensor contains a non-finite entry");
  }
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(sinkhorn_tol > 0.0)) throw InputError("sinkhorn_tol must be positive");
  if (!(grad_threshold > 0.0)) throw InputError("grad_threshold must be positive");
  if (sinkhorn_max_iters < 1) throw InputError("sinkhorn_max_iters must be positive");
  if (outer_max_iters < 1) throw InputError("outer_max_iters must be positive");
  if (!(adam_lr > 0.0)) throw InputError("adam_lr must be positive");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InputError("adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InputError("adam_eps must be positive");
}

}  // namespace fairrank
