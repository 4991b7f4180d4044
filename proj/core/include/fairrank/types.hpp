#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fairrank {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Lowest admissible relevance score; loaders and generators clamp to it.
inline constexpr double kRelevanceFloor = 1e-6;

/// Default L-infinity feasibility tolerance for ranking policies.
inline constexpr double kFeasibilityTolerance = 1e-6;

/// Dimensions of a fair ranking instance. `num_positions` counts the dummy
/// last position that absorbs items not shown to the user.
struct ProblemShape {
  Index num_users = 0;
  Index num_items = 0;
  Index num_positions = 0;

  /// Throws ShapeError unless 2 <= num_positions <= num_items.
  void validate() const;

  Index num_real_positions() const { return num_positions - 1; }

  /// Total mass of the dummy column, |I| - m + 1.
  double dummy_mass() const { return static_cast<double>(num_items - num_positions + 1); }

  friend bool operator==(const ProblemShape&, const ProblemShape&) = default;
};

/// r(u, i) for every user/item pair, stored users x items. Entries lie in (0, 1].
class RelevanceMatrix {
 public:
  RelevanceMatrix() = default;
  explicit RelevanceMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  double operator()(Index user, Index item) const { return values_(user, item); }
  Index num_users() const { return values_.rows(); }
  Index num_items() const { return values_.cols(); }

 private:
  Matrix values_;
};

/// Exposure probabilities e(1) >= ... >= e(m-1) > 0 of the real positions.
/// The dummy position is implicit and carries no exposure.
class ExposureModel {
 public:
  ExposureModel() = default;
  explicit ExposureModel(Vector values);

  const Vector& values() const { return values_; }
  double operator()(Index position) const { return values_(position); }
  Index num_real_positions() const { return values_.size(); }
  Index num_positions() const { return values_.size() + 1; }

 private:
  Vector values_;
};

/// A |U| x |I| x m tensor stored as one |I| x m slice per user. The tag keeps
/// policies, costs and gradients from being mixed up.
template <class Tag>
class UserTensor {
 public:
  UserTensor() = default;

  UserTensor(Index num_users, Index num_items, Index num_positions, double fill = 0.0)
      : num_items_(num_items), num_positions_(num_positions) {
    slices_.assign(static_cast<std::size_t>(num_users),
                   Matrix::Constant(num_items, num_positions, fill));
  }

  explicit UserTensor(std::vector<Matrix> slices) : slices_(std::move(slices)) {
    if (!slices_.empty()) {
      num_items_ = slices_.front().rows();
      num_positions_ = slices_.front().cols();
    }
  }

  Index num_users() const { return static_cast<Index>(slices_.size()); }
  Index num_items() const { return num_items_; }
  Index num_positions() const { return num_positions_; }

  Matrix& user(Index u) { return slices_[static_cast<std::size_t>(u)]; }
  const Matrix& user(Index u) const { return slices_[static_cast<std::size_t>(u)]; }

  double& operator()(Index u, Index i, Index k) { return user(u)(i, k); }
  double operator()(Index u, Index i, Index k) const { return user(u)(i, k); }

  const std::vector<Matrix>& slices() const { return slices_; }
  std::vector<Matrix>& slices() { return slices_; }

  /// True when every slice has the same |I| x m dimensions as the shape.
  bool matches(const ProblemShape& shape) const {
    if (num_users() != shape.num_users) return false;
    for (const auto& s : slices_) {
      if (s.rows() != shape.num_items || s.cols() != shape.num_positions) return false;
    }
    return true;
  }

 private:
  std::vector<Matrix> slices_;
  Index num_items_ = 0;
  Index num_positions_ = 0;
};

struct PolicyTag;
struct CostTag;
struct GradientTag;

/// x_uik: probability that item i is shown at position k to user u.
using RankingPolicy = UserTensor<PolicyTag>;
/// c_uik: per-user transport costs whose entropic optimum is the policy.
using CostTensor = UserTensor<CostTag>;
/// dF/dx_uik.
using PolicyGradient = UserTensor<GradientTag>;

/// Throws InputError if any entry of the tensor is NaN or infinite.
void require_finite(const CostTensor& costs);

/// Hyperparameters of the inner Sinkhorn solver and the outer Adam ascent.
struct SolverConfig {
  double epsilon = 0.1;
  int sinkhorn_max_iters = 500;
  double sinkhorn_tol = 1e-6;
  int outer_max_iters = 300;
  double grad_threshold = 1e-4;
  double adam_lr = 0.05;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;

  /// Throws InputError for non-positive epsilon, tolerances or budgets.
  void validate() const;
};

}  // namespace fairrank
