#include "fairrank/policy.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/errors.hpp"

namespace fairrank {

double ValidationReport::worst() const {
  return std::max({row_residual, column_residual, dummy_residual, negativity});
}

ValidationReport validate_policy(const RankingPolicy& policy, const ProblemShape& shape,
                                 double tol) {
  if (!policy.matches(shape)) {
    throw ShapeError("policy dimensions do not match the problem shape");
  }
  const Index real = shape.num_real_positions();
  const double dummy = shape.dummy_mass();

  ValidationReport report;
  for (const auto& x : policy.slices()) {
    const Vector rows = x.rowwise().sum();
    const Vector cols = x.colwise().sum().transpose();
    report.row_residual = std::max(report.row_residual, (rows.array() - 1.0).abs().maxCoeff());
    report.column_residual =
        std::max(report.column_residual, (cols.head(real).array() - 1.0).abs().maxCoeff());
    report.dummy_residual = std::max(report.dummy_residual, std::abs(cols(real) - dummy));
    report.negativity = std::max(report.negativity, -std::min(0.0, x.minCoeff()));
  }
  // NaN entries fail the comparison below and make the policy infeasible.
  const double worst = report.worst();
  report.ok = worst <= tol && !std::isnan(worst);
  for (const auto& x : policy.slices()) {
    if (!x.allFinite()) report.ok = false;
  }
  return report;
}

Matrix uniform_plan(Index num_items, Index num_positions) {
  const double n = static_cast<double>(num_items);
  Matrix plan = Matrix::Constant(num_items, num_positions, 1.0 / n);
  plan.col(num_positions - 1).setConstant(static_cast<double>(num_items - num_positions + 1) / n);
  return plan;
}

RankingPolicy uniform_policy(const ProblemShape& shape) {
  shape.validate();
  RankingPolicy policy(shape.num_users, shape.num_items, shape.num_positions);
  const Matrix plan = uniform_plan(shape.num_items, shape.num_positions);
  for (auto& slice : policy.slices()) slice = plan;
  return policy;
}

}  // namespace fairrank
