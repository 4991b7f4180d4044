#pragma once

// Reference implementations used only by the tests. None of these call into
// the code paths they check: metrics are plain loops, the transport and NSW
// oracles work on the primal problem by projected gradient with a Dykstra
// projection, and derivatives come from central differences.

#include <functional>
#include <random>

#include "fairrank/types.hpp"

namespace fairrank::oracle {

/// Random relevance in [lo, 1].
RelevanceMatrix random_relevance(Index users, Index items, std::mt19937_64& rng, double lo = 0.05);

/// Random strictly positive cost matrix with entries in [0, scale).
Matrix random_cost(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0);

/// Random strictly positive plan with unit rows, unit real columns and a
/// dummy column of mass |I| - m + 1 (balanced by plain matrix scaling).
Matrix random_feasible_plan(Index items, Index positions, std::mt19937_64& rng);

// Plain-loop metric references.
double impact_loop(const RankingPolicy& x, const RelevanceMatrix& r, const ExposureModel& e,
                   Index item);
/// Imp_i(X_j): item i's impact under item j's allocation.
double swapped_impact_loop(const RankingPolicy& x, const RelevanceMatrix& r,
                           const ExposureModel& e, Index item, Index allocation);
double user_utility_loop(const RankingPolicy& x, const RelevanceMatrix& r, const ExposureModel& e);
double mean_max_envy_loop(const RankingPolicy& x, const RelevanceMatrix& r,
                          const ExposureModel& e);
double items_changed_loop(const RankingPolicy& x, const RelevanceMatrix& r,
                          const ExposureModel& e, double threshold, bool better);
double objective_loop(const RankingPolicy& x, const RelevanceMatrix& r, const ExposureModel& e);

/// Euclidean projection of y onto {X >= 0, X 1 = row, X^T 1 = col} by
/// Dykstra's alternating projections.
Matrix project_transport(const Matrix& y, const Vector& row, const Vector& col,
                         int max_sweeps = 20000, double tol = 1e-15);

/// Minimizes <C, X> + eps * sum x (log x - 1) over the transport polytope by
/// projected gradient descent until the step is below `tol`.
Matrix entropic_ot_pgd(const Matrix& cost, const Vector& row, const Vector& col, double eps,
                       double tol = 1e-12);

/// Maximizes sum_i log Imp_i directly over per-user doubly stochastic plans by
/// projected gradient ascent. Returns the best objective seen.
double nsw_projected_ascent(const RelevanceMatrix& r, const ExposureModel& e,
                            const ProblemShape& shape, int steps = 100000);

/// Central differences of f with respect to every entry of x.
Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& x,
                          double step);

/// ||a - b||_2 / ||b||_2
double relative_error(const Matrix& a, const Matrix& b);

}  // namespace fairrank::oracle
