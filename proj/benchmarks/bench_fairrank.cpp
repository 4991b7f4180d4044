#include <benchmark/benchmark.h>

#include <random>

#include "fairrank/baselines.hpp"
#include "fairrank/data.hpp"
#include "fairrank/nsw.hpp"
#include "fairrank/policy.hpp"
#include "fairrank/sinkhorn.hpp"

namespace {

using namespace fairrank;

Matrix random_cost(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix c(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) c(i, k) = dist(rng);
  return c;
}

void BM_SinkhornSolve(benchmark::State& state) {
  const Index items = state.range(0);
  const Index m = 11;
  const Matrix cost = random_cost(items, m, 1);
  const auto marg = Marginals::for_ranking(items, m);
  SolverConfig c;
  const bool record = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_solve(cost, marg, c, record));
  state.SetComplexityN(items);
}
BENCHMARK(BM_SinkhornSolve)->ArgsProduct({{50, 100, 250, 500}, {0, 1}})->Complexity();

void BM_SinkhornBackward(benchmark::State& state) {
  const Index items = state.range(0);
  const Index m = 11;
  const auto solved =
      sinkhorn_solve(random_cost(items, m, 2), Marginals::for_ranking(items, m), SolverConfig{});
  const Matrix upstream = Matrix::Ones(items, m);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_backward(solved.state, upstream));
}
BENCHMARK(BM_SinkhornBackward)->Arg(50)->Arg(250)->Arg(500);

void BM_EvaluateCosts(benchmark::State& state) {
  const Index users = state.range(0);
  const Index items = state.range(1);
  const auto data = generate_synthetic(users, items, 3, 1.0);
  const auto e = exposure_model(11, ExposureKind::kLogDecay);
  SolverConfig c;
  CostTensor costs(users, items, 11);
  const Matrix uniform_cost = cost_from_policy(uniform_plan(items, 11), c.epsilon);
  for (auto& s : costs.slices()) s = uniform_cost;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_costs(costs, data.relevance, e, c));
}
BENCHMARK(BM_EvaluateCosts)->Args({100, 50})->Args({250, 250})->Unit(benchmark::kMillisecond);

void BM_SolveFairRanking(benchmark::State& state) {
  const Index users = state.range(0);
  const Index items = state.range(1);
  const auto data = generate_synthetic(users, items, 4, 1.0);
  const auto e = exposure_model(11, ExposureKind::kLogDecay);
  SolverConfig c;
  c.outer_max_iters = 20;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_fair_ranking(data.relevance, e, {users, items, 11}, c));
}
BENCHMARK(BM_SolveFairRanking)->Args({100, 50})->Unit(benchmark::kMillisecond);

void BM_NswGreedy(benchmark::State& state) {
  const Index n = state.range(0);
  const auto data = generate_synthetic(n, n, 5, 1.0);
  const auto e = exposure_model(11, ExposureKind::kLogDecay);
  for (auto _ : state) benchmark::DoNotOptimize(nsw_greedy_policy(data.relevance, e, {n, n, 11}));
}
BENCHMARK(BM_NswGreedy)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
