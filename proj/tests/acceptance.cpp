// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   fairrank_acceptance            run every criterion
//   fairrank_acceptance 3 5        run only criteria 3 and 5

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairrank/baselines.hpp"
#include "fairrank/experiment.hpp"
#include "fairrank/metrics.hpp"
#include "fairrank/nsw.hpp"
#include "fairrank/policy.hpp"
#include "fairrank/sinkhorn.hpp"
#include "oracles.hpp"

namespace {

using namespace fairrank;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome sinkhorn_feasibility() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  const Index items = 100;
  const Index m = 11;
  const auto marg = Marginals::for_ranking(items, m);
  int solves = 0;
  int converged = 0;
  double worst = 0.0;
  for (double eps : {0.05, 0.1, 0.3}) {
    SolverConfig c;
    c.epsilon = eps;
    c.sinkhorn_max_iters = 500;
    for (int trial = 0; trial < 100; ++trial) {
      const auto r = sinkhorn_solve(oracle::random_cost(items, m, rng), marg, c, false);
      ++solves;
      if (!r.state.converged) continue;
      ++converged;
      worst = std::max(worst, marginal_residual(r.plan, marg));
    }
  }
  const double secs = seconds_since(start);
  const double rate = static_cast<double>(converged) / solves;
  return {worst <= 1e-6 && rate >= 0.99 && secs < 10.0,
          fmt("%d/%d converged, worst residual %.2e, %.2f s", converged, solves, worst, secs)};
}

Outcome round_trip() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Index> size(11, 50);
  SolverConfig c;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index items = size(rng);
    const Matrix x0 = oracle::random_feasible_plan(items, 11, rng);
    const auto r = sinkhorn_solve(cost_from_policy(x0, c.epsilon), Marginals::for_ranking(items, 11),
                                  c, false);
    worst = std::max(worst, (r.plan - x0).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-5, fmt("worst L-inf deviation %.2e over 50 plans", worst)};
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(3);
  const Index users = 3, items = 5, m = 4;
  const auto e = exposure_model(m, ExposureKind::kLogDecay);
  SolverConfig c;
  c.epsilon = 0.1;
  // A fixed iteration count per solve keeps the map smooth under perturbation.
  c.sinkhorn_tol = 1e-14;
  c.sinkhorn_max_iters = 200000;
  double worst_c = 0.0;
  double worst_x = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = oracle::random_relevance(users, items, rng);
    CostTensor costs(users, items, m);
    for (Index u = 0; u < users; ++u) costs.user(u) = oracle::random_cost(items, m, rng);
    const auto eval = evaluate_costs(costs, r, e, c);
    for (Index u = 0; u < users; ++u) {
      const Matrix numeric = oracle::central_difference(
          [&](const Matrix& cu) {
            CostTensor y = costs;
            y.user(u) = cu;
            return evaluate_costs(y, r, e, c).objective;
          },
          costs.user(u), 1e-5);
      worst_c = std::max(worst_c, oracle::relative_error(eval.gradient.user(u), numeric));
    }
    const auto gx = nsw_gradient_wrt_policy(eval.policy, r, e);
    for (Index u = 0; u < users; ++u) {
      const Matrix numeric = oracle::central_difference(
          [&](const Matrix& xu) {
            RankingPolicy y = eval.policy;
            y.user(u) = xu;
            return oracle::objective_loop(y, r, e);
          },
          eval.policy.user(u), 1e-6);
      worst_x = std::max(worst_x, oracle::relative_error(gx.user(u), numeric));
    }
  }
  return {worst_c <= 1e-4 && worst_x <= 1e-6,
          fmt("dF/dC rel err %.2e, dF/dX rel err %.2e", worst_c, worst_x)};
}

Outcome small_instance_optimality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  const ProblemShape shape{2, 3, 3};
  const auto e = exposure_model(3, ExposureKind::kLogDecay);
  // The optima sit next to permutation matrices, where Sinkhorn needs far
  // more than the default 500 iterations per solve.
  SolverConfig c;
  c.sinkhorn_max_iters = 5000;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = oracle::random_relevance(2, 3, rng);
    const double f = nsw_objective(impact(solve_fair_ranking(r, e, shape, c).policy, r, e));
    const double reference = oracle::nsw_projected_ascent(r, e, shape);
    worst = std::max(worst, (reference - f) / std::abs(reference));
  }
  const double secs = seconds_since(start);
  return {worst <= 0.005 && secs < 60.0,
          fmt("worst relative shortfall %.2e, %.1f s", worst, secs)};
}

using MethodMeans = std::map<Method, PolicyMetrics>;

MethodMeans mean_rows(const ExperimentReport& report) {
  MethodMeans out;
  for (const auto& row : report.rows)
    if (row.trial < 0) out[row.method] = row.metrics;
  return out;
}

Outcome ordering_checks(const MethodMeans& mm) {
  const auto& uni = mm.at(Method::kUniform);
  const auto& rele = mm.at(Method::kMaxRelevance);
  const auto& greedy = mm.at(Method::kNswGreedy);
  const auto& algo = mm.at(Method::kNswAlgo1);
  const bool a = greedy.items_worse_off <= 0.02 && algo.items_worse_off <= 0.02;
  const bool b = algo.mean_max_envy < rele.mean_max_envy;
  const bool c = rele.user_utility >= algo.user_utility;
  const bool d = algo.objective >= 0.99 * greedy.objective && algo.objective >= uni.objective;
  return {a && b && c && d,
          fmt("(a)%s worse-off greedy %.3f algo %.3f; (b)%s envy algo %.4g max_rele %.4g; "
              "(c)%s utility max_rele %.4f algo %.4f; (d)%s F algo %.4f greedy %.4f uniform %.4f",
              a ? "ok" : "FAIL", greedy.items_worse_off, algo.items_worse_off, b ? "ok" : "FAIL",
              algo.mean_max_envy, rele.mean_max_envy, c ? "ok" : "FAIL", rele.user_utility,
              algo.user_utility, d ? "ok" : "FAIL", algo.objective, greedy.objective,
              uni.objective)};
}

Outcome dominance_and_ordering() {
  ExperimentConfig config;
  config.num_users = 100;
  config.num_items = 50;
  config.num_positions = 11;
  config.trials = 5;
  return ordering_checks(mean_rows(run_experiment(config)));
}

Outcome large_scale() {
  ExperimentConfig config;
  config.num_users = 1000;
  config.num_items = 500;
  config.num_positions = 11;
  config.trials = 1;
  const auto instance = make_instance(config, 0);
  const auto start = Clock::now();
  const auto policy = compute_policy(Method::kNswAlgo1, instance, config.solver);
  const double algo_secs = seconds_since(start);

  MethodMeans mm;
  mm[Method::kNswAlgo1] = evaluate_policy(policy, instance.relevance, instance.exposure);
  for (Method m : {Method::kUniform, Method::kMaxRelevance, Method::kNswGreedy}) {
    mm[m] = evaluate_policy(compute_policy(m, instance, config.solver), instance.relevance,
                            instance.exposure);
  }
  const Outcome quality = ordering_checks(mm);

  ExperimentConfig sweep;
  sweep.num_positions = 11;
  sweep.trials = 1;
  sweep.methods = {Method::kNswGreedy, Method::kNswAlgo1};
  sweep.sweep_users = {250};
  sweep.sweep_items = {250};
  double greedy_secs = 0.0;
  double algo250_secs = 0.0;
  for (const auto& row : run_benchmark(sweep).rows)
    (row.method == Method::kNswGreedy ? greedy_secs : algo250_secs) += row.seconds;

  const bool in_time = algo_secs < 30.0 * 60.0;
  const bool faster = algo250_secs <= greedy_secs;
  return {in_time && quality.pass && faster,
          fmt("1000x500 nsw_algo1 %.0f s (%s); ", algo_secs, in_time ? "ok" : "FAIL") +
              quality.detail +
              fmt("; 250x250 nsw_algo1 %.3f s vs nsw_greedy %.3f s (%s)", algo250_secs,
                  greedy_secs, faster ? "ok" : "FAIL")};
}

Outcome metric_oracles() {
  std::mt19937_64 rng(7);
  const ProblemShape shape{10, 10, 4};
  const auto e = exposure_model(4, ExposureKind::kLogDecay);
  double worst = 0.0;
  double uniform_envy = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = oracle::random_relevance(10, 10, rng);
    RankingPolicy x(10, 10, 4);
    for (Index u = 0; u < 10; ++u) x.user(u) = oracle::random_feasible_plan(10, 4, rng);
    worst = std::max({worst, std::abs(user_utility(x, r, e) - oracle::user_utility_loop(x, r, e)),
                      std::abs(mean_max_envy(x, r, e) - oracle::mean_max_envy_loop(x, r, e)),
                      std::abs(items_better_off(x, r, e) -
                               oracle::items_changed_loop(x, r, e, 0.1, true)),
                      std::abs(items_worse_off(x, r, e) -
                               oracle::items_changed_loop(x, r, e, 0.1, false))});
    uniform_envy = std::max(uniform_envy, std::abs(mean_max_envy(uniform_policy(shape), r, e)));
  }
  return {worst <= 1e-10 && uniform_envy <= 1e-10,
          fmt("worst metric deviation %.2e, uniform envy %.2e", worst, uniform_envy)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fairrank_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.ini") << "[data]\nnum_users = 40\nnum_items = 25\nnum_positions = 6\n"
                                       "[output]\ntrials = 2\nseed = 11\n";
  const auto config = load_experiment_config(dir / "config.ini");
#ifdef FAIRRANK_CLI_PATH
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(FAIRRANK_CLI_PATH) + " experiment " +
                            (dir / "config.ini").string() + " --out " + (dir / run).string() +
                            " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed"};
  }
  const char* how = "fairrank experiment";
#else
  run_experiment(config, dir / "a");
  run_experiment(config, dir / "b");
  const char* how = "run_experiment";
#endif
  const std::string a = slurp(dir / "a" / "metrics.csv");
  const std::string b = slurp(dir / "b" / "metrics.csv");
  return {!a.empty() && a == b, fmt("%s twice: %zu bytes, %s", how, a.size(),
                                    a == b ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "sinkhorn feasibility", sinkhorn_feasibility},
      {2, "cost round trip", round_trip},
      {3, "gradient correctness", gradient_correctness},
      {4, "small-instance optimality", small_instance_optimality},
      {5, "dominance and fairness ordering", dominance_and_ordering},
      {6, "large-scale run", large_scale},
      {7, "metric oracles", metric_oracles},
      {8, "determinism", determinism},
  };
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
