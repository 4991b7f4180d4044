#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairrank/data.hpp"
#include "fairrank/metrics.hpp"
#include "fairrank/types.hpp"

namespace fairrank {

enum class Method { kUniform, kMaxRelevance, kNswGreedy, kNswAlgo1 };

std::string_view method_name(Method method);
/// Accepts "uniform", "max_rele", "nsw_greedy", "nsw_algo1".
std::optional<Method> parse_method(std::string_view name);

enum class DataSource { kSynthetic, kFile };

struct ExperimentConfig {
  // [data]
  DataSource source = DataSource::kSynthetic;
  Index num_users = 100;
  Index num_items = 50;
  Index num_positions = 11;
  double skew = 1.0;
  std::filesystem::path relevance_path;
  ExposureKind exposure = ExposureKind::kLogDecay;
  double exposure_p = 0.5;

  // [solver]
  SolverConfig solver;

  // [methods]
  std::vector<Method> methods{Method::kUniform, Method::kMaxRelevance, Method::kNswGreedy,
                              Method::kNswAlgo1};

  // [output]
  int trials = 5;
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0 keeps the runtime default
  double impact_threshold = kDefaultImpactChangeThreshold;

  // [benchmark]
  std::vector<Index> sweep_users{250};
  std::vector<Index> sweep_items{250};

  /// Every key as read from the file, "section.key" -> value, for meta.json.
  std::map<std::string, std::string> raw;
};

/// Parses an INI-style file with [data], [solver], [methods], [output] and
/// [benchmark] sections. Unknown keys and bad values throw ConfigError.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::istream& in);

/// One evaluated problem instance.
struct Instance {
  RelevanceMatrix relevance;
  ExposureModel exposure;
  ProblemShape shape;
  std::string generator;
};

/// Builds the instance for one trial; synthetic data uses seed + trial.
Instance make_instance(const ExperimentConfig& config, int trial);
Instance make_instance(const ExperimentConfig& config, int trial, Index num_users,
                       Index num_items);

RankingPolicy compute_policy(Method method, const Instance& instance, const SolverConfig& solver);

struct MetricsRow {
  Method method = Method::kUniform;
  int trial = 0;  ///< -1 marks the mean over trials
  ProblemShape shape;
  PolicyMetrics metrics;
};

struct TimingRow {
  Method method = Method::kUniform;
  Index num_users = 0;
  Index num_items = 0;
  Index num_positions = 0;
  double seconds = 0.0;
  int trial = 0;
};

struct ExperimentReport {
  std::vector<MetricsRow> rows;  ///< per-trial rows, then one mean row per method
};

struct BenchmarkReport {
  std::vector<TimingRow> rows;
};

/// Evaluates every configured method on every trial. Writes metrics.csv and
/// meta.json into `out_dir` when it is non-empty.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir = {});

/// Times every configured method over the users x items sweep. Writes
/// timings.csv and meta.json into `out_dir` when it is non-empty.
BenchmarkReport run_benchmark(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir = {});

void write_metrics_csv(const ExperimentReport& report, std::ostream& out);
void write_timings_csv(const BenchmarkReport& report, std::ostream& out);

/// Library version string, e.g. "0.1.0".
std::string_view version();

}  // namespace fairrank
