#include "fairrank/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairrank/baselines.hpp"
#include "fairrank/errors.hpp"
#include "fairrank/nsw.hpp"
#include "fairrank/policy.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef FAIRRANK_VERSION_STRING
#define FAIRRANK_VERSION_STRING "0.0.0"
#endif

namespace fairrank {

namespace {

constexpr std::string_view kMethodNames[] = {"uniform", "max_rele", "nsw_greedy", "nsw_algo1"};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  T out{};
  std::string rest;
  if (!(in >> out) || (in >> rest)) {
    throw ConfigError("invalid value for " + key + ": \"" + value + "\"");
  }
  return out;
}

Index parse_positive_index(const std::string& key, const std::string& value) {
  const auto v = parse_number<long long>(key, value);
  if (v < 1) throw ConfigError(key + " must be positive");
  return static_cast<Index>(v);
}

std::vector<Index> parse_index_list(const std::string& key, const std::string& value) {
  std::vector<Index> out;
  for (const auto& item : split_list(value)) out.push_back(parse_positive_index(key, item));
  if (out.empty()) throw ConfigError(key + " must list at least one value");
  return out;
}

// Fixed-format number printing that does not depend on the global locale.
std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(12) << value;
  return out.str();
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

nlohmann::json meta_json(const ExperimentConfig& config, const Instance& instance,
                         std::string_view command) {
  nlohmann::json meta;
  meta["command"] = std::string(command);
  meta["library_version"] = std::string(version());
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [key, value] : config.raw) echo[key] = value;
  meta["config"] = echo;

  nlohmann::json effective;
  effective["num_positions"] = config.num_positions;
  effective["trials"] = config.trials;
  effective["seed"] = config.seed;
  effective["impact_threshold"] = config.impact_threshold;
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : config.methods) methods.push_back(std::string(method_name(m)));
  effective["methods"] = methods;
  const SolverConfig& s = config.solver;
  effective["solver"] = {{"epsilon", s.epsilon},
                         {"sinkhorn_max_iters", s.sinkhorn_max_iters},
                         {"sinkhorn_tol", s.sinkhorn_tol},
                         {"outer_max_iters", s.outer_max_iters},
                         {"grad_threshold", s.grad_threshold},
                         {"adam_lr", s.adam_lr},
                         {"adam_beta1", s.adam_beta1},
                         {"adam_beta2", s.adam_beta2},
                         {"adam_eps", s.adam_eps}};
  meta["effective"] = effective;

  nlohmann::json data;
  if (config.source == DataSource::kSynthetic) {
    data["source"] = "synthetic";
    data["num_users"] = config.num_users;
    data["num_items"] = config.num_items;
    data["skew"] = config.skew;
    data["trial_seeds"] = "seed + trial";
  } else {
    data["source"] = "file";
    data["path"] = config.relevance_path.string();
  }
  data["generator"] = instance.generator;
  data["relevance_floor"] = kRelevanceFloor;
  data["exposure"] = config.exposure == ExposureKind::kLogDecay ? "log_decay" : "geometric";
  if (config.exposure == ExposureKind::kGeometric) data["exposure_p"] = config.exposure_p;
  std::vector<double> e(instance.exposure.values().data(),
                        instance.exposure.values().data() + instance.exposure.values().size());
  data["exposure_values"] = e;
  meta["data"] = data;
  return meta;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string_view version() { return FAIRRANK_VERSION_STRING; }

std::string_view method_name(Method method) {
  return kMethodNames[static_cast<std::size_t>(method)];
}

std::optional<Method> parse_method(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kMethodNames); ++i) {
    if (kMethodNames[i] == name) return static_cast<Method>(i);
  }
  return std::nullopt;
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }

  ExperimentConfig config;
  std::set<std::string> methods_seen;
  bool methods_given = false;

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key \"" + section + "\" must appear inside a [section]");
    }
    for (const auto& [name, node] : body) {
      const std::string key = section + "." + name;
      const std::string value = trim(node.data());
      config.raw[key] = value;

      if (key == "data.source") {
        if (value == "synthetic") {
          config.source = DataSource::kSynthetic;
        } else if (value == "file") {
          config.source = DataSource::kFile;
        } else {
          throw ConfigError("data.source must be synthetic or file");
        }
      } else if (key == "data.num_users") {
        config.num_users = parse_positive_index(key, value);
      } else if (key == "data.num_items") {
        config.num_items = parse_positive_index(key, value);
      } else if (key == "data.num_positions") {
        config.num_positions = parse_positive_index(key, value);
      } else if (key == "data.skew") {
        config.skew = parse_number<double>(key, value);
      } else if (key == "data.path") {
        config.relevance_path = value;
      } else if (key == "data.exposure") {
        if (value == "log_decay") {
          config.exposure = ExposureKind::kLogDecay;
        } else if (value == "geometric") {
          config.exposure = ExposureKind::kGeometric;
        } else {
          throw ConfigError("data.exposure must be log_decay or geometric");
        }
      } else if (key == "data.exposure_p") {
        config.exposure_p = parse_number<double>(key, value);
      } else if (key == "solver.epsilon") {
        config.solver.epsilon = parse_number<double>(key, value);
      } else if (key == "solver.sinkhorn_max_iters") {
        config.solver.sinkhorn_max_iters = parse_number<int>(key, value);
      } else if (key == "solver.sinkhorn_tol") {
        config.solver.sinkhorn_tol = parse_number<double>(key, value);
      } else if (key == "solver.outer_max_iters") {
        config.solver.outer_max_iters = parse_number<int>(key, value);
      } else if (key == "solver.grad_threshold") {
        config.solver.grad_threshold = parse_number<double>(key, value);
      } else if (key == "solver.adam_lr") {
        config.solver.adam_lr = parse_number<double>(key, value);
      } else if (key == "solver.adam_beta1") {
        config.solver.adam_beta1 = parse_number<double>(key, value);
      } else if (key == "solver.adam_beta2") {
        config.solver.adam_beta2 = parse_number<double>(key, value);
      } else if (key == "solver.adam_eps") {
        config.solver.adam_eps = parse_number<double>(key, value);
      } else if (key == "methods.methods") {
        methods_given = true;
        config.methods.clear();
        for (const auto& item : split_list(value)) {
          const auto m = parse_method(item);
          if (!m) throw ConfigError("unknown method \"" + item + "\"");
          if (!methods_seen.insert(item).second) {
            throw ConfigError("method \"" + item + "\" listed twice");
          }
          config.methods.push_back(*m);
        }
      } else if (key == "output.trials") {
        config.trials = parse_number<int>(key, value);
      } else if (key == "output.seed") {
        config.seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "output.threads") {
        config.threads = parse_number<int>(key, value);
      } else if (key == "output.impact_threshold") {
        config.impact_threshold = parse_number<double>(key, value);
      } else if (key == "benchmark.users") {
        config.sweep_users = parse_index_list(key, value);
      } else if (key == "benchmark.items") {
        config.sweep_items = parse_index_list(key, value);
      } else {
        throw ConfigError("unknown configuration key \"" + key + "\"");
      }
    }
  }

  if (methods_given && config.methods.empty()) {
    throw ConfigError("methods.methods must list at least one method");
  }
  if (config.trials < 1) throw ConfigError("output.trials must be positive");
  if (config.threads < 0) throw ConfigError("output.threads must not be negative");
  if (config.num_positions < 2) throw ConfigError("data.num_positions must be >= 2");
  if (config.source == DataSource::kFile && config.relevance_path.empty()) {
    throw ConfigError("data.source = file needs data.path");
  }
  if (!(config.impact_threshold >= 0.0 && config.impact_threshold < 1.0)) {
    throw ConfigError("output.impact_threshold must lie in [0, 1)");
  }
  if (config.exposure == ExposureKind::kGeometric &&
      !(config.exposure_p > 0.0 && config.exposure_p <= 1.0)) {
    throw ConfigError("data.exposure_p must lie in (0, 1]");
  }
  try {
    config.solver.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  auto config = parse_experiment_config(in);
  // Relative data paths resolve against the config file's directory.
  if (config.source == DataSource::kFile && config.relevance_path.is_relative()) {
    config.relevance_path = path.parent_path() / config.relevance_path;
  }
  return config;
}

Instance make_instance(const ExperimentConfig& config, int trial, Index num_users,
                       Index num_items) {
  Instance inst;
  if (config.source == DataSource::kSynthetic) {
    auto data = generate_synthetic(num_users, num_items,
                                   config.seed + static_cast<std::uint64_t>(trial), config.skew);
    inst.relevance = std::move(data.relevance);
    inst.generator = std::move(data.generator);
  } else {
    auto loaded = load_sparse_relevance(config.relevance_path);
    inst.relevance = std::move(loaded.relevance);
    inst.generator = "sparse file " + config.relevance_path.filename().string() + " (" +
                     std::to_string(loaded.explicit_entries) + " entries, " +
                     std::to_string(loaded.clamped_entries) + " clamped)";
  }
  inst.shape = {inst.relevance.num_users(), inst.relevance.num_items(), config.num_positions};
  inst.shape.validate();
  inst.exposure = exposure_model(config.num_positions, config.exposure, config.exposure_p);
  return inst;
}

Instance make_instance(const ExperimentConfig& config, int trial) {
  return make_instance(config, trial, config.num_users, config.num_items);
}

RankingPolicy compute_policy(Method method, const Instance& instance,
                             const SolverConfig& solver) {
  switch (method) {
    case Method::kUniform:
      return uniform_policy(instance.shape);
    case Method::kMaxRelevance:
      return max_relevance_policy(instance.relevance, instance.shape);
    case Method::kNswGreedy:
      return nsw_greedy_policy(instance.relevance, instance.exposure, instance.shape);
    case Method::kNswAlgo1:
      return solve_fair_ranking(instance.relevance, instance.exposure, instance.shape, solver)
          .policy;
  }
  throw std::logic_error("unhandled method");
}

void write_metrics_csv(const ExperimentReport& report, std::ostream& out) {
  out << "method,trial,num_users,num_items,num_positions,nsw_objective,user_utility,"
         "mean_max_envy,items_better_off,items_worse_off\n";
  for (const auto& row : report.rows) {
    out << method_name(row.method) << ','
        << (row.trial < 0 ? std::string("mean") : std::to_string(row.trial)) << ','
        << row.shape.num_users << ',' << row.shape.num_items << ',' << row.shape.num_positions
        << ',' << format_number(row.metrics.objective) << ','
        << format_number(row.metrics.user_utility) << ','
        << format_number(row.metrics.mean_max_envy) << ','
        << format_number(row.metrics.items_better_off) << ','
        << format_number(row.metrics.items_worse_off) << '\n';
  }
}

void write_timings_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "method,num_users,num_items,m,seconds,trial\n";
  for (const auto& row : report.rows) {
    out << method_name(row.method) << ',' << row.num_users << ',' << row.num_items << ','
        << row.num_positions << ',' << format_number(row.seconds) << ',' << row.trial << '\n';
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir) {
  set_threads(config.threads);
  ExperimentReport report;
  std::vector<MetricsRow> sums(config.methods.size());
  std::optional<Instance> first;

  for (int trial = 0; trial < config.trials; ++trial) {
    Instance inst = make_instance(config, trial);
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const Method method = config.methods[mi];
      const RankingPolicy policy = compute_policy(method, inst, config.solver);
      MetricsRow row{method, trial, inst.shape,
                     evaluate_policy(policy, inst.relevance, inst.exposure,
                                     config.impact_threshold)};
      report.rows.push_back(row);

      auto& acc = sums[mi];
      acc.method = method;
      acc.trial = -1;
      acc.shape = inst.shape;
      acc.metrics.objective += row.metrics.objective;
      acc.metrics.user_utility += row.metrics.user_utility;
      acc.metrics.mean_max_envy += row.metrics.mean_max_envy;
      acc.metrics.items_better_off += row.metrics.items_better_off;
      acc.metrics.items_worse_off += row.metrics.items_worse_off;
    }
    if (!first) first = std::move(inst);
  }

  const double n = static_cast<double>(config.trials);
  for (auto& acc : sums) {
    acc.metrics.objective /= n;
    acc.metrics.user_utility /= n;
    acc.metrics.mean_max_envy /= n;
    acc.metrics.items_better_off /= n;
    acc.metrics.items_worse_off /= n;
    report.rows.push_back(acc);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    write_metrics_csv(report, csv);
    write_text_file(out_dir / "metrics.csv", csv.str());
    write_text_file(out_dir / "meta.json", meta_json(config, *first, "experiment").dump(2) + "\n");
  }
  return report;
}

BenchmarkReport run_benchmark(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir) {
  using Clock = std::chrono::steady_clock;
  set_threads(config.threads);
  BenchmarkReport report;
  std::optional<Instance> first;

  const std::vector<Index> file_dims{0};
  const bool synthetic = config.source == DataSource::kSynthetic;
  for (Index users : synthetic ? config.sweep_users : file_dims) {
    for (Index items : synthetic ? config.sweep_items : file_dims) {
      for (int trial = 0; trial < config.trials; ++trial) {
        Instance inst = synthetic ? make_instance(config, trial, users, items)
                                  : make_instance(config, trial);
        for (Method method : config.methods) {
          const auto start = Clock::now();
          const RankingPolicy policy = compute_policy(method, inst, config.solver);
          const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
          report.rows.push_back({method, inst.shape.num_users, inst.shape.num_items,
                                 inst.shape.num_positions, seconds, trial});
        }
        if (!first) first = std::move(inst);
      }
    }
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    write_timings_csv(report, csv);
    write_text_file(out_dir / "timings.csv", csv.str());
    write_text_file(out_dir / "meta.json", meta_json(config, *first, "benchmark").dump(2) + "\n");
  }
  return report;
}

}  // namespace fairrank
