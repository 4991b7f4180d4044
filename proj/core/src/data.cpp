#include "fairrank/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "fairrank/errors.hpp"

namespace fairrank {

SyntheticData generate_synthetic(Index num_users, Index num_items, std::uint64_t seed,
                                 double skew) {
  if (num_users < 1 || num_items < 1) {
    throw InputError("generate_synthetic needs positive dimensions");
  }
  if (!std::isfinite(skew)) throw InputError("skew must be finite");

  Matrix values(num_users, num_items);
  const long rows = static_cast<long>(num_users);
#pragma omp parallel for schedule(static)
  for (long u = 0; u < rows; ++u) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(
                                                         static_cast<std::uint64_t>(u) >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index i = 0; i < num_items; ++i) {
      const double z = normal(rng);
      const double r = 1.0 / (1.0 + std::exp(-skew * z));
      values(u, i) = std::clamp(r, kRelevanceFloor, 1.0);
    }
  }

  SyntheticData out;
  out.relevance = RelevanceMatrix(std::move(values));
  out.params = {num_users, num_items, seed, skew};
  out.generator = "logistic(skew * N(0,1)) clamped to [1e-6, 1], mt19937_64 per user row";
  return out;
}

LoadedRelevance parse_sparse_relevance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_content_line()) throw ParseError(line_no, "missing header \"num_users num_items\"");
  long long users = 0;
  long long items = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> users >> items) || (header >> extra)) {
      throw ParseError(line_no, "expected header \"num_users num_items\"");
    }
    if (users < 1 || items < 1) throw ParseError(line_no, "dimensions must be positive");
  }

  LoadedRelevance out;
  Matrix values = Matrix::Constant(users, items, kRelevanceFloor);
  while (next_content_line()) {
    std::istringstream fields(line);
    long long u = 0;
    long long i = 0;
    double r = 0.0;
    std::string extra;
    if (!(fields >> u >> i >> r) || (fields >> extra)) {
      throw ParseError(line_no, "expected \"user item relevance\"");
    }
    if (u < 0 || u >= users || i < 0 || i >= items) {
      throw BoundsError("line " + std::to_string(line_no) + ": index (" + std::to_string(u) +
                        ", " + std::to_string(i) + ") outside " + std::to_string(users) + " x " +
                        std::to_string(items));
    }
    if (!std::isfinite(r)) throw ParseError(line_no, "relevance is not finite");
    if (!(r > 0.0 && r <= 1.0)) ++out.clamped_entries;
    values(u, i) = std::clamp(r, kRelevanceFloor, 1.0);
    ++out.explicit_entries;
  }
  out.relevance = RelevanceMatrix(std::move(values));
  return out;
}

LoadedRelevance load_sparse_relevance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open relevance file " + path.string());
  return parse_sparse_relevance(in);
}

void write_sparse_relevance(const RelevanceMatrix& relevance, std::ostream& out) {
  out << relevance.num_users() << ' ' << relevance.num_items() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index u = 0; u < relevance.num_users(); ++u) {
    for (Index i = 0; i < relevance.num_items(); ++i) {
      const double r = relevance(u, i);
      if (r > kRelevanceFloor) out << u << ' ' << i << ' ' << r << '\n';
    }
  }
}

ExposureModel exposure_model(Index num_positions, ExposureKind kind, double p) {
  if (num_positions < 2) throw InputError("exposure model needs num_positions >= 2");
  Vector e(num_positions - 1);
  switch (kind) {
    case ExposureKind::kLogDecay:
      for (Index k = 0; k < e.size(); ++k) e(k) = 1.0 / std::log2(static_cast<double>(k) + 2.0);
      break;
    case ExposureKind::kGeometric:
      if (!(p > 0.0 && p <= 1.0)) throw InputError("geometric exposure needs p in (0, 1]");
      for (Index k = 0; k < e.size(); ++k) e(k) = std::pow(p, static_cast<double>(k));
      break;
  }
  return ExposureModel(std::move(e));
}

}  // namespace fairrank
