#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "fairrank/types.hpp"

namespace fairrank {

struct SyntheticParams {
  Index num_users = 0;
  Index num_items = 0;
  std::uint64_t seed = 0;
  double skew = 1.0;
};

struct SyntheticData {
  RelevanceMatrix relevance;
  SyntheticParams params;
  std::string generator;  ///< human-readable description of the sampling scheme
};

/// r(u, i) = clamp(logistic(skew * z_ui), 1e-6, 1) with z_ui standard normal.
/// Each user row draws from its own generator seeded by (seed, u).
SyntheticData generate_synthetic(Index num_users, Index num_items, std::uint64_t seed,
                                 double skew);

struct LoadedRelevance {
  RelevanceMatrix relevance;
  std::size_t clamped_entries = 0;  ///< explicit entries moved into [1e-6, 1]
  std::size_t explicit_entries = 0;
};

/// Reads "num_users num_items" followed by "u i r" triples (0-based).
/// Missing pairs get the relevance floor. Throws ParseError with the line
/// number on malformed input and BoundsError on an out-of-range index.
LoadedRelevance load_sparse_relevance(const std::filesystem::path& path);
LoadedRelevance parse_sparse_relevance(std::istream& in);

/// Writes every entry above the floor as a "u i r" triple.
void write_sparse_relevance(const RelevanceMatrix& relevance, std::ostream& out);

enum class ExposureKind { kLogDecay, kGeometric };

/// log_decay: e(k) = 1 / log2(k + 1); geometric: e(k) = p^(k - 1), for k = 1..m-1.
/// Throws InputError when m < 2 or p is not in (0, 1].
ExposureModel exposure_model(Index num_positions, ExposureKind kind, double p = 0.5);

}  // namespace fairrank
