// SPDX-License-Identifier: Apache-2.0
//
// Hash codebooks: binary M x N selection matrices that assign each training
// beam its set of superposed DFT beams. Covers the independent-row random
// construction, the grouped sampling-without-replacement construction with
// equalized column counts, the degenerate sweeping / hierarchical codebooks,
// an offline Monte Carlo search for a fixed codebook, and a line-oriented
// text file format.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hashbeam/array_channel.hpp"

namespace hashbeam {

/// Raised for malformed codebook files; message carries line context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a structurally well-formed codebook violates an invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Provenance { ExistingRandom, ProposedRandom, Fixed, Sweeping, Hierarchical };

std::string_view to_string(Provenance provenance);
Provenance provenance_from_string(std::string_view text);

struct HashCodebook {
  int rows = 0;       // M, number of training beams
  int cols = 0;       // N, number of DFT beams
  int l_per_row = 0;  // L, selections per training beam
  Provenance provenance = Provenance::ExistingRandom;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint8_t> bits;  // row-major M x N, values 0/1

  bool bit(int row, int col) const { return bits[static_cast<std::size_t>(row) * cols + col] != 0; }
  void set_bit(int row, int col, bool value) {
    bits[static_cast<std::size_t>(row) * cols + col] = value ? 1 : 0;
  }

  /// Ascending 0-based column indices selected by one row.
  std::vector<int> row_members(int row) const;

  bool operator==(const HashCodebook&) const = default;
};

struct CodebookStats {
  int n_beams = 0;
  std::vector<int> column_counts;  // G_n, 0-based
  std::vector<int> pair_overlap;   // K, row-major N x N

  /// K_{a,b} for 0-based beam indices; K_{a,a} equals the column count.
  int overlap(int a, int b) const { return pair_overlap[static_cast<std::size_t>(a) * n_beams + b]; }
};

/// Every row picks an independent uniform L-subset of the N beams.
HashCodebook gen_existing_random(int n_beams, int m_rows, int l, std::uint64_t seed);

/// Grouped construction: rows are processed in groups of N/L; within a group
/// the candidate set starts at {1..N} and each row removes its L picks, so
/// each beam appears exactly once per group and every column count equals
/// M*L/N. Requires L | N and (N/L) | M.
HashCodebook gen_proposed_random(int n_beams, int m_rows, int l, std::uint64_t seed);

/// Identity codebook (exhaustive sweep): M = N, L = 1.
HashCodebook gen_sweeping(int n_beams);

/// Binary-search style codebook: for each level, one row per half of the
/// index range, coarse halves first. M = 2*log2(N), L = N/2, N a power of two.
HashCodebook gen_hierarchical(int n_beams);

CodebookStats stats(const HashCodebook& cb);

/// Checks dimension sanity, row sums, and the provenance-specific invariants.
/// Throws ValidationError naming the violated invariant.
void validate(const HashCodebook& cb);

std::string to_text(const HashCodebook& cb);
HashCodebook from_text(std::string_view text, std::string_view origin = "<string>");

void save(const HashCodebook& cb, const std::filesystem::path& path);
HashCodebook load(const std::filesystem::path& path);

/// Offline fixed-codebook search. Generates `candidates` grouped-random
/// codebooks from per-candidate derived seeds and scores each on the same
/// channel and noise realizations (common random numbers), so candidate
/// ranking is not blurred by sampling noise. Ties go to the lowest index.
struct FixedSearchReport {
  HashCodebook best;  // provenance Fixed, seed = the search master seed
  double accuracy = 0.0;
  int best_index = 0;  // 0-based candidate index
  std::uint64_t eval_seed = 0;
  std::vector<std::uint64_t> candidate_seeds;
  std::vector<double> candidate_accuracy;
};

FixedSearchReport search_fixed_report(int n_beams, int m_rows, int l, int candidates,
                                      const ChannelSampler& sampler, double sigma2,
                                      std::int64_t trials, std::uint64_t seed,
                                      int threads = 1);

/// Convenience wrapper returning just the winning codebook and its accuracy.
std::pair<HashCodebook, double> search_fixed(int n_beams, int m_rows, int l, int candidates,
                                             const ChannelSampler& sampler, double sigma2,
                                             std::int64_t trials, std::uint64_t seed,
                                             int threads = 1);

}  // namespace hashbeam
