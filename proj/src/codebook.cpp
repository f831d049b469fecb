// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/codebook.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hashbeam/rng.hpp"
#include "hashbeam/trainer.hpp"

namespace hashbeam {

namespace {

constexpr std::uint64_t kStreamSearchEval = 0x6576616cULL;       // "eval"
constexpr std::uint64_t kStreamSearchCandidate = 0x63616e64ULL;  // "cand"

HashCodebook make_empty(int m_rows, int n_beams, int l, Provenance provenance,
                        std::optional<std::uint64_t> seed) {
  HashCodebook cb;
  cb.rows = m_rows;
  cb.cols = n_beams;
  cb.l_per_row = l;
  cb.provenance = provenance;
  cb.seed = seed;
  cb.bits.assign(static_cast<std::size_t>(m_rows) * n_beams, 0);
  return cb;
}

void check_common_params(int n_beams, int m_rows, int l) {
  if (n_beams < 1) throw std::invalid_argument("n_beams must be >= 1");
  if (m_rows < 1) throw std::invalid_argument("m_rows must be >= 1");
  if (l < 1 || l > n_beams) {
    throw std::invalid_argument("l must satisfy 1 <= l <= n_beams, got l=" +
                                std::to_string(l) + ", n_beams=" + std::to_string(n_beams));
  }
}

void check_grouped_params(int n_beams, int m_rows, int l) {
  check_common_params(n_beams, m_rows, l);
  if (n_beams % l != 0) {
    throw std::invalid_argument("grouped codebook requires n_beams divisible by l: " +
                                std::to_string(n_beams) + " % " + std::to_string(l) + " != 0");
  }
  const int group = n_beams / l;
  if (m_rows % group != 0) {
    throw std::invalid_argument(
        "grouped codebook requires m_rows divisible by n_beams/l: " + std::to_string(m_rows) +
        " % " + std::to_string(group) + " != 0");
  }
}

}  // namespace

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::ExistingRandom: return "existing_random";
    case Provenance::ProposedRandom: return "proposed_random";
    case Provenance::Fixed: return "fixed";
    case Provenance::Sweeping: return "sweeping";
    case Provenance::Hierarchical: return "hierarchical";
  }
  throw std::invalid_argument("unknown provenance value");
}

Provenance provenance_from_string(std::string_view text) {
  if (text == "existing_random") return Provenance::ExistingRandom;
  if (text == "proposed_random") return Provenance::ProposedRandom;
  if (text == "fixed") return Provenance::Fixed;
  if (text == "sweeping") return Provenance::Sweeping;
  if (text == "hierarchical") return Provenance::Hierarchical;
  throw std::invalid_argument("unknown provenance '" + std::string(text) + "'");
}

std::vector<int> HashCodebook::row_members(int row) const {
  std::vector<int> members;
  members.reserve(l_per_row);
  for (int col = 0; col < cols; ++col) {
    if (bit(row, col)) members.push_back(col);
  }
  return members;
}

HashCodebook gen_existing_random(int n_beams, int m_rows, int l, std::uint64_t seed) {
  check_common_params(n_beams, m_rows, l);
  HashCodebook cb = make_empty(m_rows, n_beams, l, Provenance::ExistingRandom, seed);
  Rng rng(seed);
  std::vector<std::int32_t> pool(n_beams);
  std::iota(pool.begin(), pool.end(), 0);
  for (int row = 0; row < m_rows; ++row) {
    partial_shuffle(pool, l, rng);
    for (int j = 0; j < l; ++j) cb.set_bit(row, pool[j], true);
  }
  return cb;
}

HashCodebook gen_proposed_random(int n_beams, int m_rows, int l, std::uint64_t seed) {
  check_grouped_params(n_beams, m_rows, l);
  HashCodebook cb = make_empty(m_rows, n_beams, l, Provenance::ProposedRandom, seed);
  Rng rng(seed);
  const int rows_per_group = n_beams / l;
  std::vector<std::int32_t> pool;
  for (int row = 0; row < m_rows; ++row) {
    if (row % rows_per_group == 0) {
      pool.resize(n_beams);
      std::iota(pool.begin(), pool.end(), 0);
    }
    partial_shuffle(pool, l, rng);
    for (int j = 0; j < l; ++j) cb.set_bit(row, pool[j], true);
    pool.erase(pool.begin(), pool.begin() + l);
  }
  return cb;
}

HashCodebook gen_sweeping(int n_beams) {
  if (n_beams < 1) throw std::invalid_argument("n_beams must be >= 1");
  HashCodebook cb = make_empty(n_beams, n_beams, 1, Provenance::Sweeping, std::nullopt);
  for (int i = 0; i < n_beams; ++i) cb.set_bit(i, i, true);
  return cb;
}

HashCodebook gen_hierarchical(int n_beams) {
  if (n_beams < 2 || !std::has_single_bit(static_cast<unsigned>(n_beams))) {
    throw std::invalid_argument("hierarchical codebook requires n_beams to be a power of two >= 2, got " +
                                std::to_string(n_beams));
  }
  const int levels = std::countr_zero(static_cast<unsigned>(n_beams));
  HashCodebook cb = make_empty(2 * levels, n_beams, n_beams / 2, Provenance::Hierarchical,
                               std::nullopt);
  // Coarse-to-fine: level 0 splits the index range into halves, the last
  // level separates even from odd indices.
  int row = 0;
  for (int level = 0; level < levels; ++level) {
    const int mask = n_beams >> (level + 1);
    for (int col = 0; col < n_beams; ++col) {
      if ((col & mask) == 0) cb.set_bit(row, col, true);
    }
    for (int col = 0; col < n_beams; ++col) {
      if ((col & mask) != 0) cb.set_bit(row + 1, col, true);
    }
    row += 2;
  }
  return cb;
}

CodebookStats stats(const HashCodebook& cb) {
  CodebookStats st;
  st.n_beams = cb.cols;
  st.column_counts.assign(cb.cols, 0);
  st.pair_overlap.assign(static_cast<std::size_t>(cb.cols) * cb.cols, 0);
  std::vector<int> members;
  for (int row = 0; row < cb.rows; ++row) {
    members = cb.row_members(row);
    for (int a : members) {
      ++st.column_counts[a];
      for (int b : members) {
        ++st.pair_overlap[static_cast<std::size_t>(a) * cb.cols + b];
      }
    }
  }
  return st;
}

void validate(const HashCodebook& cb) {
  if (cb.rows < 1 || cb.cols < 1) {
    throw ValidationError("codebook dimensions must be positive");
  }
  if (cb.bits.size() != static_cast<std::size_t>(cb.rows) * cb.cols) {
    throw ValidationError("bit matrix size does not match dimensions");
  }
  if (cb.l_per_row < 1 || cb.l_per_row > cb.cols) {
    throw ValidationError("l must satisfy 1 <= l <= cols");
  }
  for (int row = 0; row < cb.rows; ++row) {
    int sum = 0;
    for (int col = 0; col < cb.cols; ++col) sum += cb.bit(row, col);
    if (sum != cb.l_per_row) {
      throw ValidationError("row " + std::to_string(row + 1) + " sums to " + std::to_string(sum) +
                            ", expected l=" + std::to_string(cb.l_per_row));
    }
  }
  switch (cb.provenance) {
    case Provenance::ProposedRandom: {
      check_grouped_params(cb.cols, cb.rows, cb.l_per_row);
      const int expected = cb.rows * cb.l_per_row / cb.cols;
      const int rows_per_group = cb.cols / cb.l_per_row;
      for (int col = 0; col < cb.cols; ++col) {
        int total = 0;
        for (int g = 0; g * rows_per_group < cb.rows; ++g) {
          int in_group = 0;
          for (int r = g * rows_per_group; r < (g + 1) * rows_per_group; ++r) {
            in_group += cb.bit(r, col);
          }
          if (in_group != 1) {
            throw ValidationError("column " + std::to_string(col + 1) + " selected " +
                                  std::to_string(in_group) + " times in row group " +
                                  std::to_string(g + 1) + ", expected exactly once");
          }
          total += in_group;
        }
        if (total != expected) {
          throw ValidationError("column " + std::to_string(col + 1) + " sums to " +
                                std::to_string(total) + ", expected m*l/n=" +
                                std::to_string(expected));
        }
      }
      break;
    }
    case Provenance::Sweeping: {
      if (cb.rows != cb.cols || cb.l_per_row != 1) {
        throw ValidationError("sweeping codebook requires m == n and l == 1");
      }
      for (int i = 0; i < cb.rows; ++i) {
        if (!cb.bit(i, i)) {
          throw ValidationError("sweeping codebook must be the identity; row " +
                                std::to_string(i + 1) + " is off-diagonal");
        }
      }
      break;
    }
    case Provenance::Hierarchical: {
      if (cb.cols < 2 || !std::has_single_bit(static_cast<unsigned>(cb.cols))) {
        throw ValidationError("hierarchical codebook requires n to be a power of two");
      }
      const int levels = std::countr_zero(static_cast<unsigned>(cb.cols));
      if (cb.rows != 2 * levels || cb.l_per_row != cb.cols / 2) {
        throw ValidationError("hierarchical codebook requires m = 2*log2(n) and l = n/2");
      }
      break;
    }
    case Provenance::ExistingRandom:
    case Provenance::Fixed:
      break;  // row sums are the full contract
  }
}

std::string to_text(const HashCodebook& cb) {
  std::ostringstream out;
  out << "hashcb v1\n";
  out << "n " << cb.cols << "\n";
  out << "m " << cb.rows << "\n";
  out << "l " << cb.l_per_row << "\n";
  out << "provenance " << to_string(cb.provenance) << "\n";
  if (cb.seed.has_value()) {
    out << "seed " << *cb.seed << "\n";
  } else {
    out << "seed none\n";
  }
  for (int row = 0; row < cb.rows; ++row) {
    for (int col = 0; col < cb.cols; ++col) out << (cb.bit(row, col) ? '1' : '0');
    out << "\n";
  }
  return std::move(out).str();
}

namespace {

class LineReader {
 public:
  LineReader(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {}

  // Returns false at end of input. Strips a trailing '\r'.
  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t nl = text_.find('\n', pos_);
    line = (nl == std::string_view::npos) ? text_.substr(pos_)
                                          : text_.substr(pos_, nl - pos_);
    pos_ = (nl == std::string_view::npos) ? text_.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no_;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::string(origin_) + ":" + std::to_string(line_no_) + ": " + what);
  }

  std::string_view expect(const std::string& what) {
    std::string_view line;
    if (!next(line)) fail("unexpected end of file, expected " + what);
    return line;
  }

 private:
  std::string_view text_;
  std::string origin_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

long long parse_int_field(LineReader& reader, std::string_view line, std::string_view key) {
  const std::string expectation = std::string(key) + " <integer>";
  const std::size_t space = line.find(' ');
  if (space == std::string_view::npos || line.substr(0, space) != key) {
    reader.fail("expected '" + expectation + "', got '" + std::string(line) + "'");
  }
  const std::string_view value = line.substr(space + 1);
  long long parsed = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    reader.fail("field '" + std::string(key) + "' is not an integer: '" + std::string(value) + "'");
  }
  return parsed;
}

}  // namespace

HashCodebook from_text(std::string_view text, std::string_view origin) {
  LineReader reader(text, origin);

  std::string_view line = reader.expect("'hashcb v1' header");
  if (line != "hashcb v1") {
    reader.fail("expected 'hashcb v1' header, got '" + std::string(line) + "'");
  }

  const long long n = parse_int_field(reader, reader.expect("'n <integer>'"), "n");
  const long long m = parse_int_field(reader, reader.expect("'m <integer>'"), "m");
  const long long l = parse_int_field(reader, reader.expect("'l <integer>'"), "l");
  if (n < 1 || n > 1 << 20) reader.fail("n out of range");
  if (m < 1 || m > 1 << 20) reader.fail("m out of range");
  if (l < 1 || l > n) reader.fail("l out of range");

  line = reader.expect("'provenance <name>'");
  if (line.substr(0, 11) != "provenance ") {
    reader.fail("expected 'provenance <name>', got '" + std::string(line) + "'");
  }
  Provenance provenance;
  try {
    provenance = provenance_from_string(line.substr(11));
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }

  line = reader.expect("'seed <integer>|none'");
  std::optional<std::uint64_t> seed;
  if (line.substr(0, 5) != "seed ") {
    reader.fail("expected 'seed <integer>|none', got '" + std::string(line) + "'");
  } else if (line.substr(5) != "none") {
    const std::string_view value = line.substr(5);
    std::uint64_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      reader.fail("seed is not an unsigned integer: '" + std::string(value) + "'");
    }
    seed = parsed;
  }

  HashCodebook cb = make_empty(static_cast<int>(m), static_cast<int>(n), static_cast<int>(l),
                               provenance, seed);
  for (int row = 0; row < cb.rows; ++row) {
    line = reader.expect("codebook row " + std::to_string(row + 1));
    if (static_cast<long long>(line.size()) != n) {
      reader.fail("row " + std::to_string(row + 1) + " has " + std::to_string(line.size()) +
                  " characters, expected " + std::to_string(n));
    }
    for (int col = 0; col < cb.cols; ++col) {
      const char c = line[col];
      if (c != '0' && c != '1') {
        reader.fail("row " + std::to_string(row + 1) + " contains '" + std::string(1, c) +
                    "', expected '0' or '1'");
      }
      if (c == '1') cb.set_bit(row, col, true);
    }
  }
  while (reader.next(line)) {
    if (!line.empty()) reader.fail("unexpected trailing content '" + std::string(line) + "'");
  }

  validate(cb);
  return cb;
}

void save(const HashCodebook& cb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << to_text(cb);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

HashCodebook load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), path.string());
}

FixedSearchReport search_fixed_report(int n_beams, int m_rows, int l, int candidates,
                                      const ChannelSampler& sampler, double sigma2,
                                      std::int64_t trials, std::uint64_t seed, int threads) {
  check_grouped_params(n_beams, m_rows, l);
  if (candidates < 1) throw std::invalid_argument("search needs at least one candidate");
  if (trials < 1) throw std::invalid_argument("search needs at least one trial");

  FixedSearchReport report;
  report.eval_seed = derive_key(seed, {kStreamSearchEval});
  report.candidate_seeds.resize(candidates);
  for (int i = 0; i < candidates; ++i) {
    report.candidate_seeds[i] = derive_key(seed, {kStreamSearchCandidate, static_cast<std::uint64_t>(i)});
  }

  // All candidates are scored on one shared set of channel and noise draws.
  const ArrayConfig cfg(n_beams);
  const detail::CampaignCache cache = detail::make_campaign_cache(
      cfg, sampler, m_rows, trials, report.eval_seed, threads, GroundTruth::BestDftBeam);

  report.candidate_accuracy.assign(candidates, 0.0);
  detail::parallel_for(candidates, threads, [&](int i) {
    const HashCodebook candidate =
        gen_proposed_random(n_beams, m_rows, l, report.candidate_seeds[i]);
    report.candidate_accuracy[i] = detail::run_campaign_cached(candidate, cache, sigma2, 1);
  });

  report.best_index = 0;
  for (int i = 1; i < candidates; ++i) {
    if (report.candidate_accuracy[i] > report.candidate_accuracy[report.best_index]) {
      report.best_index = i;
    }
  }
  report.accuracy = report.candidate_accuracy[report.best_index];
  report.best = gen_proposed_random(n_beams, m_rows, l, report.candidate_seeds[report.best_index]);
  report.best.provenance = Provenance::Fixed;
  report.best.seed = seed;
  return report;
}

std::pair<HashCodebook, double> search_fixed(int n_beams, int m_rows, int l, int candidates,
                                             const ChannelSampler& sampler, double sigma2,
                                             std::int64_t trials, std::uint64_t seed,
                                             int threads) {
  FixedSearchReport report = search_fixed_report(n_beams, m_rows, l, candidates, sampler, sigma2,
                                                 trials, seed, threads);
  return {std::move(report.best), report.accuracy};
}

}  // namespace hashbeam
