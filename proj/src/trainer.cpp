// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace hashbeam {

namespace {

constexpr std::uint64_t kStreamTrial = 0x747269616cULL;  // "trial"

void check_row_index(const HashCodebook& cb, int row) {
  if (row < 1 || row > cb.rows) {
    throw std::invalid_argument("training row index " + std::to_string(row) +
                                " out of range [1, " + std::to_string(cb.rows) + "]");
  }
}

int argmax_smallest(const std::vector<double>& values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

// Grid beam nearest to the strongest path, in sin-angle space. Rounds half
// away from zero; result clamped to [1, N].
int nearest_beam0_to_strongest(const ArrayConfig& cfg, const Channel& channel) {
  int strongest = 0;
  double best_power = std::norm(channel.paths[0].gain);
  for (int p = 1; p < static_cast<int>(channel.paths.size()); ++p) {
    const double power = std::norm(channel.paths[p].gain);
    if (power > best_power) {
      best_power = power;
      strongest = p;
    }
  }
  const double s = std::sin(channel.paths[strongest].angle);
  long beam = std::lround((s + 1.0) * cfg.n() / 2.0);
  if (beam < 1) beam = 1;
  if (beam > cfg.n()) beam = cfg.n();
  return static_cast<int>(beam) - 1;
}

void check_campaign_options(const CampaignOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("campaign needs at least one trial");
  if (!(options.sigma2 >= 0.0) || !std::isfinite(options.sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and >= 0");
  }
  if (options.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

}  // namespace

CVec training_beam(const HashCodebook& cb, int row, const ArrayConfig& cfg) {
  check_row_index(cb, row);
  if (cfg.n() != cb.cols) {
    throw std::invalid_argument("array size " + std::to_string(cfg.n()) +
                                " does not match codebook beam count " + std::to_string(cb.cols));
  }
  CVec weights(cb.cols, {0.0, 0.0});
  for (int col : cb.row_members(row - 1)) {
    const CVec beam = dft_beam(cfg, col + 1);
    for (int k = 0; k < cb.cols; ++k) weights[k] += beam[k];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(cb.l_per_row));
  for (auto& w : weights) w *= scale;
  return weights;
}

std::vector<double> measure(const HashCodebook& cb, const CVec& channel, const NoiseModel& noise) {
  if (static_cast<int>(channel.size()) != cb.cols) {
    throw std::invalid_argument("channel length " + std::to_string(channel.size()) +
                                " does not match codebook beam count " + std::to_string(cb.cols));
  }
  if (!(noise.sigma2 >= 0.0) || !std::isfinite(noise.sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and >= 0");
  }
  const ArrayConfig cfg(cb.cols);
  const double sigma = std::sqrt(noise.sigma2);
  Rng rng(noise.seed);
  std::vector<double> rsrp(cb.rows);
  for (int row = 0; row < cb.rows; ++row) {
    rsrp[row] = beam_rsrp(channel, training_beam(cb, row + 1, cfg)) + sigma * rng.gaussian();
  }
  return rsrp;
}

TrainingOutcome vote_and_select(const HashCodebook& cb, const std::vector<double>& rsrp) {
  if (static_cast<int>(rsrp.size()) != cb.rows) {
    throw std::invalid_argument("rsrp length " + std::to_string(rsrp.size()) +
                                " does not match training beam count " + std::to_string(cb.rows));
  }
  TrainingOutcome outcome;
  outcome.rsrp = rsrp;
  outcome.votes.assign(cb.cols, 0.0);
  for (int row = 0; row < cb.rows; ++row) {
    for (int col : cb.row_members(row)) outcome.votes[col] += rsrp[row];
  }
  outcome.selected = argmax_smallest(outcome.votes) + 1;
  return outcome;
}

namespace detail {

SparseRows sparse_rows(const HashCodebook& cb) {
  SparseRows rows;
  rows.m_rows = cb.rows;
  rows.n_beams = cb.cols;
  rows.l = cb.l_per_row;
  rows.members.reserve(static_cast<std::size_t>(cb.rows) * cb.l_per_row);
  for (int row = 0; row < cb.rows; ++row) {
    for (int col : cb.row_members(row)) rows.members.push_back(col);
  }
  return rows;
}

CampaignTrial make_campaign_trial(const ArrayConfig& cfg, const ChannelSampler& sampler,
                                  int m_rows, GroundTruth ground_truth, Rng& rng) {
  CampaignTrial trial;
  const Channel channel = sampler(rng);
  trial.beamspace = beamspace_channel(cfg, channel);
  trial.truth0 = (ground_truth == GroundTruth::BestDftBeam)
                     ? best_beam(trial.beamspace) - 1
                     : nearest_beam0_to_strongest(cfg, channel);
  trial.noise_unit.resize(m_rows);
  for (auto& z : trial.noise_unit) z = rng.gaussian();
  return trial;
}

int select_beam0(const SparseRows& rows, const CVec& beamspace, const double* noise_unit,
                 double sigma, std::vector<double>& rsrp_scratch,
                 std::vector<double>& vote_scratch) {
  const double inv_l = 1.0 / rows.l;
  rsrp_scratch.resize(rows.m_rows);
  for (int row = 0; row < rows.m_rows; ++row) {
    std::complex<double> acc{0.0, 0.0};
    const std::int32_t* members = &rows.members[static_cast<std::size_t>(row) * rows.l];
    for (int j = 0; j < rows.l; ++j) acc += beamspace[members[j]];
    // |(1/sqrt(L)) * sum|^2 = |sum|^2 / L
    rsrp_scratch[row] = std::norm(acc) * inv_l + sigma * noise_unit[row];
  }
  vote_scratch.assign(rows.n_beams, 0.0);
  for (int row = 0; row < rows.m_rows; ++row) {
    const std::int32_t* members = &rows.members[static_cast<std::size_t>(row) * rows.l];
    for (int j = 0; j < rows.l; ++j) vote_scratch[members[j]] += rsrp_scratch[row];
  }
  return argmax_smallest(vote_scratch);
}

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body) {
  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), count));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

CampaignCache make_campaign_cache(const ArrayConfig& cfg, const ChannelSampler& sampler,
                                  int m_rows, std::int64_t trials, std::uint64_t seed,
                                  int threads, GroundTruth ground_truth) {
  CampaignCache cache;
  cache.n_beams = cfg.n();
  cache.m_rows = m_rows;
  cache.trials.resize(trials);
  parallel_for(trials, threads, [&](std::int64_t t) {
    Rng rng = Rng::derived(seed, {kStreamTrial, static_cast<std::uint64_t>(t)});
    cache.trials[t] = make_campaign_trial(cfg, sampler, m_rows, ground_truth, rng);
  });
  return cache;
}

double run_campaign_cached(const HashCodebook& cb, const CampaignCache& cache, double sigma2,
                           int threads) {
  if (cb.cols != cache.n_beams || cb.rows != cache.m_rows) {
    throw std::invalid_argument("campaign cache dimensions do not match the codebook");
  }
  const SparseRows rows = sparse_rows(cb);
  const double sigma = std::sqrt(sigma2);
  const std::int64_t count = static_cast<std::int64_t>(cache.trials.size());
  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), count));
  std::vector<std::int64_t> hits(workers, 0);
  std::vector<std::thread> pool;
  auto work = [&](int w) {
    std::vector<double> rsrp_scratch, vote_scratch;
    for (std::int64_t t = w; t < count; t += workers) {
      const CampaignTrial& trial = cache.trials[t];
      const int picked = select_beam0(rows, trial.beamspace, trial.noise_unit.data(), sigma,
                                      rsrp_scratch, vote_scratch);
      hits[w] += (picked == trial.truth0);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(count);
}

}  // namespace detail

double run_campaign(const HashCodebook& cb, const ChannelSampler& sampler,
                    const CampaignOptions& options) {
  validate(cb);
  check_campaign_options(options);
  const ArrayConfig cfg(cb.cols);
  const detail::SparseRows rows = detail::sparse_rows(cb);
  const double sigma = std::sqrt(options.sigma2);

  const int workers =
      static_cast<int>(std::min<std::int64_t>(std::max(options.threads, 1), options.trials));
  std::vector<std::int64_t> hits(workers, 0);
  auto work = [&](int w) {
    std::vector<double> rsrp_scratch, vote_scratch;
    for (std::int64_t t = w; t < options.trials; t += workers) {
      Rng rng = Rng::derived(options.seed, {kStreamTrial, static_cast<std::uint64_t>(t)});
      const detail::CampaignTrial trial =
          detail::make_campaign_trial(cfg, sampler, cb.rows, options.ground_truth, rng);
      const int picked = detail::select_beam0(rows, trial.beamspace, trial.noise_unit.data(),
                                              sigma, rsrp_scratch, vote_scratch);
      hits[w] += (picked == trial.truth0);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(options.trials);
}

}  // namespace hashbeam
