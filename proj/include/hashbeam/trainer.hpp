// SPDX-License-Identifier: Apache-2.0
//
// The training protocol: beamform each codebook row, measure noisy received
// powers, accumulate per-beam votes and pick the winner. run_campaign ties it
// together over many channel draws with per-trial derived random streams, so
// results are bit-stable for a given seed regardless of thread count.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hashbeam/array_channel.hpp"
#include "hashbeam/codebook.hpp"

namespace hashbeam {

struct NoiseModel {
  double sigma2 = 0.0;  // variance of the additive power-domain noise
  std::uint64_t seed = 0;
};

struct TrainingOutcome {
  std::vector<double> rsrp;   // y, one entry per training round
  std::vector<double> votes;  // p, one entry per DFT beam
  int selected = 0;           // 1-based winning beam index
};

/// Weight vector of one training round (1-based row index): the selected DFT
/// beams superposed and scaled by 1/sqrt(L). Unit norm.
CVec training_beam(const HashCodebook& cb, int row, const ArrayConfig& cfg);

/// One full measurement pass: y_m = |h^H w_m|^2 + noise, one independent
/// Gaussian draw per row from the model's stream. Negative values are kept;
/// the noise lives in the power domain by definition.
std::vector<double> measure(const HashCodebook& cb, const CVec& channel, const NoiseModel& noise);

/// Accumulates each round's power onto the beams that round selected and
/// picks the argmax; ties resolve to the smallest beam index.
TrainingOutcome vote_and_select(const HashCodebook& cb, const std::vector<double>& rsrp);

/// How a trial's ground-truth beam is defined.
enum class GroundTruth {
  BestDftBeam,             // strongest noiseless beamspace entry (default)
  NearestToStrongestPath,  // grid beam nearest (in sin space) to the strongest path
};

struct CampaignOptions {
  double sigma2 = 0.0;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  GroundTruth ground_truth = GroundTruth::BestDftBeam;
};

/// Fraction of trials in which the voted beam equals the ground-truth beam.
/// Each trial draws a channel from the sampler and one noise vector, all from
/// a stream derived from (seed, trial index).
double run_campaign(const HashCodebook& cb, const ChannelSampler& sampler,
                    const CampaignOptions& options);

inline double run_campaign(const HashCodebook& cb, const ChannelSampler& sampler, double sigma2,
                           std::int64_t trials, std::uint64_t seed, int threads = 1) {
  return run_campaign(cb, sampler, CampaignOptions{sigma2, trials, seed, threads});
}

namespace detail {

/// Row membership lists of a codebook, flattened for the hot loops.
struct SparseRows {
  int m_rows = 0;
  int n_beams = 0;
  int l = 0;
  std::vector<std::int32_t> members;  // m_rows * l column indices
};

SparseRows sparse_rows(const HashCodebook& cb);

/// Everything about one trial that does not depend on the codebook bits:
/// the beamspace channel, the ground-truth beam and the unit noise draws.
/// Shared across candidates in the fixed-codebook search.
struct CampaignTrial {
  CVec beamspace;
  std::vector<double> noise_unit;
  int truth0 = 0;  // 0-based
};

struct CampaignCache {
  int n_beams = 0;
  int m_rows = 0;
  std::vector<CampaignTrial> trials;
};

CampaignTrial make_campaign_trial(const ArrayConfig& cfg, const ChannelSampler& sampler,
                                  int m_rows, GroundTruth ground_truth, Rng& rng);

CampaignCache make_campaign_cache(const ArrayConfig& cfg, const ChannelSampler& sampler,
                                  int m_rows, std::int64_t trials, std::uint64_t seed,
                                  int threads, GroundTruth ground_truth);

/// Runs the vote-and-select decoder on one prepared trial. Scratch vectors
/// are caller-provided so trial loops do not allocate.
int select_beam0(const SparseRows& rows, const CVec& beamspace, const double* noise_unit,
                 double sigma, std::vector<double>& rsrp_scratch,
                 std::vector<double>& vote_scratch);

/// Same statistic as run_campaign, evaluated over a prepared trial cache.
/// For a cache built from (sampler, seed) this reproduces run_campaign's
/// result exactly.
double run_campaign_cached(const HashCodebook& cb, const CampaignCache& cache, double sigma2,
                           int threads);

/// Deterministic static partition of [0, count) across up to `threads`
/// workers; results must not depend on the partition.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body);

}  // namespace detail

}  // namespace hashbeam
