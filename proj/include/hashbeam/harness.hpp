// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: named experiment presets, deterministic seed
// splitting per experiment point, CSV result tables and a key:value config
// sidecar that fully reproduces a run.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hashbeam/analysis.hpp"
#include "hashbeam/trainer.hpp"

namespace hashbeam {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

enum class Experiment { Fig2, Fig3, Fig4, Custom };
enum class Scheme { Existing, Proposed, Fixed, Sweeping };

std::string_view to_string(Experiment experiment);
Experiment experiment_from_string(std::string_view text);
std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view text);

struct MultipathSpec {
  std::vector<double> path_gain_vars{1.0, 0.01, 0.01};
  double angle_min = -1.5707963267948966;
  double angle_max = 1.5707963267948966;
};

struct ChannelSpec {
  enum class Kind { OnGridLos, OnGridLosFixed, Multipath };
  Kind kind = Kind::OnGridLos;
  int fixed_beam = 0;  // 0 resolves to N/2
  MultipathSpec multipath;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Custom;
  int n_antennas = 128;
  int m_trainings = 64;
  std::vector<int> l_values;  // empty resolves to the grouped-admissible set
  int l_fixed = 8;
  std::vector<double> snr_db_values;  // empty resolves to the experiment preset
  std::int64_t trials = 20000;
  std::uint64_t master_seed = 1;
  ChannelSpec channel;
  std::vector<Scheme> schemes;  // empty resolves to the experiment preset
  int search_candidates = 1000;
  std::int64_t search_trials = 20000;
  double search_snr_db = 30.0;  // search where the fixed-codebook margin shows
  GroundTruth ground_truth = GroundTruth::BestDftBeam;
  int threads = 1;  // never affects results, only wall time; not persisted
};

struct ResultRow {
  Experiment experiment = Experiment::Custom;
  std::string family;
  int l = 0;
  double snr_db = 0.0;
  std::string metric;
  double value = 0.0;
  double stderr_value = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

/// Noise variance for a given SNR. The SNR is referenced to the per-antenna
/// received signal power of a unit-gain path, so a perfectly aligned DFT
/// beam (RSRP 1) sits a factor N above the measurement noise at 0 dB; the
/// array contributes 10*log10(N) of processing gain exactly as a real
/// combiner would.
double sigma2_from_snr_db(double snr_db, int n_antennas);

ExperimentConfig fig2_preset();
ExperimentConfig fig3_preset();
ExperimentConfig fig4_preset();

/// Applies the experiment's preset defaults to empty fields. Idempotent.
ExperimentConfig resolved_config(const ExperimentConfig& cfg);

ChannelSampler make_sampler(const ChannelSpec& spec, const ArrayConfig& cfg);

/// Dispatches on cfg.experiment; rows come back sorted by
/// (family, L, snr_db, metric) so output bytes are scheduling-independent.
ResultTable run_experiment(const ExperimentConfig& cfg);
ResultTable run_fig2(const ExperimentConfig& cfg);
ResultTable run_fig3(const ExperimentConfig& cfg);
ResultTable run_fig4(const ExperimentConfig& cfg);

std::string csv_string(const ResultTable& table);
void write_csv(const ResultTable& table, const std::filesystem::path& path);

std::string metadata_string(const ExperimentConfig& cfg);
void write_metadata(const ExperimentConfig& cfg, const std::filesystem::path& path);
ExperimentConfig parse_config_text(std::string_view text, std::string_view origin = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace hashbeam
