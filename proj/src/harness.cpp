// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hashbeam {

namespace {

constexpr std::uint64_t kStreamCodebook = 0x6362ULL;     // "cb"
constexpr std::uint64_t kStreamPoint = 0x706f696e74ULL;  // "point"
constexpr std::uint64_t kStreamSearch = 0x73726368ULL;   // "srch"

std::string format_double(double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

double success_stderr(double value, std::int64_t trials) {
  return std::sqrt(value * (1.0 - value) / static_cast<double>(trials));
}

void sort_rows(ResultTable& table) {
  std::sort(table.rows.begin(), table.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.family, a.l, a.snr_db, a.metric) <
           std::tie(b.family, b.l, b.snr_db, b.metric);
  });
}

void check_resolved(const ExperimentConfig& cfg) {
  if (cfg.n_antennas < 2) throw std::invalid_argument("config: n_antennas must be >= 2");
  if (cfg.m_trainings < 1) throw std::invalid_argument("config: m_trainings must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.snr_db_values.empty()) throw std::invalid_argument("config: SNR list is empty");
  if (cfg.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

HashCodebook family_codebook(Scheme scheme, const ExperimentConfig& cfg, int l) {
  const std::uint64_t cb_seed = derive_key(
      cfg.master_seed, {kStreamCodebook, static_cast<std::uint64_t>(scheme),
                        static_cast<std::uint64_t>(l)});
  switch (scheme) {
    case Scheme::Existing:
      return gen_existing_random(cfg.n_antennas, cfg.m_trainings, l, cb_seed);
    case Scheme::Proposed:
      return gen_proposed_random(cfg.n_antennas, cfg.m_trainings, l, cb_seed);
    case Scheme::Sweeping:
      return gen_sweeping(cfg.n_antennas);
    case Scheme::Fixed:
      break;  // built by the search, not here
  }
  throw std::invalid_argument("fixed codebooks are produced by the offline search");
}

// Keyed on the SNR point and metric only: schemes and L values at the same
// SNR share their trial streams, so scheme comparisons are paired (same
// channel draws) and their differences carry far less Monte Carlo noise.
std::uint64_t point_seed(const ExperimentConfig& cfg, int snr_index, int metric_id) {
  return derive_key(cfg.master_seed,
                    {kStreamPoint, static_cast<std::uint64_t>(snr_index),
                     static_cast<std::uint64_t>(metric_id)});
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::Fig2: return "fig2";
    case Experiment::Fig3: return "fig3";
    case Experiment::Fig4: return "fig4";
    case Experiment::Custom: return "custom";
  }
  throw std::invalid_argument("unknown experiment value");
}

Experiment experiment_from_string(std::string_view text) {
  if (text == "fig2") return Experiment::Fig2;
  if (text == "fig3") return Experiment::Fig3;
  if (text == "fig4") return Experiment::Fig4;
  if (text == "custom") return Experiment::Custom;
  throw std::invalid_argument("unknown experiment '" + std::string(text) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Existing: return "existing";
    case Scheme::Proposed: return "proposed";
    case Scheme::Fixed: return "fixed";
    case Scheme::Sweeping: return "sweeping";
  }
  throw std::invalid_argument("unknown scheme value");
}

Scheme scheme_from_string(std::string_view text) {
  if (text == "existing") return Scheme::Existing;
  if (text == "proposed") return Scheme::Proposed;
  if (text == "fixed") return Scheme::Fixed;
  if (text == "sweeping") return Scheme::Sweeping;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

double sigma2_from_snr_db(double snr_db, int n_antennas) {
  if (n_antennas < 1) throw std::invalid_argument("n_antennas must be >= 1");
  return std::pow(10.0, -snr_db / 10.0) / static_cast<double>(n_antennas);
}

ExperimentConfig fig2_preset() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Fig2;
  cfg.channel.kind = ChannelSpec::Kind::OnGridLosFixed;
  cfg.snr_db_values = {10.0};
  cfg.schemes = {Scheme::Existing, Scheme::Proposed};
  return cfg;
}

ExperimentConfig fig3_preset() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Fig3;
  cfg.channel.kind = ChannelSpec::Kind::OnGridLos;
  cfg.snr_db_values = {0.0, 5.0, 10.0, 15.0};
  cfg.schemes = {Scheme::Existing, Scheme::Proposed};
  return cfg;
}

ExperimentConfig fig4_preset() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Fig4;
  cfg.channel.kind = ChannelSpec::Kind::Multipath;
  cfg.snr_db_values = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
  cfg.schemes = {Scheme::Existing, Scheme::Proposed, Scheme::Fixed, Scheme::Sweeping};
  return cfg;
}

ExperimentConfig resolved_config(const ExperimentConfig& cfg) {
  ExperimentConfig out = cfg;
  if (out.snr_db_values.empty()) {
    switch (out.experiment) {
      case Experiment::Fig2: out.snr_db_values = {10.0}; break;
      case Experiment::Fig3: out.snr_db_values = {0.0, 5.0, 10.0, 15.0}; break;
      case Experiment::Fig4:
        out.snr_db_values = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
        break;
      case Experiment::Custom: break;
    }
  }
  if (out.schemes.empty()) {
    switch (out.experiment) {
      case Experiment::Fig2:
      case Experiment::Fig3:
        out.schemes = {Scheme::Existing, Scheme::Proposed};
        break;
      case Experiment::Fig4:
        out.schemes = {Scheme::Existing, Scheme::Proposed, Scheme::Fixed, Scheme::Sweeping};
        break;
      case Experiment::Custom: break;
    }
  }
  if (out.l_values.empty() &&
      (out.experiment == Experiment::Fig2 || out.experiment == Experiment::Fig3)) {
    out.l_values = admissible_l_values(out.n_antennas, out.m_trainings, Family::Proposed);
  }
  if (out.channel.kind == ChannelSpec::Kind::OnGridLosFixed && out.channel.fixed_beam == 0) {
    out.channel.fixed_beam = out.n_antennas / 2;
  }
  return out;
}

ChannelSampler make_sampler(const ChannelSpec& spec, const ArrayConfig& cfg) {
  switch (spec.kind) {
    case ChannelSpec::Kind::OnGridLos:
      return on_grid_los_sampler(cfg);
    case ChannelSpec::Kind::OnGridLosFixed:
      return on_grid_los_sampler_fixed(cfg, spec.fixed_beam == 0 ? cfg.n() / 2 : spec.fixed_beam);
    case ChannelSpec::Kind::Multipath:
      return multipath_sampler(cfg, spec.multipath.path_gain_vars, spec.multipath.angle_min,
                               spec.multipath.angle_max);
  }
  throw std::invalid_argument("unknown channel kind");
}

ResultTable run_fig2(const ExperimentConfig& raw) {
  ExperimentConfig cfg = raw;
  cfg.experiment = Experiment::Fig2;
  cfg = resolved_config(cfg);
  check_resolved(cfg);
  if (cfg.channel.kind != ChannelSpec::Kind::OnGridLosFixed) {
    throw std::invalid_argument("fig2 requires the fixed on-grid LoS channel");
  }
  const ArrayConfig array(cfg.n_antennas);
  const ChannelSampler sampler = make_sampler(cfg.channel, array);
  const int n_star = cfg.channel.fixed_beam;

  ResultTable table;
  for (Scheme scheme : cfg.schemes) {
    if (scheme != Scheme::Existing && scheme != Scheme::Proposed) {
      throw std::invalid_argument("fig2 compares the existing and proposed random families");
    }
    const Family family = scheme == Scheme::Existing ? Family::Existing : Family::Proposed;
    for (int snr_index = 0; snr_index < static_cast<int>(cfg.snr_db_values.size()); ++snr_index) {
      const double snr_db = cfg.snr_db_values[snr_index];
      const double sigma2 = sigma2_from_snr_db(snr_db, cfg.n_antennas);
      for (int l : cfg.l_values) {
        const HashCodebook cb = family_codebook(scheme, cfg, l);

        const std::uint64_t sim_seed = point_seed(cfg, snr_index, 0);
        const double sim =
            run_campaign(cb, sampler, CampaignOptions{sigma2, cfg.trials, sim_seed, cfg.threads,
                                                      cfg.ground_truth});
        table.rows.push_back({Experiment::Fig2, std::string(to_string(scheme)), l, snr_db,
                              "sim_success", sim, success_stderr(sim, cfg.trials), cfg.trials,
                              sim_seed});

        const std::uint64_t theory_seed = point_seed(cfg, snr_index, 1);
        const double theory = success_probability(cb, n_star, sigma2, SuccessMethod::NoiseMc,
                                                  cfg.trials, theory_seed, std::nullopt,
                                                  cfg.threads);
        table.rows.push_back({Experiment::Fig2, std::string(to_string(scheme)), l, snr_db,
                              "theory_success", theory, success_stderr(theory, cfg.trials),
                              cfg.trials, theory_seed});

        const double p_tilde = family == Family::Existing
                                   ? p_tilde_existing(cfg.n_antennas, cfg.m_trainings, l, sigma2)
                                   : p_tilde_proposed(cfg.n_antennas, cfg.m_trainings, l, sigma2);
        table.rows.push_back({Experiment::Fig2, std::string(to_string(scheme)), l, snr_db,
                              "heuristic_complement", 1.0 - p_tilde, 0.0, 0, 0});
      }
    }
  }
  sort_rows(table);
  return table;
}

ResultTable run_fig3(const ExperimentConfig& raw) {
  ExperimentConfig cfg = raw;
  cfg.experiment = Experiment::Fig3;
  cfg = resolved_config(cfg);
  check_resolved(cfg);
  if (cfg.channel.kind == ChannelSpec::Kind::Multipath) {
    throw std::invalid_argument("fig3 uses an on-grid LoS channel");
  }
  const ArrayConfig array(cfg.n_antennas);
  const ChannelSampler sampler = make_sampler(cfg.channel, array);

  ResultTable table;
  for (Scheme scheme : cfg.schemes) {
    if (scheme != Scheme::Existing && scheme != Scheme::Proposed) {
      throw std::invalid_argument("fig3 compares the existing and proposed random families");
    }
    for (int l : cfg.l_values) {
      const HashCodebook cb = family_codebook(scheme, cfg, l);
      for (int snr_index = 0; snr_index < static_cast<int>(cfg.snr_db_values.size());
           ++snr_index) {
        const double snr_db = cfg.snr_db_values[snr_index];
        const double sigma2 = sigma2_from_snr_db(snr_db, cfg.n_antennas);
        const std::uint64_t seed = point_seed(cfg, snr_index, 0);
        const double sim = run_campaign(
            cb, sampler, CampaignOptions{sigma2, cfg.trials, seed, cfg.threads, cfg.ground_truth});
        table.rows.push_back({Experiment::Fig3, std::string(to_string(scheme)), l, snr_db,
                              "sim_success", sim, success_stderr(sim, cfg.trials), cfg.trials,
                              seed});
      }
    }
  }
  sort_rows(table);
  return table;
}

ResultTable run_fig4(const ExperimentConfig& raw) {
  ExperimentConfig cfg = raw;
  cfg.experiment = Experiment::Fig4;
  cfg = resolved_config(cfg);
  check_resolved(cfg);
  if (cfg.channel.kind != ChannelSpec::Kind::Multipath) {
    throw std::invalid_argument("fig4 uses the multipath channel");
  }
  if (cfg.search_candidates < 1 || cfg.search_trials < 1) {
    throw std::invalid_argument("fig4 search needs at least one candidate and one trial");
  }
  const ArrayConfig array(cfg.n_antennas);
  const ChannelSampler sampler = make_sampler(cfg.channel, array);
  const int l = cfg.l_fixed;

  ResultTable table;
  for (Scheme scheme : cfg.schemes) {
    HashCodebook cb;
    if (scheme == Scheme::Fixed) {
      // One codebook searched offline on its own channel/noise draws, then
      // reused across the whole SNR sweep.
      const double search_sigma2 = sigma2_from_snr_db(cfg.search_snr_db, cfg.n_antennas);
      cb = search_fixed(cfg.n_antennas, cfg.m_trainings, l, cfg.search_candidates, sampler,
                        search_sigma2, cfg.search_trials,
                        derive_key(cfg.master_seed, {kStreamSearch}), cfg.threads)
               .first;
    } else {
      cb = family_codebook(scheme, cfg, l);
    }
    const int l_column = scheme == Scheme::Sweeping ? 1 : l;
    for (int snr_index = 0; snr_index < static_cast<int>(cfg.snr_db_values.size()); ++snr_index) {
      const double snr_db = cfg.snr_db_values[snr_index];
      const double sigma2 = sigma2_from_snr_db(snr_db, cfg.n_antennas);
      const std::uint64_t seed = point_seed(cfg, snr_index, 0);
      const double sim = run_campaign(
          cb, sampler, CampaignOptions{sigma2, cfg.trials, seed, cfg.threads, cfg.ground_truth});
      table.rows.push_back({Experiment::Fig4, std::string(to_string(scheme)), l_column, snr_db,
                            "sim_success", sim, success_stderr(sim, cfg.trials), cfg.trials,
                            seed});
    }
  }
  sort_rows(table);
  return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Fig2: return run_fig2(cfg);
    case Experiment::Fig3: return run_fig3(cfg);
    case Experiment::Fig4: return run_fig4(cfg);
    case Experiment::Custom:
      throw std::invalid_argument("custom experiments run through the simulate command");
  }
  throw std::invalid_argument("unknown experiment");
}

std::string csv_string(const ResultTable& table) {
  std::ostringstream out;
  out << "experiment,family,L,snr_db,metric,value,stderr,trials,seed\n";
  for (const ResultRow& row : table.rows) {
    out << to_string(row.experiment) << ',' << row.family << ',' << row.l << ','
        << format_double(row.snr_db, "%g") << ',' << row.metric << ','
        << format_double(row.value) << ',' << format_double(row.stderr_value) << ','
        << row.trials << ',' << row.seed << "\n";
  }
  return std::move(out).str();
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << csv_string(table);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i], "%.17g");
  }
  return out;
}

std::string_view channel_kind_name(ChannelSpec::Kind kind) {
  switch (kind) {
    case ChannelSpec::Kind::OnGridLos: return "ongrid";
    case ChannelSpec::Kind::OnGridLosFixed: return "ongrid_fixed";
    case ChannelSpec::Kind::Multipath: return "multipath";
  }
  throw std::invalid_argument("unknown channel kind");
}

ChannelSpec::Kind channel_kind_from_string(std::string_view text) {
  if (text == "ongrid") return ChannelSpec::Kind::OnGridLos;
  if (text == "ongrid_fixed") return ChannelSpec::Kind::OnGridLosFixed;
  if (text == "multipath") return ChannelSpec::Kind::Multipath;
  throw std::invalid_argument("unknown channel kind '" + std::string(text) + "'");
}

}  // namespace

std::string metadata_string(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = resolved_config(raw);
  std::ostringstream out;
  out << "# hashbeam experiment configuration\n";
  out << "experiment: " << to_string(cfg.experiment) << "\n";
  out << "n_antennas: " << cfg.n_antennas << "\n";
  out << "m_trainings: " << cfg.m_trainings << "\n";
  out << "l_values: " << join_ints(cfg.l_values) << "\n";
  out << "l_fixed: " << cfg.l_fixed << "\n";
  out << "snr_db_values: " << join_doubles(cfg.snr_db_values) << "\n";
  out << "trials: " << cfg.trials << "\n";
  out << "master_seed: " << cfg.master_seed << "\n";
  out << "channel: " << channel_kind_name(cfg.channel.kind) << "\n";
  out << "fixed_beam: " << cfg.channel.fixed_beam << "\n";
  out << "path_gain_vars: " << join_doubles(cfg.channel.multipath.path_gain_vars) << "\n";
  out << "angle_min: " << format_double(cfg.channel.multipath.angle_min, "%.17g") << "\n";
  out << "angle_max: " << format_double(cfg.channel.multipath.angle_max, "%.17g") << "\n";
  std::string schemes;
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    if (i) schemes += ',';
    schemes += to_string(cfg.schemes[i]);
  }
  out << "schemes: " << schemes << "\n";
  out << "search_candidates: " << cfg.search_candidates << "\n";
  out << "search_trials: " << cfg.search_trials << "\n";
  out << "search_snr_db: " << format_double(cfg.search_snr_db, "%.17g") << "\n";
  out << "ground_truth: "
      << (cfg.ground_truth == GroundTruth::BestDftBeam ? "best_dft" : "nearest_strongest")
      << "\n";
  out << "toolkit_version: " << kToolkitVersion << "\n";
  return std::move(out).str();
}

void write_metadata(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << metadata_string(cfg);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view part =
        comma == std::string_view::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    if (!part.empty()) parts.emplace_back(part);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return parts;
}

long long to_ll(const std::string& value, const std::string& key, std::string_view origin,
                int line_no) {
  long long parsed = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": key '" + key +
                     "' needs an integer, got '" + value + "'");
  }
  return parsed;
}

double to_double(const std::string& value, const std::string& key, std::string_view origin,
                 int line_no) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return parsed;
  } catch (const std::exception&) {
    throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": key '" + key +
                     "' needs a number, got '" + value + "'");
  }
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text, std::string_view origin) {
  ExperimentConfig cfg;
  bool saw_experiment = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                       ": expected 'key: value', got '" + std::string(line) + "'");
    }
    const std::string key{line.substr(0, colon)};
    std::string_view value_view = line.substr(colon + 1);
    while (!value_view.empty() && value_view.front() == ' ') value_view.remove_prefix(1);
    const std::string value{value_view};

    auto fail = [&](const std::string& what) -> void {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
    };

    try {
      if (key == "experiment") {
        cfg.experiment = experiment_from_string(value);
        saw_experiment = true;
      } else if (key == "n_antennas") {
        cfg.n_antennas = static_cast<int>(to_ll(value, key, origin, line_no));
      } else if (key == "m_trainings") {
        cfg.m_trainings = static_cast<int>(to_ll(value, key, origin, line_no));
      } else if (key == "l_values") {
        cfg.l_values.clear();
        for (const auto& part : split_list(value)) {
          cfg.l_values.push_back(static_cast<int>(to_ll(part, key, origin, line_no)));
        }
      } else if (key == "l_fixed") {
        cfg.l_fixed = static_cast<int>(to_ll(value, key, origin, line_no));
      } else if (key == "snr_db_values") {
        cfg.snr_db_values.clear();
        for (const auto& part : split_list(value)) {
          cfg.snr_db_values.push_back(to_double(part, key, origin, line_no));
        }
      } else if (key == "trials") {
        cfg.trials = to_ll(value, key, origin, line_no);
      } else if (key == "master_seed") {
        std::uint64_t parsed = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
          fail("key 'master_seed' needs an unsigned integer, got '" + value + "'");
        }
        cfg.master_seed = parsed;
      } else if (key == "channel") {
        cfg.channel.kind = channel_kind_from_string(value);
      } else if (key == "fixed_beam") {
        cfg.channel.fixed_beam = static_cast<int>(to_ll(value, key, origin, line_no));
      } else if (key == "path_gain_vars") {
        cfg.channel.multipath.path_gain_vars.clear();
        for (const auto& part : split_list(value)) {
          cfg.channel.multipath.path_gain_vars.push_back(to_double(part, key, origin, line_no));
        }
      } else if (key == "angle_min") {
        cfg.channel.multipath.angle_min = to_double(value, key, origin, line_no);
      } else if (key == "angle_max") {
        cfg.channel.multipath.angle_max = to_double(value, key, origin, line_no);
      } else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& part : split_list(value)) cfg.schemes.push_back(scheme_from_string(part));
      } else if (key == "search_candidates") {
        cfg.search_candidates = static_cast<int>(to_ll(value, key, origin, line_no));
      } else if (key == "search_trials") {
        cfg.search_trials = to_ll(value, key, origin, line_no);
      } else if (key == "search_snr_db") {
        cfg.search_snr_db = to_double(value, key, origin, line_no);
      } else if (key == "ground_truth") {
        if (value == "best_dft") {
          cfg.ground_truth = GroundTruth::BestDftBeam;
        } else if (value == "nearest_strongest") {
          cfg.ground_truth = GroundTruth::NearestToStrongestPath;
        } else {
          fail("ground_truth must be 'best_dft' or 'nearest_strongest'");
        }
      } else if (key == "toolkit_version") {
        // accepted for provenance; not validated
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  if (!saw_experiment) {
    throw ParseError(std::string(origin) + ": missing required key 'experiment'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

}  // namespace hashbeam
