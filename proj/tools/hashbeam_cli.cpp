// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: codebook generation and inspection, one-off
// simulations and analyses, the offline fixed-codebook search, and the
// figure experiments with CSV + config sidecar outputs.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hashbeam/analysis.hpp"
#include "hashbeam/codebook.hpp"
#include "hashbeam/harness.hpp"
#include "hashbeam/trainer.hpp"

namespace hb = hashbeam;

namespace {

struct CodebookSource {
  std::string path;
  std::string family = "proposed";
  int n = 128;
  int m = 64;
  int l = 8;
  std::uint64_t seed = 1;
};

void add_codebook_options(CLI::App* cmd, CodebookSource& src, bool allow_file) {
  if (allow_file) {
    cmd->add_option("--codebook", src.path, "codebook file (.hcb); overrides generation flags");
  }
  cmd->add_option("--family", src.family, "existing|proposed|sweeping|hierarchical")
      ->check(CLI::IsMember({"existing", "proposed", "sweeping", "hierarchical"}));
  cmd->add_option("--n", src.n, "number of DFT beams / antennas");
  cmd->add_option("--m", src.m, "number of training beams");
  cmd->add_option("--l", src.l, "DFT beams per training beam");
  cmd->add_option("--cb-seed", src.seed, "codebook generation seed");
}

hb::HashCodebook make_codebook(const CodebookSource& src) {
  if (!src.path.empty()) return hb::load(src.path);
  if (src.family == "existing") return hb::gen_existing_random(src.n, src.m, src.l, src.seed);
  if (src.family == "proposed") return hb::gen_proposed_random(src.n, src.m, src.l, src.seed);
  if (src.family == "sweeping") return hb::gen_sweeping(src.n);
  if (src.family == "hierarchical") return hb::gen_hierarchical(src.n);
  throw std::invalid_argument("unknown codebook family '" + src.family + "'");
}

struct ChannelFlags {
  std::string kind = "ongrid";
  int fixed_beam = 0;
  std::vector<double> gain_vars{1.0, 0.01, 0.01};
  double angle_min = -1.5707963267948966;
  double angle_max = 1.5707963267948966;
};

void add_channel_options(CLI::App* cmd, ChannelFlags& flags) {
  cmd->add_option("--channel", flags.kind, "ongrid|ongrid-fixed|multipath")
      ->check(CLI::IsMember({"ongrid", "ongrid-fixed", "multipath"}));
  cmd->add_option("--fixed-beam", flags.fixed_beam,
                  "grid beam for --channel ongrid-fixed (default N/2)");
  cmd->add_option("--path-gain-vars", flags.gain_vars, "per-path gain variances");
  cmd->add_option("--angle-min", flags.angle_min, "path angle lower bound (rad)");
  cmd->add_option("--angle-max", flags.angle_max, "path angle upper bound (rad)");
}

hb::ChannelSpec make_channel_spec(const ChannelFlags& flags) {
  hb::ChannelSpec spec;
  if (flags.kind == "ongrid") {
    spec.kind = hb::ChannelSpec::Kind::OnGridLos;
  } else if (flags.kind == "ongrid-fixed") {
    spec.kind = hb::ChannelSpec::Kind::OnGridLosFixed;
  } else {
    spec.kind = hb::ChannelSpec::Kind::Multipath;
  }
  spec.fixed_beam = flags.fixed_beam;
  spec.multipath.path_gain_vars = flags.gain_vars;
  spec.multipath.angle_min = flags.angle_min;
  spec.multipath.angle_max = flags.angle_max;
  return spec;
}

double resolve_sigma2(const std::optional<double>& sigma2, const std::optional<double>& snr_db,
                      int n_antennas) {
  if (sigma2 && snr_db) throw std::invalid_argument("give either --sigma2 or --snr-db, not both");
  if (sigma2) return *sigma2;
  if (snr_db) return hb::sigma2_from_snr_db(*snr_db, n_antennas);
  return hb::sigma2_from_snr_db(10.0, n_antennas);
}

int run_figure(hb::Experiment experiment, hb::ExperimentConfig cfg, const std::string& out_prefix,
               const std::string& config_path) {
  if (!config_path.empty()) {
    const int threads = cfg.threads;
    cfg = hb::load_config(config_path);
    cfg.threads = threads;
  }
  cfg.experiment = experiment;
  cfg = hb::resolved_config(cfg);
  const hb::ResultTable table = hb::run_experiment(cfg);
  const std::filesystem::path csv_path = out_prefix + ".csv";
  const std::filesystem::path meta_path = out_prefix + ".meta";
  hb::write_csv(table, csv_path);
  hb::write_metadata(cfg, meta_path);
  std::cout << "wrote " << csv_path.string() << " (" << table.rows.size() << " rows) and "
            << meta_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hash-codebook beam training toolkit"};
  app.require_subcommand(1);

  // --- gen-codebook ---------------------------------------------------------
  auto* gen = app.add_subcommand("gen-codebook", "generate a hash codebook file");
  CodebookSource gen_src;
  add_codebook_options(gen, gen_src, /*allow_file=*/false);
  std::string gen_out;
  gen->add_option("--out", gen_out, "output file")->required();

  // --- stats ----------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "print codebook statistics");
  std::string stats_file;
  stats_cmd->add_option("file", stats_file, "codebook file")->required();

  // --- simulate ---------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run a beam training campaign");
  CodebookSource sim_src;
  add_codebook_options(sim, sim_src, /*allow_file=*/true);
  ChannelFlags sim_channel;
  add_channel_options(sim, sim_channel);
  std::optional<double> sim_sigma2, sim_snr;
  std::int64_t sim_trials = 20000;
  std::uint64_t sim_seed = 1;
  int sim_threads = 1;
  std::string sim_truth = "best-dft";
  sim->add_option("--sigma2", sim_sigma2, "noise variance (linear)");
  sim->add_option("--snr-db", sim_snr, "SNR in dB (default 10)");
  sim->add_option("--trials", sim_trials, "Monte Carlo trials");
  sim->add_option("--seed", sim_seed, "campaign master seed");
  sim->add_option("--threads", sim_threads, "worker threads");
  sim->add_option("--ground-truth", sim_truth, "best-dft|nearest-strongest")
      ->check(CLI::IsMember({"best-dft", "nearest-strongest"}));

  // --- analyze ----------------------------------------------------------------
  auto* ana = app.add_subcommand("analyze", "success probability for an on-grid channel");
  std::string ana_file;
  ana->add_option("--codebook", ana_file, "codebook file")->required();
  int ana_n_star = 0;
  std::optional<double> ana_sigma2, ana_snr, ana_lambda;
  std::int64_t ana_trials = 20000;
  std::uint64_t ana_seed = 1;
  int ana_threads = 1;
  std::string ana_method = "noise-mc";
  ana->add_option("--n-star", ana_n_star, "true beam index (default N/2)");
  ana->add_option("--sigma2", ana_sigma2, "noise variance (linear)");
  ana->add_option("--snr-db", ana_snr, "SNR in dB (default 10)");
  ana->add_option("--method", ana_method, "noise-mc|gaussian-region-mc")
      ->check(CLI::IsMember({"noise-mc", "gaussian-region-mc"}));
  ana->add_option("--trials", ana_trials, "Monte Carlo trials");
  ana->add_option("--seed", ana_seed, "seed");
  ana->add_option("--lambda", ana_lambda, "regularization (default 1e-6*sigma2)");
  ana->add_option("--threads", ana_threads, "worker threads");

  // --- optimize-l -------------------------------------------------------------
  auto* opt = app.add_subcommand("optimize-l", "heuristic metric curve and best L");
  std::string opt_family = "proposed";
  int opt_n = 128, opt_m = 64;
  std::optional<double> opt_sigma2, opt_snr;
  opt->add_option("--family", opt_family, "existing|proposed")
      ->check(CLI::IsMember({"existing", "proposed"}));
  opt->add_option("--n", opt_n, "number of DFT beams");
  opt->add_option("--m", opt_m, "number of training beams");
  opt->add_option("--sigma2", opt_sigma2, "noise variance (linear)");
  opt->add_option("--snr-db", opt_snr, "SNR in dB (default 10)");

  // --- search-fixed -------------------------------------------------------------
  auto* search = app.add_subcommand("search-fixed", "offline fixed-codebook search");
  int search_n = 128, search_m = 64, search_l = 8, search_x = 1000, search_threads = 1;
  std::int64_t search_trials = 20000;
  std::uint64_t search_seed = 1;
  std::optional<double> search_sigma2, search_snr;
  ChannelFlags search_channel;
  search_channel.kind = "multipath";
  std::string search_out;
  search->add_option("--n", search_n, "number of DFT beams");
  search->add_option("--m", search_m, "number of training beams");
  search->add_option("--l", search_l, "DFT beams per training beam");
  search->add_option("--x", search_x, "number of candidate codebooks");
  search->add_option("--trials", search_trials, "evaluation trials per candidate");
  search->add_option("--seed", search_seed, "search master seed");
  search->add_option("--sigma2", search_sigma2, "noise variance (linear)");
  search->add_option("--snr-db", search_snr, "SNR in dB (default 10)");
  search->add_option("--threads", search_threads, "worker threads");
  add_channel_options(search, search_channel);
  search->add_option("--out", search_out, "output codebook file")->required();

  // --- figures ----------------------------------------------------------------
  struct FigureFlags {
    hb::ExperimentConfig cfg;
    std::string out;
    std::string config_path;
  };
  auto add_figure = [&](const char* name, const char* help, hb::ExperimentConfig preset) {
    auto* cmd = app.add_subcommand(name, help);
    auto flags = std::make_shared<FigureFlags>();
    flags->cfg = std::move(preset);
    flags->out = name;
    cmd->add_option("--out", flags->out, "output prefix (<prefix>.csv, <prefix>.meta)");
    cmd->add_option("--config", flags->config_path, "config sidecar to rerun from");
    cmd->add_option("--trials", flags->cfg.trials, "trials per experiment point");
    cmd->add_option("--seed", flags->cfg.master_seed, "master seed");
    cmd->add_option("--threads", flags->cfg.threads, "worker threads");
    cmd->add_option("--n", flags->cfg.n_antennas, "number of antennas / DFT beams");
    cmd->add_option("--m", flags->cfg.m_trainings, "number of training beams");
    cmd->add_option("--l", flags->cfg.l_values, "L values (default: all admissible)");
    cmd->add_option("--l-fixed", flags->cfg.l_fixed, "L for the fig4 hash schemes");
    cmd->add_option("--snr-db", flags->cfg.snr_db_values, "SNR grid in dB");
    cmd->add_option("--search-x", flags->cfg.search_candidates, "fixed-search candidates");
    cmd->add_option("--search-trials", flags->cfg.search_trials, "fixed-search trials");
    return flags;
  };
  auto fig2_flags = add_figure("fig2", "L sweep: simulation vs theory vs heuristic", hb::fig2_preset());
  auto fig3_flags = add_figure("fig3", "L sweep across SNR", hb::fig3_preset());
  auto fig4_flags = add_figure("fig4", "scheme comparison on multipath channels", hb::fig4_preset());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) {
      const hb::HashCodebook cb = make_codebook(gen_src);
      hb::save(cb, gen_out);
      std::cout << "wrote " << gen_out << ": " << hb::to_string(cb.provenance) << " n=" << cb.cols
                << " m=" << cb.rows << " l=" << cb.l_per_row << "\n";
    } else if (stats_cmd->parsed()) {
      const hb::HashCodebook cb = hb::load(stats_file);
      const hb::CodebookStats st = hb::stats(cb);
      std::cout << "n " << cb.cols << "\nm " << cb.rows << "\nl " << cb.l_per_row
                << "\nprovenance " << hb::to_string(cb.provenance) << "\nseed ";
      if (cb.seed) {
        std::cout << *cb.seed;
      } else {
        std::cout << "none";
      }
      int g_min = st.column_counts[0], g_max = st.column_counts[0];
      for (int g : st.column_counts) {
        g_min = std::min(g_min, g);
        g_max = std::max(g_max, g);
      }
      int k_max = 0;
      for (int a = 0; a < cb.cols; ++a) {
        for (int b = a + 1; b < cb.cols; ++b) k_max = std::max(k_max, st.overlap(a, b));
      }
      std::cout << "\ncolumn_count_min " << g_min << "\ncolumn_count_max " << g_max
                << "\nmax_pair_overlap " << k_max << "\ncolumn_counts";
      for (int g : st.column_counts) std::cout << ' ' << g;
      std::cout << "\n";
    } else if (sim->parsed()) {
      const hb::HashCodebook cb = make_codebook(sim_src);
      const hb::ArrayConfig array(cb.cols);
      hb::ChannelSpec spec = make_channel_spec(sim_channel);
      const double sigma2 = resolve_sigma2(sim_sigma2, sim_snr, cb.cols);
      hb::CampaignOptions options;
      options.sigma2 = sigma2;
      options.trials = sim_trials;
      options.seed = sim_seed;
      options.threads = sim_threads;
      options.ground_truth = sim_truth == "best-dft" ? hb::GroundTruth::BestDftBeam
                                                     : hb::GroundTruth::NearestToStrongestPath;
      const double accuracy = hb::run_campaign(cb, hb::make_sampler(spec, array), options);
      const double se = std::sqrt(accuracy * (1.0 - accuracy) / sim_trials);
      std::printf("accuracy %.10g stderr %.10g trials %lld sigma2 %.10g\n", accuracy, se,
                  static_cast<long long>(sim_trials), sigma2);
    } else if (ana->parsed()) {
      const hb::HashCodebook cb = hb::load(ana_file);
      const double sigma2 = resolve_sigma2(ana_sigma2, ana_snr, cb.cols);
      const int n_star = ana_n_star == 0 ? cb.cols / 2 : ana_n_star;
      const auto method = ana_method == "noise-mc" ? hb::SuccessMethod::NoiseMc
                                                   : hb::SuccessMethod::GaussianRegionMc;
      const double p = hb::success_probability(cb, n_star, sigma2, method, ana_trials, ana_seed,
                                               ana_lambda, ana_threads);
      const double se = std::sqrt(p * (1.0 - p) / ana_trials);
      std::printf("success_probability %.10g stderr %.10g n_star %d sigma2 %.10g\n", p, se, n_star,
                  sigma2);
    } else if (opt->parsed()) {
      const double sigma2 = resolve_sigma2(opt_sigma2, opt_snr, opt_n);
      const hb::Family family =
          opt_family == "existing" ? hb::Family::Existing : hb::Family::Proposed;
      const hb::MetricReport report = hb::optimize_l(opt_n, opt_m, sigma2, family);
      std::printf("family %s sigma2 %.10g\n", opt_family.c_str(), sigma2);
      std::printf("%6s %s\n", "L", "p_tilde");
      for (std::size_t i = 0; i < report.l_values.size(); ++i) {
        std::printf("%6d %.10g\n", report.l_values[i], report.p_tilde[i]);
      }
      std::printf("l_star %d\n", report.l_star);
    } else if (search->parsed()) {
      const hb::ArrayConfig array(search_n);
      const hb::ChannelSpec spec = make_channel_spec(search_channel);
      const double sigma2 = resolve_sigma2(search_sigma2, search_snr, search_n);
      const auto [cb, accuracy] =
          hb::search_fixed(search_n, search_m, search_l, search_x, hb::make_sampler(spec, array),
                           sigma2, search_trials, search_seed, search_threads);
      hb::save(cb, search_out);
      std::printf("wrote %s: fixed codebook from %d candidates, search accuracy %.10g\n",
                  search_out.c_str(), search_x, accuracy);
    } else if (fig2_flags && app.get_subcommand("fig2")->parsed()) {
      return run_figure(hb::Experiment::Fig2, fig2_flags->cfg, fig2_flags->out,
                        fig2_flags->config_path);
    } else if (fig3_flags && app.get_subcommand("fig3")->parsed()) {
      return run_figure(hb::Experiment::Fig3, fig3_flags->cfg, fig3_flags->out,
                        fig3_flags->config_path);
    } else if (fig4_flags && app.get_subcommand("fig4")->parsed()) {
      return run_figure(hb::Experiment::Fig4, fig4_flags->cfg, fig4_flags->out,
                        fig4_flags->config_path);
    }
  } catch (const hb::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const hb::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
