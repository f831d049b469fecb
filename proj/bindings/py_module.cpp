// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core operations. Complex vectors map to lists of
// Python complex numbers; samplers are opaque handles produced by the
// factory functions.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hashbeam/analysis.hpp"
#include "hashbeam/codebook.hpp"
#include "hashbeam/harness.hpp"
#include "hashbeam/trainer.hpp"

namespace py = pybind11;
namespace hb = hashbeam;

namespace {

hb::GroundTruth ground_truth_from_string(const std::string& name) {
  if (name == "best_dft") return hb::GroundTruth::BestDftBeam;
  if (name == "nearest_strongest") return hb::GroundTruth::NearestToStrongestPath;
  throw std::invalid_argument("ground_truth must be 'best_dft' or 'nearest_strongest'");
}

hb::Family family_from_string(const std::string& name) {
  if (name == "existing") return hb::Family::Existing;
  if (name == "proposed") return hb::Family::Proposed;
  throw std::invalid_argument("family must be 'existing' or 'proposed'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hash-codebook beam training toolkit";
  m.attr("__version__") = std::string(hb::kToolkitVersion);

  py::register_exception<hb::ParseError>(m, "CodebookParseError", PyExc_ValueError);
  py::register_exception<hb::ValidationError>(m, "CodebookValidationError", PyExc_ValueError);

  py::class_<hb::ArrayConfig>(m, "ArrayConfig")
      .def(py::init<int>(), py::arg("n_antennas"))
      .def_property_readonly("n", &hb::ArrayConfig::n)
      .def("grid_sin", &hb::ArrayConfig::grid_sin, py::arg("beam"))
      .def("grid_angle", &hb::ArrayConfig::grid_angle, py::arg("beam"));

  py::class_<hb::ChannelPath>(m, "ChannelPath")
      .def(py::init([](std::complex<double> gain, double angle) {
             return hb::ChannelPath{gain, angle};
           }),
           py::arg("gain"), py::arg("angle"))
      .def_readwrite("gain", &hb::ChannelPath::gain)
      .def_readwrite("angle", &hb::ChannelPath::angle);

  py::class_<hb::Channel>(m, "Channel")
      .def(py::init([](std::vector<hb::ChannelPath> paths) {
             return hb::Channel{std::move(paths)};
           }),
           py::arg("paths"))
      .def_readwrite("paths", &hb::Channel::paths);

  m.def("steering_vector", &hb::steering_vector, py::arg("cfg"), py::arg("angle"));
  m.def("dft_beam", &hb::dft_beam, py::arg("cfg"), py::arg("beam"));
  m.def("synthesize_channel", &hb::synthesize_channel, py::arg("cfg"), py::arg("channel"));
  m.def("inner_product", &hb::inner_product, py::arg("a"), py::arg("b"));
  m.def("beam_rsrp", &hb::beam_rsrp, py::arg("channel"), py::arg("weights"));
  m.def("beamspace_channel", &hb::beamspace_channel, py::arg("cfg"), py::arg("channel"));
  m.def("best_beam", &hb::best_beam, py::arg("beamspace"));

  py::class_<hb::ChannelSampler>(m, "ChannelSampler");
  m.def("on_grid_los_sampler", &hb::on_grid_los_sampler, py::arg("cfg"));
  m.def("on_grid_los_sampler_fixed", &hb::on_grid_los_sampler_fixed, py::arg("cfg"),
        py::arg("beam"));
  m.def("multipath_sampler", &hb::multipath_sampler, py::arg("cfg"), py::arg("path_gain_vars"),
        py::arg("angle_min") = -1.5707963267948966, py::arg("angle_max") = 1.5707963267948966);

  py::class_<hb::HashCodebook>(m, "HashCodebook")
      .def_readonly("rows", &hb::HashCodebook::rows)
      .def_readonly("cols", &hb::HashCodebook::cols)
      .def_readonly("l_per_row", &hb::HashCodebook::l_per_row)
      .def_property_readonly("provenance",
                             [](const hb::HashCodebook& cb) {
                               return std::string(hb::to_string(cb.provenance));
                             })
      .def_property_readonly("seed",
                             [](const hb::HashCodebook& cb) -> py::object {
                               if (cb.seed) return py::cast(*cb.seed);
                               return py::none();
                             })
      .def("bit", &hb::HashCodebook::bit, py::arg("row"), py::arg("col"),
           "0-based selection flag")
      .def("row_members", &hb::HashCodebook::row_members, py::arg("row"))
      .def("__eq__",
           [](const hb::HashCodebook& a, const hb::HashCodebook& b) { return a == b; })
      .def("__repr__", [](const hb::HashCodebook& cb) {
        return "<HashCodebook " + std::string(hb::to_string(cb.provenance)) +
               " m=" + std::to_string(cb.rows) + " n=" + std::to_string(cb.cols) +
               " l=" + std::to_string(cb.l_per_row) + ">";
      });

  py::class_<hb::CodebookStats>(m, "CodebookStats")
      .def_readonly("column_counts", &hb::CodebookStats::column_counts)
      .def("overlap", &hb::CodebookStats::overlap, py::arg("a"), py::arg("b"));

  m.def("gen_existing_random", &hb::gen_existing_random, py::arg("n_beams"), py::arg("m_rows"),
        py::arg("l"), py::arg("seed"));
  m.def("gen_proposed_random", &hb::gen_proposed_random, py::arg("n_beams"), py::arg("m_rows"),
        py::arg("l"), py::arg("seed"));
  m.def("gen_sweeping", &hb::gen_sweeping, py::arg("n_beams"));
  m.def("gen_hierarchical", &hb::gen_hierarchical, py::arg("n_beams"));
  m.def("stats", &hb::stats, py::arg("codebook"));
  m.def("validate", &hb::validate, py::arg("codebook"));
  m.def("to_text", &hb::to_text, py::arg("codebook"));
  m.def("from_text", &hb::from_text, py::arg("text"), py::arg("origin") = "<string>");
  m.def("save", &hb::save, py::arg("codebook"), py::arg("path"));
  m.def("load", &hb::load, py::arg("path"));

  m.def(
      "search_fixed",
      [](int n_beams, int m_rows, int l, int candidates, const hb::ChannelSampler& sampler,
         double sigma2, std::int64_t trials, std::uint64_t seed, int threads) {
        return hb::search_fixed(n_beams, m_rows, l, candidates, sampler, sigma2, trials, seed,
                                threads);
      },
      py::arg("n_beams"), py::arg("m_rows"), py::arg("l"), py::arg("candidates"),
      py::arg("sampler"), py::arg("sigma2"), py::arg("trials"), py::arg("seed"),
      py::arg("threads") = 1);

  m.def("training_beam", &hb::training_beam, py::arg("codebook"), py::arg("row"), py::arg("cfg"));
  m.def(
      "measure",
      [](const hb::HashCodebook& cb, const hb::CVec& channel, double sigma2, std::uint64_t seed) {
        return hb::measure(cb, channel, hb::NoiseModel{sigma2, seed});
      },
      py::arg("codebook"), py::arg("channel"), py::arg("sigma2"), py::arg("seed"));

  py::class_<hb::TrainingOutcome>(m, "TrainingOutcome")
      .def_readonly("rsrp", &hb::TrainingOutcome::rsrp)
      .def_readonly("votes", &hb::TrainingOutcome::votes)
      .def_readonly("selected", &hb::TrainingOutcome::selected);
  m.def("vote_and_select", &hb::vote_and_select, py::arg("codebook"), py::arg("rsrp"));

  m.def(
      "run_campaign",
      [](const hb::HashCodebook& cb, const hb::ChannelSampler& sampler, double sigma2,
         std::int64_t trials, std::uint64_t seed, int threads, const std::string& ground_truth) {
        hb::CampaignOptions options;
        options.sigma2 = sigma2;
        options.trials = trials;
        options.seed = seed;
        options.threads = threads;
        options.ground_truth = ground_truth_from_string(ground_truth);
        return hb::run_campaign(cb, sampler, options);
      },
      py::arg("codebook"), py::arg("sampler"), py::arg("sigma2"), py::arg("trials"),
      py::arg("seed"), py::arg("threads") = 1, py::arg("ground_truth") = "best_dft");

  m.def(
      "pairwise_win_prob",
      [](int g_star, int g_prime, int k, int l, double sigma2) {
        return hb::pairwise_win_prob({g_star, g_prime, k, l, sigma2});
      },
      py::arg("g_star"), py::arg("g_prime"), py::arg("k"), py::arg("l"), py::arg("sigma2"));
  m.def("binomial_pmf", &hb::binomial_pmf, py::arg("n"), py::arg("p"));
  m.def("overlap_pmf_proposed", &hb::overlap_pmf_proposed, py::arg("n_beams"), py::arg("m_rows"),
        py::arg("l"));
  m.def("p_tilde_existing", &hb::p_tilde_existing, py::arg("n_beams"), py::arg("m_rows"),
        py::arg("l"), py::arg("sigma2"));
  m.def("p_tilde_proposed", &hb::p_tilde_proposed, py::arg("n_beams"), py::arg("m_rows"),
        py::arg("l"), py::arg("sigma2"));

  py::class_<hb::MetricReport>(m, "MetricReport")
      .def_readonly("sigma2", &hb::MetricReport::sigma2)
      .def_readonly("l_values", &hb::MetricReport::l_values)
      .def_readonly("p_tilde", &hb::MetricReport::p_tilde)
      .def_readonly("l_star", &hb::MetricReport::l_star);
  m.def(
      "admissible_l_values",
      [](int n_beams, int m_rows, const std::string& family) {
        return hb::admissible_l_values(n_beams, m_rows, family_from_string(family));
      },
      py::arg("n_beams"), py::arg("m_rows"), py::arg("family"));
  m.def(
      "optimize_l",
      [](int n_beams, int m_rows, double sigma2, const std::string& family) {
        return hb::optimize_l(n_beams, m_rows, sigma2, family_from_string(family));
      },
      py::arg("n_beams"), py::arg("m_rows"), py::arg("sigma2"), py::arg("family"));

  m.def(
      "success_probability",
      [](const hb::HashCodebook& cb, int n_star, double sigma2, const std::string& method,
         std::int64_t trials, std::uint64_t seed, py::object lambda, int threads) {
        hb::SuccessMethod m_enum;
        if (method == "noise_mc") {
          m_enum = hb::SuccessMethod::NoiseMc;
        } else if (method == "gaussian_region_mc") {
          m_enum = hb::SuccessMethod::GaussianRegionMc;
        } else {
          throw std::invalid_argument("method must be 'noise_mc' or 'gaussian_region_mc'");
        }
        std::optional<double> reg;
        if (!lambda.is_none()) reg = lambda.cast<double>();
        return hb::success_probability(cb, n_star, sigma2, m_enum, trials, seed, reg, threads);
      },
      py::arg("codebook"), py::arg("n_star"), py::arg("sigma2"), py::arg("method") = "noise_mc",
      py::arg("trials") = 20000, py::arg("seed") = 1, py::arg("lambda") = py::none(),
      py::arg("threads") = 1);

  m.def("sigma2_from_snr_db", &hb::sigma2_from_snr_db, py::arg("snr_db"), py::arg("n_antennas"));

  py::class_<hb::ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("n_antennas", &hb::ExperimentConfig::n_antennas)
      .def_readwrite("m_trainings", &hb::ExperimentConfig::m_trainings)
      .def_readwrite("l_values", &hb::ExperimentConfig::l_values)
      .def_readwrite("l_fixed", &hb::ExperimentConfig::l_fixed)
      .def_readwrite("snr_db_values", &hb::ExperimentConfig::snr_db_values)
      .def_readwrite("trials", &hb::ExperimentConfig::trials)
      .def_readwrite("master_seed", &hb::ExperimentConfig::master_seed)
      .def_readwrite("search_candidates", &hb::ExperimentConfig::search_candidates)
      .def_readwrite("search_trials", &hb::ExperimentConfig::search_trials)
      .def_readwrite("search_snr_db", &hb::ExperimentConfig::search_snr_db)
      .def_readwrite("threads", &hb::ExperimentConfig::threads);
  m.def("fig2_preset", &hb::fig2_preset);
  m.def("fig3_preset", &hb::fig3_preset);
  m.def("fig4_preset", &hb::fig4_preset);
  m.def("run_experiment", &hb::run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("csv_string", &hb::csv_string, py::arg("table"));
  py::class_<hb::ResultTable>(m, "ResultTable")
      .def("__len__", [](const hb::ResultTable& t) { return t.rows.size(); });
  m.def("metadata_string", &hb::metadata_string, py::arg("config"));
}
