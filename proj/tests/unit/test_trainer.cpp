// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hashbeam/analysis.hpp"
#include "hashbeam/codebook.hpp"
#include "hashbeam/trainer.hpp"

using namespace hashbeam;

TEST_CASE("training beams") {
  const ArrayConfig cfg(8);

  SUBCASE("sweeping row n is exactly the n-th DFT beam") {
    const HashCodebook sweep = gen_sweeping(8);
    for (int n = 1; n <= 8; ++n) {
      const CVec w = training_beam(sweep, n, cfg);
      const CVec f = dft_beam(cfg, n);
      for (int k = 0; k < 8; ++k) CHECK(std::abs(w[k] - f[k]) < 1e-15);
    }
  }

  SUBCASE("two-beam superposition has unit norm") {
    HashCodebook cb;
    cb.rows = 1;
    cb.cols = 8;
    cb.l_per_row = 2;
    cb.bits.assign(8, 0);
    cb.set_bit(0, 1, true);
    cb.set_bit(0, 5, true);
    const CVec w = training_beam(cb, 1, cfg);
    CHECK(std::fabs(std::sqrt(beam_rsrp(w, w)) - 1.0) < 1e-12);
    const CVec expect_f2 = dft_beam(cfg, 2);
    const CVec expect_f6 = dft_beam(cfg, 6);
    for (int k = 0; k < 8; ++k) {
      CHECK(std::abs(w[k] - (expect_f2[k] + expect_f6[k]) / std::sqrt(2.0)) < 1e-14);
    }
  }

  SUBCASE("on-grid RSRP equals c/L for every row") {
    const HashCodebook cb = gen_proposed_random(8, 4, 2, 99);
    const int n_star = 3;
    const CVec h = steering_vector(cfg, cfg.grid_angle(n_star));
    for (int m = 1; m <= cb.rows; ++m) {
      const double expected = cb.bit(m - 1, n_star - 1) ? 1.0 / cb.l_per_row : 0.0;
      CHECK(std::fabs(beam_rsrp(h, training_beam(cb, m, cfg)) - expected) < 1e-12);
    }
  }

  SUBCASE("row index range") {
    const HashCodebook sweep = gen_sweeping(8);
    CHECK_THROWS_AS(training_beam(sweep, 0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(training_beam(sweep, 9, cfg), std::invalid_argument);
    CHECK_THROWS_AS(training_beam(sweep, 1, ArrayConfig(16)), std::invalid_argument);
  }
}

TEST_CASE("measure") {
  const ArrayConfig cfg(8);
  const HashCodebook cb = gen_proposed_random(8, 4, 2, 5);

  SUBCASE("noiseless on-grid values are exact") {
    const int n_star = 6;
    const CVec h = steering_vector(cfg, cfg.grid_angle(n_star));
    const auto y = measure(cb, h, NoiseModel{0.0, 1});
    for (int m = 0; m < cb.rows; ++m) {
      const double expected = cb.bit(m, n_star - 1) ? 0.5 : 0.0;
      CHECK(std::fabs(y[m] - expected) < 1e-12);
    }
  }

  SUBCASE("zero channel, zero noise") {
    const CVec h(8, {0.0, 0.0});
    for (double v : measure(cb, h, NoiseModel{0.0, 1})) CHECK(v == 0.0);
  }

  SUBCASE("noise moments on a zero channel") {
    const CVec h(8, {0.0, 0.0});
    const int reps = 250000;  // 4 rows each -> 1e6 draws
    double sum = 0.0, sum2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      for (double v : measure(cb, h, NoiseModel{1.0, 1000 + static_cast<std::uint64_t>(rep)})) {
        sum += v;
        sum2 += v * v;
      }
    }
    const double n = 4.0 * reps;
    const double mean = sum / n;
    CHECK(std::fabs(mean) < 3e-3);
    CHECK(std::fabs(sum2 / n - mean * mean - 1.0) < 0.01);
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(measure(cb, CVec(4), NoiseModel{0.0, 1}), std::invalid_argument);
  }
}

TEST_CASE("vote_and_select") {
  SUBCASE("sweeping codebook: votes equal the measurements") {
    const HashCodebook sweep = gen_sweeping(4);
    const std::vector<double> y{0.25, 1.5, -0.5, 1.5};
    const TrainingOutcome out = vote_and_select(sweep, y);
    CHECK(out.votes == y);
    CHECK(out.selected == 2);  // smallest argmax on the tie with index 4
  }

  SUBCASE("all-ones measurements on a grouped codebook hit the tie-break") {
    const HashCodebook cb = gen_proposed_random(8, 4, 2, 21);
    const TrainingOutcome out = vote_and_select(cb, std::vector<double>(4, 1.0));
    for (double p : out.votes) CHECK(p == doctest::Approx(1.0));  // G_n = M*L/N = 1
    CHECK(out.selected == 1);
  }

  SUBCASE("rows accumulate onto shared beams") {
    HashCodebook cb;
    cb.rows = 2;
    cb.cols = 4;
    cb.l_per_row = 2;
    cb.bits.assign(8, 0);
    cb.set_bit(0, 0, true);
    cb.set_bit(0, 2, true);
    cb.set_bit(1, 0, true);
    cb.set_bit(1, 3, true);
    const TrainingOutcome out = vote_and_select(cb, {0.75, 0.5});
    CHECK(out.votes[0] == doctest::Approx(1.25));
    CHECK(out.votes[2] == doctest::Approx(0.75));
    CHECK(out.votes[3] == doctest::Approx(0.5));
    CHECK(out.selected == 1);
  }

  SUBCASE("linearity (dyadic values are exact) and scaling invariance") {
    const HashCodebook cb = gen_existing_random(16, 8, 3, 2);
    std::vector<double> y1(8), y2(8);
    for (int m = 0; m < 8; ++m) {
      y1[m] = (m + 1) * 0.25;
      y2[m] = (m % 3) * 0.5;
    }
    std::vector<double> y_sum(8);
    for (int m = 0; m < 8; ++m) y_sum[m] = y1[m] + y2[m];
    const auto v1 = vote_and_select(cb, y1).votes;
    const auto v2 = vote_and_select(cb, y2).votes;
    const auto vs = vote_and_select(cb, y_sum).votes;
    for (int n = 0; n < 16; ++n) CHECK(vs[n] == v1[n] + v2[n]);

    std::vector<double> y_scaled(8);
    for (int m = 0; m < 8; ++m) y_scaled[m] = 2.0 * y1[m];
    CHECK(vote_and_select(cb, y_scaled).selected == vote_and_select(cb, y1).selected);
  }

  SUBCASE("noiseless on-grid votes match the overlap statistics") {
    const ArrayConfig cfg(16);
    const HashCodebook cb = gen_proposed_random(16, 8, 4, 77);
    const CodebookStats st = stats(cb);
    const int n_star = 11;
    const CVec h = steering_vector(cfg, cfg.grid_angle(n_star));
    const TrainingOutcome out = vote_and_select(cb, measure(cb, h, NoiseModel{0.0, 1}));
    for (int n = 0; n < 16; ++n) {
      const double expected =
          static_cast<double>(st.overlap(n_star - 1, n)) / cb.l_per_row;
      CHECK(std::fabs(out.votes[n] - expected) < 1e-12);
    }
  }

  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(vote_and_select(gen_sweeping(4), std::vector<double>(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("run_campaign") {
  const ArrayConfig cfg(128);

  SUBCASE("noiseless sweep always succeeds") {
    const double acc = run_campaign(gen_sweeping(128), on_grid_los_sampler(cfg), 0.0, 10000, 3);
    CHECK(acc == 1.0);
  }

  SUBCASE("noiseless relabeled sweep always succeeds") {
    HashCodebook perm;
    perm.rows = 8;
    perm.cols = 8;
    perm.l_per_row = 1;
    perm.provenance = Provenance::ExistingRandom;
    perm.bits.assign(64, 0);
    for (int r = 0; r < 8; ++r) perm.set_bit(r, 7 - r, true);
    const ArrayConfig cfg8(8);
    CHECK(run_campaign(perm, on_grid_los_sampler(cfg8), 0.0, 5000, 4) == 1.0);
  }

  SUBCASE("pure noise picks uniformly among beams") {
    const HashCodebook cb = gen_proposed_random(128, 64, 8, 6);
    const double acc = run_campaign(cb, on_grid_los_sampler(cfg), 1e6, 100000, 8, 4);
    const double expect = 1.0 / 128.0;
    const double se = std::sqrt(expect * (1.0 - expect) / 100000.0);
    CHECK(std::fabs(acc - expect) < 3.0 * se);
  }

  SUBCASE("bit-identical across runs and thread counts") {
    const HashCodebook cb = gen_proposed_random(128, 64, 8, 6);
    const auto sampler = multipath_sampler(cfg, {1.0, 0.01, 0.01}, -1.5, 1.5);
    const double a = run_campaign(cb, sampler, 1e-4, 4000, 19, 1);
    const double b = run_campaign(cb, sampler, 1e-4, 4000, 19, 3);
    const double c = run_campaign(cb, sampler, 1e-4, 4000, 19, 8);
    CHECK(a == b);
    CHECK(a == c);
  }

  SUBCASE("cached evaluation reproduces the plain campaign exactly") {
    const HashCodebook cb = gen_proposed_random(16, 8, 4, 31);
    const ArrayConfig cfg16(16);
    const auto sampler = multipath_sampler(cfg16, {1.0, 0.01}, -1.0, 1.0);
    const double sigma2 = 3e-4;
    const double plain = run_campaign(cb, sampler, sigma2, 3000, 55);
    const auto cache = detail::make_campaign_cache(cfg16, sampler, 8, 3000, 55, 2,
                                                   GroundTruth::BestDftBeam);
    CHECK(detail::run_campaign_cached(cb, cache, sigma2, 2) == plain);
  }

  SUBCASE("ground-truth switch changes the scoring, not the decoder") {
    const HashCodebook cb = gen_proposed_random(16, 8, 4, 3);
    const ArrayConfig cfg16(16);
    const auto sampler = multipath_sampler(cfg16, {1.0, 0.01, 0.01}, -1.5, 1.5);
    CampaignOptions base{1e-4, 5000, 5, 2, GroundTruth::BestDftBeam};
    CampaignOptions alt = base;
    alt.ground_truth = GroundTruth::NearestToStrongestPath;
    const double acc_best = run_campaign(cb, sampler, base);
    const double acc_near = run_campaign(cb, sampler, alt);
    CHECK(acc_best > 0.2);
    CHECK(acc_near > 0.2);
    CHECK(acc_best != acc_near);  // off-grid straddle trials score differently
  }

  SUBCASE("option validation") {
    const HashCodebook cb = gen_sweeping(4);
    const ArrayConfig cfg4(4);
    CHECK_THROWS_AS(run_campaign(cb, on_grid_los_sampler(cfg4), -1.0, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_campaign(cb, on_grid_los_sampler(cfg4), 0.0, 0, 1),
                    std::invalid_argument);
  }
}
