// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hashbeam/analysis.hpp"
#include "hashbeam/codebook.hpp"
#include "hashbeam/harness.hpp"
#include "hashbeam/linalg.hpp"
#include "hashbeam/rng.hpp"

using namespace hashbeam;

namespace {

// End-to-end pairwise oracle: sample a codebook, a random competitor and one
// noise vector; count wins with ties as 1/2. Returns the mean and its se.
struct OracleResult {
  double mean = 0.0;
  double se = 0.0;
};

OracleResult pairwise_oracle(int n, int m, int l, double sigma2, bool proposed,
                             long long samples, std::uint64_t seed) {
  Rng rng(seed);
  const double sigma = std::sqrt(sigma2);
  double sum = 0.0, sum2 = 0.0;
  for (long long s = 0; s < samples; ++s) {
    const HashCodebook cb = proposed ? gen_proposed_random(n, m, l, rng.next_u64())
                                     : gen_existing_random(n, m, l, rng.next_u64());
    const int competitor = 1 + static_cast<int>(rng.below(n - 1));  // true beam is column 0
    double p_star = 0.0, p_prime = 0.0;
    for (int row = 0; row < m; ++row) {
      const double y = (cb.bit(row, 0) ? 1.0 / l : 0.0) + sigma * rng.gaussian();
      if (cb.bit(row, 0)) p_star += y;
      if (cb.bit(row, competitor)) p_prime += y;
    }
    const double v = p_star > p_prime ? 1.0 : (p_star == p_prime ? 0.5 : 0.0);
    sum += v;
    sum2 += v * v;
  }
  OracleResult result;
  result.mean = sum / samples;
  result.se = std::sqrt((sum2 / samples - result.mean * result.mean) / samples);
  return result;
}

// Variant of the existing-family metric with the exact conditional trial
// count (M - g_star competitor rows). Used to size the closed form's
// documented approximation gap, not as the implementation.
double p_tilde_existing_exact_coupling(int n, int m, int l, double sigma2) {
  const auto pmf_g = binomial_pmf(m, double(l) / n);
  double total = 0.0;
  for (int g = 0; g <= m; ++g) {
    if (pmf_g[g] == 0.0) continue;
    const auto pmf_k = binomial_pmf(g, double(l - 1) / (n - 1));
    const auto pmf_j = binomial_pmf(m - g, double(l) / (n - 1));
    for (int k = 0; k <= g; ++k) {
      if (pmf_k[k] == 0.0) continue;
      for (int j = 0; j <= m - g; ++j) {
        total += pmf_g[g] * pmf_k[k] * pmf_j[j] * pairwise_win_prob({g, k + j, k, l, sigma2});
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("pairwise win probability") {
  SUBCASE("full overlap is a coin flip") {
    CHECK(pairwise_win_prob({4, 4, 4, 8, 0.1}) == 0.5);
    CHECK(pairwise_win_prob({0, 0, 0, 2, 0.3}) == 0.5);
  }
  SUBCASE("vanishing noise with a positive margin is certain") {
    CHECK(pairwise_win_prob({4, 4, 1, 8, 0.0}) == 1.0);
  }
  SUBCASE("matches direct Gaussian sampling") {
    const PairwiseContext ctx{4, 4, 1, 8, 0.1};
    Rng rng(404);
    const double mean = (4.0 - 1.0) / 8.0;
    const double sd = std::sqrt((4 + 4 - 2) * 0.1);
    long long wins = 0;
    const long long samples = 1000000;
    for (long long i = 0; i < samples; ++i) wins += (mean + sd * rng.gaussian()) > 0.0;
    const double mc = double(wins) / samples;
    const double se = std::sqrt(mc * (1.0 - mc) / samples);
    CHECK(std::fabs(pairwise_win_prob(ctx) - mc) < 3.0 * se);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(pairwise_win_prob({2, 4, 3, 8, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_win_prob({2, 4, -1, 8, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_win_prob({2, 4, 1, 0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_win_prob({2, 4, 1, 8, -0.1}), std::invalid_argument);
  }
}

TEST_CASE("binomial pmf") {
  const auto pmf = binomial_pmf(64, 0.125);
  CHECK(std::fabs(std::accumulate(pmf.begin(), pmf.end(), 0.0) - 1.0) < 1e-12);
  CHECK(binomial_pmf(5, 0.0)[0] == 1.0);
  CHECK(binomial_pmf(5, 1.0)[5] == 1.0);
  CHECK(binomial_pmf(0, 0.3)[0] == 1.0);
}

TEST_CASE("weight distributions are normalized") {
  // the three existing-family factors at (N,M,L)=(8,6,2)
  const int n = 8, m = 6, l = 2;
  const auto pmf1 = binomial_pmf(m, double(l) / n);
  CHECK(std::fabs(std::accumulate(pmf1.begin(), pmf1.end(), 0.0) - 1.0) < 1e-10);
  for (int g = 0; g <= m; ++g) {
    const auto pmf2 = binomial_pmf(g, double(l - 1) / (n - 1));
    CHECK(std::fabs(std::accumulate(pmf2.begin(), pmf2.end(), 0.0) - 1.0) < 1e-10);
    for (int k = 0; k <= g; ++k) {
      const auto pmf3 = binomial_pmf(m - k, double(l) / (n - 1));
      CHECK(std::fabs(std::accumulate(pmf3.begin(), pmf3.end(), 0.0) - 1.0) < 1e-10);
    }
  }
  // grouped-family overlap weights at the flagship size
  const auto w = overlap_pmf_proposed(128, 64, 8);
  CHECK(std::fabs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) < 1e-12);
}

TEST_CASE("overlap weights reduce to the plain binomial") {
  for (int n : {4, 6, 16, 128}) {
    for (int l = 1; l <= n; ++l) {
      if (n % l != 0) continue;
      for (int m : {n / l, 2 * (n / l), 64}) {
        if (m % (n / l) != 0 || m > 128) continue;
        const int g = m * l / n;
        const auto w = overlap_pmf_proposed(n, m, l);
        const auto reference = binomial_pmf(g, n > 1 ? double(l - 1) / (n - 1) : 0.0);
        REQUIRE(w.size() == reference.size());
        for (std::size_t k = 0; k < w.size(); ++k) {
          CHECK(std::fabs(w[k] - reference[k]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("p_tilde_proposed") {
  SUBCASE("L = N collapses to a coin flip") {
    CHECK(p_tilde_proposed(8, 8, 8, 0.2) == 0.5);
  }
  SUBCASE("L = 1 has zero overlap") {
    // admissible: N/L = N must divide M
    const double direct = pairwise_win_prob({2, 2, 0, 1, 0.3});
    CHECK(p_tilde_proposed(4, 8, 1, 0.3) == doctest::Approx(direct).epsilon(1e-14));
  }
  SUBCASE("matches the end-to-end oracle at (6,6,2)") {
    const auto oracle = pairwise_oracle(6, 6, 2, 0.1, true, 100000, 60601);
    const double closed = p_tilde_proposed(6, 6, 2, 0.1);
    CHECK(std::fabs(closed - oracle.mean) <= 3.0 * oracle.se);
  }
  SUBCASE("divisibility required") {
    CHECK_THROWS_AS(p_tilde_proposed(8, 6, 2, 0.1), std::invalid_argument);
  }
}

TEST_CASE("p_tilde_existing") {
  SUBCASE("L = N collapses to a coin flip") {
    CHECK(p_tilde_existing(8, 6, 8, 0.2) == 0.5);
  }
  SUBCASE("against the end-to-end oracle at (8,6,2)") {
    // The closed form carries a documented approximation: its competitor
    // count conditions on k instead of g_star. Assert agreement within the
    // oracle noise plus that measured gap, and assert the exact-coupling
    // variant agrees with the oracle directly.
    const auto oracle = pairwise_oracle(8, 6, 2, 0.05, false, 100000, 80602);
    const double closed = p_tilde_existing(8, 6, 2, 0.05);
    const double exact = p_tilde_existing_exact_coupling(8, 6, 2, 0.05);
    CHECK(std::fabs(exact - oracle.mean) <= 3.0 * oracle.se);
    const double approximation_gap = std::fabs(closed - exact);
    MESSAGE("closed=", closed, " exact=", exact, " oracle=", oracle.mean,
            " approximation_gap=", approximation_gap);
    CHECK(std::fabs(closed - oracle.mean) <= 3.0 * oracle.se + approximation_gap);
  }
}

TEST_CASE("p_tilde properties") {
  SUBCASE("proposed family stays in [1/2, 1]") {
    for (int l : admissible_l_values(16, 8, Family::Proposed)) {
      for (double sigma2 : {0.0, 1e-4, 1e-2, 1.0, 100.0}) {
        const double p = p_tilde_proposed(16, 8, l, sigma2);
        CHECK(p >= 0.5);
        CHECK(p <= 1.0);
      }
    }
  }
  SUBCASE("monotone in the noise variance") {
    for (int l : {2, 4, 8}) {
      double prev_p = p_tilde_proposed(16, 8, l, 1e-6);
      double prev_e = p_tilde_existing(16, 8, l, 1e-6);
      for (double sigma2 : {1e-4, 1e-2, 1.0, 100.0}) {
        const double p = p_tilde_proposed(16, 8, l, sigma2);
        const double e = p_tilde_existing(16, 8, l, sigma2);
        CHECK(p <= prev_p + 1e-12);
        CHECK(e <= prev_e + 1e-12);
        prev_p = p;
        prev_e = e;
      }
    }
  }
}

TEST_CASE("optimize_l") {
  SUBCASE("admissible L enumeration") {
    CHECK(admissible_l_values(128, 64, Family::Proposed) ==
          std::vector<int>{2, 4, 8, 16, 32, 64, 128});
    CHECK(admissible_l_values(4, 4, Family::Existing) == std::vector<int>{1, 2, 3, 4});
    CHECK(admissible_l_values(4, 8, Family::Proposed) == std::vector<int>{1, 2, 4});
  }
  SUBCASE("operating point at 10 dB lands on a moderate L") {
    const double sigma2 = sigma2_from_snr_db(10.0, 128);
    const MetricReport report = optimize_l(128, 64, sigma2, Family::Proposed);
    CHECK(report.l_star == 8);
    // near-noiseless: the curve is essentially 1 for small L
    const MetricReport quiet = optimize_l(128, 64, 1e-10, Family::Proposed);
    for (std::size_t i = 0; i < quiet.l_values.size(); ++i) {
      if (quiet.l_values[i] <= 16) CHECK(quiet.p_tilde[i] > 0.99);
    }
  }
  SUBCASE("pure function: identical reports on repeated calls") {
    const MetricReport a = optimize_l(16, 8, 0.01, Family::Existing);
    const MetricReport b = optimize_l(16, 8, 0.01, Family::Existing);
    CHECK(a.l_values == b.l_values);
    CHECK(a.p_tilde == b.p_tilde);
    CHECK(a.l_star == b.l_star);
  }
}

TEST_CASE("symmetric square root") {
  // random SPD matrix via R R^T + eps I
  Rng rng(333);
  const int n = 8;
  std::vector<double> r(n * n);
  for (auto& v : r) v = rng.gaussian();
  std::vector<double> a(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += r[i * n + k] * r[j * n + k];
      a[i * n + j] = acc + (i == j ? 0.1 : 0.0);
    }
  }
  const auto b = symmetric_sqrt(a, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += b[i * n + k] * b[k * n + j];
      CHECK(std::fabs(acc - a[i * n + j]) < 1e-9);
      CHECK(std::fabs(b[i * n + j] - b[j * n + i]) < 1e-12);
    }
  }

  std::vector<double> values, vectors;
  symmetric_eigen({2.0, 0.0, 0.0, 3.0}, 2, values, vectors);
  CHECK(((values[0] == doctest::Approx(2.0) && values[1] == doctest::Approx(3.0)) ||
         (values[0] == doctest::Approx(3.0) && values[1] == doctest::Approx(2.0))));
}

TEST_CASE("gaussian region construction") {
  const HashCodebook cb = gen_proposed_random(8, 4, 2, 13);
  const CodebookStats st = stats(cb);
  const int n_star = 3;
  const GaussianRegion region = build_gaussian_region(cb, n_star, 1e-8);
  CHECK(region.n_rows == 7);
  CHECK(region.m_cols == 4);
  int r = 0;
  for (int n = 0; n < 8; ++n) {
    if (n == n_star - 1) continue;
    for (int m = 0; m < 4; ++m) {
      const double expect = double(cb.bit(m, n)) - double(cb.bit(m, n_star - 1));
      CHECK(region.a[r * 4 + m] == expect);
    }
    const double t_expect =
        double(st.overlap(n_star - 1, n_star - 1) - st.overlap(n_star - 1, n)) / 2.0;
    CHECK(region.t[r] == doctest::Approx(t_expect));
    ++r;
  }
}

TEST_CASE("success_probability") {
  SUBCASE("noiseless sweep is certain") {
    const double p = success_probability(gen_sweeping(16), 5, 1e-12, SuccessMethod::NoiseMc,
                                         20000, 7);
    CHECK(p == 1.0);
  }

  SUBCASE("the two methods agree on a clean codebook") {
    // seed 1 picked so no competitor column duplicates the n_star column
    // (duplicated columns tie forever and the orthant region cannot see
    // the decoder's index-order tie-break).
    const HashCodebook cb = gen_existing_random(16, 8, 2, 1);
    const double a = success_probability(cb, 8, 0.1, SuccessMethod::NoiseMc, 100000, 5, {}, 2);
    const double b =
        success_probability(cb, 8, 0.1, SuccessMethod::GaussianRegionMc, 100000, 9, {}, 2);
    const double se = std::sqrt(a * (1 - a) / 1e5 + b * (1 - b) / 1e5);
    CHECK(std::fabs(a - b) <= 3.0 * se);
  }

  SUBCASE("matches a fixed-beam campaign") {
    const HashCodebook cb = gen_proposed_random(16, 8, 4, 3);
    const ArrayConfig cfg(16);
    const double sigma2 = 0.02;
    const double theory =
        success_probability(cb, 11, sigma2, SuccessMethod::NoiseMc, 40000, 21, {}, 2);
    const double sim =
        run_campaign(cb, on_grid_los_sampler_fixed(cfg, 11), sigma2, 40000, 22, 2);
    const double se =
        std::sqrt(theory * (1 - theory) / 4e4 + sim * (1 - sim) / 4e4);
    CHECK(std::fabs(theory - sim) <= 3.0 * se);
  }

  SUBCASE("invariant under consistent beam relabeling") {
    const HashCodebook cb = gen_existing_random(8, 6, 2, 9);
    // rotate all columns by 3
    HashCodebook rotated = cb;
    rotated.bits.assign(rotated.bits.size(), 0);
    for (int r = 0; r < cb.rows; ++r) {
      for (int c = 0; c < cb.cols; ++c) {
        if (cb.bit(r, c)) rotated.set_bit(r, (c + 3) % 8, true);
      }
    }
    const int n_star = 2;
    const double a = success_probability(cb, n_star, 0.05, SuccessMethod::NoiseMc, 30000, 77);
    const double b = success_probability(rotated, (n_star - 1 + 3) % 8 + 1, 0.05,
                                         SuccessMethod::NoiseMc, 30000, 77);
    CHECK(a == b);
  }

  SUBCASE("threads do not change the estimate") {
    const HashCodebook cb = gen_proposed_random(16, 8, 2, 4);
    const double a = success_probability(cb, 5, 0.05, SuccessMethod::NoiseMc, 20000, 3, {}, 1);
    const double b = success_probability(cb, 5, 0.05, SuccessMethod::NoiseMc, 20000, 3, {}, 4);
    CHECK(a == b);
  }

  SUBCASE("validation") {
    const HashCodebook cb = gen_sweeping(8);
    CHECK_THROWS_AS(success_probability(cb, 0, 0.1, SuccessMethod::NoiseMc, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(success_probability(cb, 9, 0.1, SuccessMethod::NoiseMc, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(success_probability(cb, 1, -0.1, SuccessMethod::NoiseMc, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(success_probability(cb, 1, 0.1, SuccessMethod::NoiseMc, 0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("empirical overlap of the grouped generator matches its pmf with random competitors") {
  // uniformly random competitor per draw, as the metric defines it
  Rng rng(515);
  const int samples = 100000;
  std::vector<int> hist(3, 0);
  for (int s = 0; s < samples; ++s) {
    const HashCodebook cb = gen_proposed_random(6, 6, 2, rng.next_u64());
    const int competitor = 1 + static_cast<int>(rng.below(5));
    int k = 0;
    for (int r = 0; r < 6; ++r) k += cb.bit(r, 0) && cb.bit(r, competitor);
    ++hist[k];
  }
  const auto pmf = overlap_pmf_proposed(6, 6, 2);
  for (int k = 0; k <= 2; ++k) {
    const double expect = pmf[k] * samples;
    const double se = std::sqrt(samples * pmf[k] * (1.0 - pmf[k]));
    CHECK(std::fabs(hist[k] - expect) <= 3.0 * se);
  }
}
