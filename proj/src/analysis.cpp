// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "hashbeam/linalg.hpp"
#include "hashbeam/rng.hpp"
#include "hashbeam/trainer.hpp"

namespace hashbeam {

namespace {

constexpr std::uint64_t kStreamTrial = 0x747269616cULL;  // "trial"

void check_metric_params(int n_beams, int m_rows, int l, double sigma2) {
  if (n_beams < 2) throw std::invalid_argument("metric needs n_beams >= 2");
  if (m_rows < 1) throw std::invalid_argument("metric needs m_rows >= 1");
  if (l < 1 || l > n_beams) throw std::invalid_argument("metric needs 1 <= l <= n_beams");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and >= 0");
  }
}

}  // namespace

double pairwise_win_prob(const PairwiseContext& ctx) {
  if (ctx.g_star < 0 || ctx.g_prime < 0 || ctx.k < 0 ||
      ctx.k > std::min(ctx.g_star, ctx.g_prime)) {
    throw std::invalid_argument("pairwise context needs 0 <= k <= min(g_star, g_prime)");
  }
  if (ctx.l < 1) throw std::invalid_argument("pairwise context needs l >= 1");
  if (!(ctx.sigma2 >= 0.0) || !std::isfinite(ctx.sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and >= 0");
  }
  const double mean = static_cast<double>(ctx.g_star - ctx.k) / ctx.l;
  const double variance = static_cast<double>(ctx.g_star + ctx.g_prime - 2 * ctx.k) * ctx.sigma2;
  if (variance == 0.0) {
    if (mean > 0.0) return 1.0;
    if (mean < 0.0) return 0.0;
    return 0.5;
  }
  // P{N(mean, var) > 0} = Phi(mean / sd). Evaluated as erfc of the negated
  // argument so deep tails keep full relative accuracy; glibc's erfc is a
  // rational/continued-fraction implementation accurate to ~1 ulp, far below
  // the 1e-12 absolute error this module needs.
  return 0.5 * std::erfc(-mean / std::sqrt(2.0 * variance));
}

std::vector<double> binomial_pmf(int n, double p) {
  if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
  if (!std::isfinite(p)) throw std::invalid_argument("binomial_pmf: p must be finite");
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (n == 0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double lg_n = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    const double log_coeff = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    pmf[k] = std::exp(log_coeff + k * log_p + (n - k) * log_q);
  }
  return pmf;
}

std::vector<double> overlap_pmf_proposed(int n_beams, int m_rows, int l) {
  check_metric_params(n_beams, m_rows, l, 0.0);
  if (n_beams % l != 0 || m_rows % (n_beams / l) != 0) {
    throw std::invalid_argument("overlap pmf requires l | n_beams and (n_beams/l) | m_rows");
  }
  const long long g = static_cast<long long>(m_rows) * l / n_beams;
  // Zero under the divisibility preconditions; kept so the two correction
  // factors are computed rather than assumed away.
  const long long ml_minus_ng = static_cast<long long>(m_rows) * l - n_beams * g;
  const double factor = (1.0 - static_cast<double>(ml_minus_ng) / n_beams) *
                        (1.0 - static_cast<double>(ml_minus_ng) / (n_beams - 1));
  std::vector<double> pmf =
      binomial_pmf(static_cast<int>(g), static_cast<double>(l - 1) / (n_beams - 1));
  for (auto& w : pmf) w *= factor;
  return pmf;
}

double p_tilde_existing(int n_beams, int m_rows, int l, double sigma2) {
  check_metric_params(n_beams, m_rows, l, sigma2);
  const auto pmf_g_star = binomial_pmf(m_rows, static_cast<double>(l) / n_beams);
  const double p_overlap = static_cast<double>(l - 1) / (n_beams - 1);
  const double p_other = static_cast<double>(l) / (n_beams - 1);

  // The third factor depends on k alone; cache it across the g_star loop.
  std::vector<std::vector<double>> pmf_g_prime(static_cast<std::size_t>(m_rows) + 1);
  double total = 0.0;
  for (int g_star = 0; g_star <= m_rows; ++g_star) {
    const double w1 = pmf_g_star[g_star];
    if (w1 == 0.0) continue;
    const auto pmf_k = binomial_pmf(g_star, p_overlap);
    for (int k = 0; k <= g_star; ++k) {
      const double w12 = w1 * pmf_k[k];
      if (w12 == 0.0) continue;
      if (pmf_g_prime[k].empty()) pmf_g_prime[k] = binomial_pmf(m_rows - k, p_other);
      const auto& pmf3 = pmf_g_prime[k];
      for (int g_prime = k; g_prime <= m_rows; ++g_prime) {
        const double w3 = pmf3[g_prime - k];
        if (w3 == 0.0) continue;
        total += w12 * w3 * pairwise_win_prob({g_star, g_prime, k, l, sigma2});
      }
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double p_tilde_proposed(int n_beams, int m_rows, int l, double sigma2) {
  check_metric_params(n_beams, m_rows, l, sigma2);
  const auto weights = overlap_pmf_proposed(n_beams, m_rows, l);
  const int g = m_rows * l / n_beams;
  double total = 0.0;
  for (int k = 0; k <= g; ++k) {
    if (weights[k] == 0.0) continue;
    total += weights[k] * pairwise_win_prob({g, g, k, l, sigma2});
  }
  return std::clamp(total, 0.0, 1.0);
}

std::vector<int> admissible_l_values(int n_beams, int m_rows, Family family) {
  if (n_beams < 2 || m_rows < 1) {
    throw std::invalid_argument("admissible_l_values needs n_beams >= 2 and m_rows >= 1");
  }
  std::vector<int> values;
  for (int l = 1; l <= n_beams; ++l) {
    if (family == Family::Existing) {
      values.push_back(l);
    } else if (n_beams % l == 0 && m_rows % (n_beams / l) == 0) {
      values.push_back(l);
    }
  }
  return values;
}

MetricReport optimize_l(int n_beams, int m_rows, double sigma2, Family family) {
  MetricReport report;
  report.family = family;
  report.sigma2 = sigma2;
  report.l_values = admissible_l_values(n_beams, m_rows, family);
  report.p_tilde.reserve(report.l_values.size());
  for (int l : report.l_values) {
    report.p_tilde.push_back(family == Family::Existing
                                 ? p_tilde_existing(n_beams, m_rows, l, sigma2)
                                 : p_tilde_proposed(n_beams, m_rows, l, sigma2));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < report.p_tilde.size(); ++i) {
    if (report.p_tilde[i] > report.p_tilde[best]) best = i;
  }
  report.l_star = report.l_values.empty() ? 0 : report.l_values[best];
  return report;
}

GaussianRegion build_gaussian_region(const HashCodebook& cb, int n_star, double lambda) {
  validate(cb);
  if (n_star < 1 || n_star > cb.cols) {
    throw std::invalid_argument("n_star out of range [1, " + std::to_string(cb.cols) + "]");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0");
  }
  const int star0 = n_star - 1;
  const CodebookStats st = stats(cb);

  GaussianRegion region;
  region.n_rows = cb.cols - 1;
  region.m_cols = cb.rows;
  region.lambda = lambda;
  region.a.assign(static_cast<std::size_t>(region.n_rows) * region.m_cols, 0.0);
  region.t.resize(region.n_rows);
  int r = 0;
  for (int n = 0; n < cb.cols; ++n) {
    if (n == star0) continue;
    for (int m = 0; m < cb.rows; ++m) {
      region.a[static_cast<std::size_t>(r) * region.m_cols + m] =
          static_cast<double>(cb.bit(m, n)) - static_cast<double>(cb.bit(m, star0));
    }
    region.t[r] = static_cast<double>(st.overlap(star0, star0) - st.overlap(star0, n)) /
                  cb.l_per_row;
    ++r;
  }
  return region;
}

namespace {

double success_probability_noise_mc(const HashCodebook& cb, int star0, double sigma2,
                                    std::int64_t trials, std::uint64_t seed, int threads) {
  const CodebookStats st = stats(cb);
  // On the grid, the noiseless vote of beam n is K_{n_star,n}/L (the true
  // beam's own vote is G_{n_star}/L since K_{a,a} = G_a).
  std::vector<double> base(cb.cols);
  for (int n = 0; n < cb.cols; ++n) {
    base[n] = static_cast<double>(st.overlap(star0, n)) / cb.l_per_row;
  }
  const detail::SparseRows rows = detail::sparse_rows(cb);
  const double sigma = std::sqrt(sigma2);

  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), trials));
  std::vector<std::int64_t> hits(workers, 0);
  auto work = [&](int w) {
    std::vector<double> votes(cb.cols);
    std::vector<double> noise(cb.rows);
    for (std::int64_t t = w; t < trials; t += workers) {
      Rng rng = Rng::derived(seed, {kStreamTrial, static_cast<std::uint64_t>(t)});
      for (auto& z : noise) z = sigma * rng.gaussian();
      votes = base;
      for (int m = 0; m < cb.rows; ++m) {
        const std::int32_t* members = &rows.members[static_cast<std::size_t>(m) * rows.l];
        for (int j = 0; j < rows.l; ++j) votes[members[j]] += noise[m];
      }
      int best = 0;
      for (int n = 1; n < cb.cols; ++n) {
        if (votes[n] > votes[best]) best = n;
      }
      hits[w] += (best == star0);
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
  return static_cast<double>(total) / static_cast<double>(trials);
}

double success_probability_region_mc(const HashCodebook& cb, int star0, double sigma2,
                                     std::int64_t trials, std::uint64_t seed, double lambda,
                                     int threads) {
  const GaussianRegion region = build_gaussian_region(cb, star0 + 1, lambda);
  const int dim = region.n_rows;

  // Covariance sigma2 * A A^T + lambda I and its symmetric square root.
  std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      double acc = 0.0;
      const double* ai = &region.a[static_cast<std::size_t>(i) * region.m_cols];
      const double* aj = &region.a[static_cast<std::size_t>(j) * region.m_cols];
      for (int m = 0; m < region.m_cols; ++m) acc += ai[m] * aj[m];
      acc *= sigma2;
      if (i == j) acc += lambda;
      cov[static_cast<std::size_t>(i) * dim + j] = acc;
      cov[static_cast<std::size_t>(j) * dim + i] = acc;
    }
  }
  const std::vector<double> root = symmetric_sqrt(cov, dim);

  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), trials));
  std::vector<std::int64_t> hits(workers, 0);
  auto work = [&](int w) {
    std::vector<double> z(dim);
    for (std::int64_t t = w; t < trials; t += workers) {
      Rng rng = Rng::derived(seed, {kStreamTrial, static_cast<std::uint64_t>(t)});
      for (auto& v : z) v = rng.gaussian();
      bool inside = true;
      for (int i = 0; i < dim && inside; ++i) {
        const double* row = &root[static_cast<std::size_t>(i) * dim];
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) acc += row[j] * z[j];
        inside = acc < region.t[i];
      }
      hits[w] += inside;
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
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace

double success_probability(const HashCodebook& cb, int n_star, double sigma2,
                           SuccessMethod method, std::int64_t trials, std::uint64_t seed,
                           std::optional<double> lambda, int threads) {
  validate(cb);
  if (n_star < 1 || n_star > cb.cols) {
    throw std::invalid_argument("n_star out of range [1, " + std::to_string(cb.cols) + "]");
  }
  if (trials < 1) throw std::invalid_argument("success_probability needs trials >= 1");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("sigma2 must be finite and >= 0");
  }
  const int star0 = n_star - 1;
  switch (method) {
    case SuccessMethod::NoiseMc:
      return success_probability_noise_mc(cb, star0, sigma2, trials, seed, threads);
    case SuccessMethod::GaussianRegionMc: {
      const double reg = lambda.value_or(1e-6 * sigma2);
      if (!(reg >= 0.0) || !std::isfinite(reg)) {
        throw std::invalid_argument("lambda must be finite and >= 0");
      }
      return success_probability_region_mc(cb, star0, sigma2, trials, seed, reg, threads);
    }
  }
  throw std::invalid_argument("unknown success probability method");
}

}  // namespace hashbeam
