// SPDX-License-Identifier: Apache-2.0
//
// Closed-form performance machinery: the pairwise win probability of the
// true beam against one competitor, the heuristic alignment metric p_tilde
// for both random codebook families with the L optimizer, and Monte Carlo
// estimators of the full alignment success probability for a given codebook
// (exact noise simulation, plus the regularized Gaussian-region variant).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hashbeam/codebook.hpp"

namespace hashbeam {

/// Vote statistics of the (true beam, competitor) pair for a given codebook:
/// column counts g_star and g_prime, pair overlap k, selections per row l.
struct PairwiseContext {
  int g_star = 0;
  int g_prime = 0;
  int k = 0;
  int l = 1;
  double sigma2 = 0.0;
};

/// P{true beam's vote exceeds the competitor's}. The vote difference is
/// Gaussian with mean (g_star - k)/l and variance (g_star + g_prime - 2k) *
/// sigma2; with zero variance the convention is 1 / 0.5 / 0 for positive /
/// zero / negative mean to keep the sigma2 -> 0 limit well defined.
double pairwise_win_prob(const PairwiseContext& ctx);

/// Binomial(n, p) pmf as a dense vector of length n+1. Each weight is
/// assembled in log space (lgamma binomial coefficients, log1p powers) and
/// exponentiated per term, so large n does not overflow.
std::vector<double> binomial_pmf(int n, double p);

/// Pair-overlap pmf of the grouped random codebook, k = 0..G with G = M*L/N.
/// Under the divisibility preconditions the two correction factors are
/// exactly one and the weights reduce to Binomial(G, (L-1)/(N-1)).
std::vector<double> overlap_pmf_proposed(int n_beams, int m_rows, int l);

/// Heuristic metric for the independent-row random family: expectation of
/// the pairwise win probability over the joint law of (g_star, k, g_prime),
/// factored as Binomial(M, L/N) x Binomial(g_star, (L-1)/(N-1)) x
/// Binomial(M - k, L/(N-1)) shifted by k.
double p_tilde_existing(int n_beams, int m_rows, int l, double sigma2);

/// Heuristic metric for the grouped random family: single expectation over
/// the pair overlap with g_star = g_prime = G.
double p_tilde_proposed(int n_beams, int m_rows, int l, double sigma2);

enum class Family { Existing, Proposed };

/// L values the family admits: every 1..N for the independent-row family;
/// divisors of N whose group count N/L divides M for the grouped family.
std::vector<int> admissible_l_values(int n_beams, int m_rows, Family family);

struct MetricReport {
  Family family = Family::Proposed;
  double sigma2 = 0.0;
  std::vector<int> l_values;
  std::vector<double> p_tilde;
  int l_star = 0;  // smallest argmax of p_tilde
};

MetricReport optimize_l(int n_beams, int m_rows, double sigma2, Family family);

/// Linear constraint system of the alignment event for an on-grid channel at
/// beam n_star: rows are competitor beams, a[r][m] = c_{m,n} - c_{m,n_star},
/// t[r] = (G_{n_star} - K_{n_star,n}) / L. Alignment succeeds when the noise
/// image A z stays below t componentwise.
struct GaussianRegion {
  int n_rows = 0;  // N - 1 competitors
  int m_cols = 0;  // M training rounds
  std::vector<double> a;  // row-major (N-1) x M, entries in {-1, 0, 1}
  std::vector<double> t;
  double lambda = 0.0;
};

GaussianRegion build_gaussian_region(const HashCodebook& cb, int n_star, double lambda);

enum class SuccessMethod {
  NoiseMc,           // simulate the M noise draws and run the decoder; exact up to MC error
  GaussianRegionMc,  // sample N(0, sigma2*A*A^T + lambda*I) via its symmetric square root
};

/// P{decoder picks beam n_star} for an on-grid unit-gain LoS channel at
/// n_star (1-based). NoiseMc applies the decoder's smallest-index argmax rule
/// and needs no regularization; GaussianRegionMc reproduces the regularized
/// orthant approximation (lambda defaults to 1e-6 * sigma2).
double success_probability(const HashCodebook& cb, int n_star, double sigma2,
                           SuccessMethod method, std::int64_t trials, std::uint64_t seed,
                           std::optional<double> lambda = std::nullopt, int threads = 1);

}  // namespace hashbeam
