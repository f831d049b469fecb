// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hashbeam {

namespace {

double off_diagonal_norm2(const std::vector<double>& a, int n) {
  double sum = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double v = a[static_cast<std::size_t>(p) * n + q];
      sum += 2.0 * v * v;
    }
  }
  return sum;
}

}  // namespace

void symmetric_eigen(std::vector<double> a, int n, std::vector<double>& values,
                     std::vector<double>& vectors) {
  if (n < 1 || a.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("symmetric_eigen: matrix size does not match n");
  }
  vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vectors[static_cast<std::size_t>(i) * n + i] = 1.0;

  double frob2 = 0.0;
  for (double v : a) frob2 += v * v;
  const double stop = 1e-28 * (frob2 > 0.0 ? frob2 : 1.0);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm2(a, n) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[static_cast<std::size_t>(p) * n + q];
        if (apq == 0.0) continue;
        const double app = a[static_cast<std::size_t>(p) * n + p];
        const double aqq = a[static_cast<std::size_t>(q) * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J with the rotation in the (p, q) plane.
        for (int i = 0; i < n; ++i) {
          const double aip = a[static_cast<std::size_t>(i) * n + p];
          const double aiq = a[static_cast<std::size_t>(i) * n + q];
          a[static_cast<std::size_t>(i) * n + p] = c * aip - s * aiq;
          a[static_cast<std::size_t>(i) * n + q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[static_cast<std::size_t>(p) * n + i];
          const double aqi = a[static_cast<std::size_t>(q) * n + i];
          a[static_cast<std::size_t>(p) * n + i] = c * api - s * aqi;
          a[static_cast<std::size_t>(q) * n + i] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = vectors[static_cast<std::size_t>(i) * n + p];
          const double viq = vectors[static_cast<std::size_t>(i) * n + q];
          vectors[static_cast<std::size_t>(i) * n + p] = c * vip - s * viq;
          vectors[static_cast<std::size_t>(i) * n + q] = s * vip + c * viq;
        }
      }
    }
  }

  values.resize(n);
  for (int i = 0; i < n; ++i) values[i] = a[static_cast<std::size_t>(i) * n + i];
}

std::vector<double> symmetric_sqrt(const std::vector<double>& matrix, int n) {
  std::vector<double> values, vectors;
  symmetric_eigen(matrix, n, values, vectors);
  for (auto& v : values) v = std::sqrt(v > 0.0 ? v : 0.0);
  std::vector<double> result(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += vectors[static_cast<std::size_t>(i) * n + k] * values[k] *
               vectors[static_cast<std::size_t>(j) * n + k];
      }
      result[static_cast<std::size_t>(i) * n + j] = acc;
      result[static_cast<std::size_t>(j) * n + i] = acc;
    }
  }
  return result;
}

}  // namespace hashbeam
