// SPDX-License-Identifier: Apache-2.0
//
// Small dense symmetric-matrix helpers used by the Gaussian region sampler.
// Matrices are row-major n x n in flat vectors.

#pragma once

#include <vector>

namespace hashbeam {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. On return,
/// `values[i]` is the i-th eigenvalue and column i of `vectors` the matching
/// eigenvector, so A = V diag(values) V^T.
void symmetric_eigen(std::vector<double> matrix, int n, std::vector<double>& values,
                     std::vector<double>& vectors);

/// Symmetric positive semidefinite square root: returns B with B*B = A.
/// Eigenvalues are clamped at zero, so slightly indefinite inputs (from
/// roundoff) are projected onto the PSD cone.
std::vector<double> symmetric_sqrt(const std::vector<double>& matrix, int n);

}  // namespace hashbeam
