#pragma once

#include <vector>

#include "secofdm/complex_matrix.hpp"

namespace secofdm {

// Thin SVD a = u * diag(sigma) * v^H with k = min(rows, cols) columns.
struct SvdResult {
  ComplexMatrix u;            // rows x k, orthonormal columns
  std::vector<double> sigma;  // k values, descending, >= 0
  ComplexMatrix v;            // cols x k, orthonormal columns
};

// One-sided Jacobi SVD. Rotations act on columns until all column pairs are
// orthogonal, so u/v orthonormality holds to near machine precision without a
// bidiagonalization step. Throws NumericalError (naming the dimensions) if the
// sweep limit is exceeded.
SvdResult svd(const ComplexMatrix& a, int max_sweeps = 60);

// Orthonormal basis of the (right) null space of a: columns x nullity matrix.
// The rank counts singular values > tol * sigma_max; everything else is null
// direction. A full-rank input yields a zero-column result.
ComplexMatrix null_space(const ComplexMatrix& a, double tol = 1e-10);

// Solves a * x = b for Hermitian positive definite a via Cholesky
// factorization (only the lower triangle of a is read). Throws NumericalError
// when a pivot is not strictly positive.
ComplexMatrix cholesky_solve(const ComplexMatrix& a, const ComplexMatrix& b);

// Orthonormal basis of the orthogonal complement of range(m), computed from a
// Householder QR of m. Requires m to have full column rank as judged by the
// R diagonal (> tol * max |R_jj|); throws NumericalError otherwise, since
// without pivoting the trailing Q columns would not span the complement.
ComplexMatrix range_complement(const ComplexMatrix& m, double tol = 1e-10);

}  // namespace secofdm
