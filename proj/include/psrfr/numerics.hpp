#pragma once

#include "psrfr/types.hpp"

namespace psrfr {

/// Centering output; covariance always uses the (n-1) divisor.
struct Centered {
  Vector mean;        // length p
  Matrix centered;    // n x p, column means are zero
  Matrix covariance;  // p x p symmetric PSD
  Index n = 0;
};

/// Column means, centered data and sample covariance in one pass.
Centered center_and_covariance(const DataMatrix& data);

/// Solves a * x = b for symmetric positive definite a without forming the
/// inverse. Fails with NotPositiveDefinite when the spectrum is not strictly
/// positive and with IllConditioned when rcond = lambda_min / lambda_max
/// drops below 1e-12. Only the lower triangle of a is referenced.
Matrix solve_spd(const Matrix& a, const Matrix& b);
Vector solve_spd(const Matrix& a, const Vector& b);

/// Flips eigenvector-style columns so the entry of largest absolute value in
/// each column is positive; ties broken by the lowest row index.
void fix_column_signs(Matrix& columns);

/// Symmetric eigendecomposition with eigenvalues sorted descending, tied
/// eigenvalues keeping solver order, and columns sign-fixed per
/// fix_column_signs. Rejects input whose asymmetry exceeds
/// 1e-10 * max(1, max|a_ij|) with NotSymmetric.
EigenPairs sym_eig_desc(const Matrix& a);

/// Modified Gram-Schmidt orthonormalization of the columns (with one
/// re-orthogonalization pass). A pivot norm below 1e-10 raises RankDeficient.
Matrix gram_schmidt(const Matrix& basis);

}  // namespace psrfr
