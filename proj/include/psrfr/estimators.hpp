#pragma once

#include "psrfr/types.hpp"

namespace psrfr {

/// Intermediate state of the square-response forward regression: the solved
/// rows Z_j' = (S_n^-1 Y_j (X_j - mean))' and their second-moment kernel
/// Z_hat = n^-1 sum Z_j Z_j' (symmetric PSD).
struct PsrfrKernel {
  Matrix z_rows;  // n x p
  Matrix z_hat;   // p x p
};

/// Computes the PSRFR kernel without choosing a dimension. Requires n > p
/// and a finite response of length n.
PsrfrKernel psrfr_kernel(const DataMatrix& data, const Vector& response);

/// Principal square response forward regression: the first k eigenvectors of
/// the PSRFR kernel under the library-wide descending/sign conventions.
/// Fails with DegenerateSpectrum when the kernel vanishes (e.g. a response
/// that is identically zero), IllConditioned/NotPositiveDefinite from the
/// covariance solve, InsufficientRows when n <= p.
SubspaceEstimate psrfr_fit(const DataMatrix& data, const Vector& response,
                           Index k);

/// Single-direction OLS moment estimate: normalized S_n^-1 (n^-1 sum Y_j
/// (X_j - mean)). eigenvalues = (squared norm of the unnormalized direction,
/// 0, ...). DegenerateSpectrum when the moment vector norm is below 1e-12.
SubspaceEstimate ols_direction(const DataMatrix& data, const Vector& response);

/// Response-based principal Hessian directions: eigenvectors of the
/// symmetrized S_n^-1 Cov_n[(Y - mean Y)(X - mean)(X - mean)'] S_n^-1 ranked
/// by absolute eigenvalue; eigenvalues are reported as |lambda| descending.
SubspaceEstimate phd_fit(const DataMatrix& data, const Vector& response,
                         Index k);

/// Sliced inverse regression with near-equal-frequency slices of the sorted
/// response (stable sort by response then original index; the remainder
/// spreads over the first slices). Requires n >= 2 * slices.
SubspaceEstimate sir_fit(const DataMatrix& data, const Vector& response,
                         Index k, Index slices);

/// Sliced average variance estimation over the same slicing as sir_fit:
/// kernel sum_h (n_h/n) (I - V_h)^2 with V_h the within-slice covariance of
/// the standardized data.
SubspaceEstimate save_fit(const DataMatrix& data, const Vector& response,
                          Index k, Index slices);

}  // namespace psrfr
