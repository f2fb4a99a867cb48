#include "psrfr/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <vector>

#include "psrfr/numerics.hpp"

namespace psrfr {

namespace {

void check_response(const DataMatrix& data, const Vector& response) {
  if (response.size() != data.n())
    fail(ErrorCode::LengthMismatch, "response length must equal sample size");
  if (!response.allFinite())
    throw std::invalid_argument("response: non-finite entry");
}

void check_tall(const DataMatrix& data) {
  if (data.n() <= data.p())
    fail(ErrorCode::InsufficientRows, "need n > p observations");
}

void check_k(Index k, Index p) {
  if (k < 1 || k > p) fail(ErrorCode::ConfigInvalid, "need 1 <= k <= p");
}

// Zero kernel up to roundoff: for a PSD spectrum lambda_max >= trace / p, so
// a relative-to-trace gate can only fire when the matrix vanishes.
bool spectrum_vanishes(const Vector& descending_values) {
  double scale = std::max(descending_values.cwiseAbs().sum(), DBL_MIN);
  return descending_values.cwiseAbs().maxCoeff() < 1e-12 * scale;
}

/// Cholesky factor of the sample covariance with a cheap rcond gate; SIR and
/// SAVE standardize through this factor instead of inverting.
Matrix standardizing_factor(const Matrix& covariance) {
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::IllConditioned, "sample covariance is not factorizable");
  Matrix chol = llt.matrixL();
  double dmin = chol.diagonal().minCoeff();
  double dmax = chol.diagonal().maxCoeff();
  if (!(dmin > 0.0) || (dmin / dmax) * (dmin / dmax) < 1e-12)
    fail(ErrorCode::IllConditioned, "sample covariance rcond below 1e-12");
  return chol;
}

struct Slicing {
  std::vector<std::vector<Index>> groups;
};

// Near-equal-frequency slices of the response order. Ties are broken by the
// original index (stable sort), so the grouping is deterministic.
Slicing slice_by_response(const Vector& response, Index slices) {
  const Index n = response.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return response(a) < response(b); });
  Slicing out;
  out.groups.resize(slices);
  Index base = n / slices, remainder = n % slices, at = 0;
  for (Index h = 0; h < slices; ++h) {
    Index size = base + (h < remainder ? 1 : 0);
    out.groups[h].assign(order.begin() + at, order.begin() + at + size);
    at += size;
  }
  return out;
}

void check_sliced_inputs(const DataMatrix& data, const Vector& response,
                         Index k, Index slices) {
  check_response(data, response);
  check_k(k, data.p());
  if (slices < 1) fail(ErrorCode::ConfigInvalid, "need at least one slice");
  if (data.n() < 2 * slices)
    fail(ErrorCode::TooFewRows, "need n >= 2 * slices");
  if (response.maxCoeff() == response.minCoeff())
    fail(ErrorCode::DegenerateSpectrum,
         "constant response carries no slice information");
}

// Shared tail of sir_fit/save_fit: eigendecompose the standardized-scale
// kernel, back-transform the leading eigenvectors through the inverse factor
// transpose, re-orthonormalize.
SubspaceEstimate finish_sliced(const Matrix& kernel, const Matrix& chol,
                               Index k, const char* method) {
  auto eig = sym_eig_desc(kernel);
  Matrix eta = eig.vectors.leftCols(k);
  Matrix beta =
      chol.transpose().triangularView<Eigen::Upper>().solve(eta);
  SubspaceEstimate out;
  out.basis = gram_schmidt(beta);
  out.eigenvalues = eig.values;
  out.method = method;
  out.k = static_cast<int>(k);
  return out;
}

}  // namespace

PsrfrKernel psrfr_kernel(const DataMatrix& data, const Vector& response) {
  check_response(data, response);
  check_tall(data);
  auto stats = center_and_covariance(data);
  Matrix scaled = stats.centered.array().colwise() * response.array();
  PsrfrKernel kernel;
  kernel.z_rows = solve_spd(stats.covariance, Matrix(scaled.transpose()))
                      .transpose();
  kernel.z_hat = (kernel.z_rows.transpose() * kernel.z_rows) /
                 static_cast<double>(data.n());
  kernel.z_hat = 0.5 * (kernel.z_hat + kernel.z_hat.transpose()).eval();
  return kernel;
}

SubspaceEstimate psrfr_fit(const DataMatrix& data, const Vector& response,
                           Index k) {
  check_k(k, data.p());
  PsrfrKernel kernel = psrfr_kernel(data, response);
  auto eig = sym_eig_desc(kernel.z_hat);
  if (spectrum_vanishes(eig.values))
    fail(ErrorCode::DegenerateSpectrum, "square-response kernel vanishes");
  SubspaceEstimate out;
  out.basis = eig.vectors.leftCols(k);
  out.eigenvalues = eig.values;
  out.method = "psrfr";
  out.k = static_cast<int>(k);
  return out;
}

SubspaceEstimate ols_direction(const DataMatrix& data,
                               const Vector& response) {
  check_response(data, response);
  check_tall(data);
  auto stats = center_and_covariance(data);
  Vector moment =
      (stats.centered.transpose() * response) / static_cast<double>(data.n());
  if (moment.norm() < 1e-12)
    fail(ErrorCode::DegenerateSpectrum, "response-predictor moment vanishes");
  Vector direction = solve_spd(stats.covariance, moment);
  SubspaceEstimate out;
  out.eigenvalues = Vector::Zero(data.p());
  out.eigenvalues(0) = direction.squaredNorm();
  out.basis = direction / direction.norm();
  fix_column_signs(out.basis);
  out.method = "ols";
  out.k = 1;
  return out;
}

SubspaceEstimate phd_fit(const DataMatrix& data, const Vector& response,
                         Index k) {
  check_response(data, response);
  check_tall(data);
  check_k(k, data.p());
  auto stats = center_and_covariance(data);
  Vector centered_y = response.array() - response.mean();
  Matrix weighted = stats.centered.array().colwise() * centered_y.array();
  Matrix syxx = (stats.centered.transpose() * weighted) /
                static_cast<double>(data.n());
  // S^-1 syxx S^-1 through two solves; never form the inverse.
  Matrix half = solve_spd(stats.covariance, syxx);
  Matrix kernel =
      solve_spd(stats.covariance, Matrix(half.transpose())).transpose();
  kernel = 0.5 * (kernel + kernel.transpose()).eval();

  auto eig = sym_eig_desc(kernel);
  // Hessian eigenvalues are signed; rank by magnitude.
  std::vector<Index> order(data.p());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(eig.values(a)) > std::abs(eig.values(b));
  });
  SubspaceEstimate out;
  out.eigenvalues.resize(data.p());
  out.basis.resize(data.p(), k);
  for (Index j = 0; j < data.p(); ++j)
    out.eigenvalues(j) = std::abs(eig.values(order[j]));
  if (spectrum_vanishes(out.eigenvalues))
    fail(ErrorCode::DegenerateSpectrum, "hessian kernel vanishes");
  for (Index j = 0; j < k; ++j) out.basis.col(j) = eig.vectors.col(order[j]);
  out.method = "phd";
  out.k = static_cast<int>(k);
  return out;
}

SubspaceEstimate sir_fit(const DataMatrix& data, const Vector& response,
                         Index k, Index slices) {
  check_sliced_inputs(data, response, k, slices);
  auto stats = center_and_covariance(data);
  Matrix chol = standardizing_factor(stats.covariance);
  Matrix standardized =
      chol.triangularView<Eigen::Lower>()
          .solve(Matrix(stats.centered.transpose()))
          .transpose();

  Slicing slicing = slice_by_response(response, slices);
  const Index p = data.p();
  Matrix kernel = Matrix::Zero(p, p);
  for (const auto& group : slicing.groups) {
    Vector mean = Vector::Zero(p);
    for (Index row : group) mean += standardized.row(row).transpose();
    mean /= static_cast<double>(group.size());
    kernel += (static_cast<double>(group.size()) / data.n()) * mean *
              mean.transpose();
  }
  return finish_sliced(kernel, chol, k, "sir");
}

SubspaceEstimate save_fit(const DataMatrix& data, const Vector& response,
                          Index k, Index slices) {
  check_sliced_inputs(data, response, k, slices);
  auto stats = center_and_covariance(data);
  Matrix chol = standardizing_factor(stats.covariance);
  Matrix standardized =
      chol.triangularView<Eigen::Lower>()
          .solve(Matrix(stats.centered.transpose()))
          .transpose();

  Slicing slicing = slice_by_response(response, slices);
  const Index p = data.p();
  Matrix kernel = Matrix::Zero(p, p);
  Matrix eye = Matrix::Identity(p, p);
  for (const auto& group : slicing.groups) {
    const Index m = static_cast<Index>(group.size());
    Matrix rows(m, p);
    for (Index i = 0; i < m; ++i) rows.row(i) = standardized.row(group[i]);
    Vector mean = rows.colwise().mean();
    Matrix centered = rows.rowwise() - mean.transpose();
    Matrix within =
        (centered.transpose() * centered) / static_cast<double>(m - 1);
    Matrix gap = eye - within;
    kernel += (static_cast<double>(m) / data.n()) * gap * gap;
  }
  return finish_sliced(kernel, chol, k, "save");
}

}  // namespace psrfr
