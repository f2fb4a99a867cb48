#include "psrfr/numerics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <vector>

namespace psrfr {

Centered center_and_covariance(const DataMatrix& data) {
  const Matrix& x = data.values;
  const Index n = x.rows();
  Centered out;
  out.n = n;
  out.mean = x.colwise().mean();
  out.centered = x.rowwise() - out.mean.transpose();
  out.covariance =
      (out.centered.transpose() * out.centered) / static_cast<double>(n - 1);
  return out;
}

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> spd_spectrum(const Matrix& a) {
  if (a.rows() != a.cols())
    fail(ErrorCode::ShapeMismatch, "solve_spd: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      Matrix(a.selfadjointView<Eigen::Lower>()));
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::NotPositiveDefinite, "eigendecomposition failed");
  double lambda_min = eig.eigenvalues()(0);
  double lambda_max = eig.eigenvalues()(a.rows() - 1);
  if (!(lambda_min > 0.0))
    fail(ErrorCode::NotPositiveDefinite, "nonpositive eigenvalue");
  if (lambda_min / lambda_max < 1e-12)
    fail(ErrorCode::IllConditioned, "rcond below 1e-12");
  return eig;
}

}  // namespace

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    fail(ErrorCode::ShapeMismatch, "solve_spd: rhs rows mismatch");
  auto eig = spd_spectrum(a);
  Matrix projected = eig.eigenvectors().transpose() * b;
  projected.array().colwise() /= eig.eigenvalues().array();
  return eig.eigenvectors() * projected;
}

Vector solve_spd(const Matrix& a, const Vector& b) {
  return Vector(solve_spd(a, Matrix(b)));
}

void fix_column_signs(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      double mag = std::abs(columns(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (columns(arg, j) < 0.0) columns.col(j) = -columns.col(j);
  }
}

EigenPairs sym_eig_desc(const Matrix& a) {
  if (a.rows() != a.cols())
    fail(ErrorCode::ShapeMismatch, "sym_eig_desc: matrix must be square");
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    fail(ErrorCode::NotSymmetric, "asymmetry exceeds tolerance");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      Matrix(0.5 * (a + a.transpose())));
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::NotPositiveDefinite, "eigendecomposition failed");

  const Index p = a.rows();
  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), Index{0});
  // Stable, so tied eigenvalues keep the solver's output order.
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return eig.eigenvalues()(i) > eig.eigenvalues()(j);
  });

  EigenPairs out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  for (Index j = 0; j < p; ++j) {
    out.values(j) = eig.eigenvalues()(order[j]);
    out.vectors.col(j) = eig.eigenvectors().col(order[j]);
  }
  fix_column_signs(out.vectors);
  return out;
}

Matrix gram_schmidt(const Matrix& basis) {
  if (basis.cols() < 1)
    fail(ErrorCode::ShapeMismatch, "gram_schmidt: need at least one column");
  Matrix q = basis;
  for (Index j = 0; j < q.cols(); ++j) {
    // Two projection sweeps; twice is enough for working-precision
    // orthogonality.
    for (int sweep = 0; sweep < 2; ++sweep)
      for (Index i = 0; i < j; ++i)
        q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    double pivot = q.col(j).norm();
    if (pivot < 1e-10)
      fail(ErrorCode::RankDeficient, "pivot norm below 1e-10");
    q.col(j) /= pivot;
  }
  return q;
}

}  // namespace psrfr
