#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "psrfr/errors.hpp"

namespace psrfr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Observations-by-variables data matrix. Rows are observations.
/// Invariants: every entry finite, n >= 2, p >= 1.
struct DataMatrix {
  Matrix values;

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }

  /// Validates invariants; non-finite entries are a caller bug, not a
  /// recoverable domain failure, hence std::invalid_argument.
  static DataMatrix from(Matrix m) {
    if (m.rows() < 2) fail(ErrorCode::InsufficientRows, "need n >= 2 rows");
    if (m.cols() < 1) fail(ErrorCode::ShapeMismatch, "need p >= 1 columns");
    if (!m.allFinite())
      throw std::invalid_argument("DataMatrix: non-finite entry");
    return DataMatrix{std::move(m)};
  }
};

/// Column means plus (n-1)-divisor sample covariance of a data matrix.
struct CenteredStats {
  Vector mean;        // length p
  Matrix covariance;  // p x p, symmetric PSD
  Index n = 0;
};

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
/// Vectors follow the column sign convention: the entry of largest absolute
/// value in each column is positive (ties broken by lowest index).
struct EigenPairs {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, aligned with values
};

/// Output of a dimension-reduction fit: an orthonormal p x k basis plus the
/// full spectrum of the method's kernel matrix (descending; PHD reports
/// absolute values).
struct SubspaceEstimate {
  Matrix basis;        // p x k, orthonormal columns
  Vector eigenvalues;  // length p
  std::string method;  // stable id: psrfr | ols | phd | sir | save
  int k = 0;
};

/// Scores of an estimated basis against the true one. Cosines are present
/// only when both bases have exactly two columns.
struct SubspaceScore {
  double trace_correlation = 0.0;
  std::optional<double> cos1;
  std::optional<double> cos2;
};

}  // namespace psrfr
