#include "psrfr/metrics.hpp"

#include <cmath>

#include "psrfr/numerics.hpp"

namespace psrfr {

double trace_correlation(const Matrix& truth, const Matrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    fail(ErrorCode::ShapeMismatch,
         "trace_correlation: truth and estimate must share their shape");
  Matrix ortho = gram_schmidt(estimate);
  return (truth.transpose() * ortho).squaredNorm() /
         static_cast<double>(truth.cols());
}

std::pair<double, double> direction_cosines(const Matrix& truth,
                                            const Matrix& estimate) {
  if (truth.cols() != 2 || estimate.cols() != 2 ||
      truth.rows() != estimate.rows())
    fail(ErrorCode::ShapeMismatch, "direction_cosines: need p x 2 bases");
  auto closest = [&](Index j) {
    Vector dir = estimate.col(j) / estimate.col(j).norm();
    return std::max(std::abs(dir.dot(truth.col(0))),
                    std::abs(dir.dot(truth.col(1))));
  };
  return {closest(0), closest(1)};
}

}  // namespace psrfr
