#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "psrfr/numerics.hpp"
#include "psrfr/rng.hpp"
#include "psrfr/types.hpp"

namespace testsupport {

using psrfr::Index;
using psrfr::Matrix;
using psrfr::Vector;

inline Matrix random_matrix(psrfr::RandomStream& s, Index rows, Index cols,
                            double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * s.normal();
  return m;
}

inline Matrix random_spd(psrfr::RandomStream& s, Index p, double ridge = 0.5) {
  Matrix a = random_matrix(s, p, p);
  return Matrix(a * a.transpose() + ridge * Matrix::Identity(p, p));
}

inline Matrix random_orthogonal(psrfr::RandomStream& s, Index p) {
  return psrfr::gram_schmidt(random_matrix(s, p, p));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace testsupport
