#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "psrfr/types.hpp"

namespace testsupport {

// Independent re-computation of the square-response kernel, written with raw
// loops and a Gauss-Jordan inverse on plain vectors so it shares nothing
// with the library's Eigen-based path. Semantics: scale each centered row of
// x by its response, form (z' z / n), and sandwich it between explicit
// inverses of the (n-1)-divisor sample covariance.
inline psrfr::Matrix square_response_kernel_oracle(const psrfr::Matrix& x,
                                                   const psrfr::Vector& y) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const std::size_t p = static_cast<std::size_t>(x.cols());

  std::vector<double> mean(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += x(i, j);
    mean[j] /= static_cast<double>(n);
  }

  std::vector<std::vector<double>> z(n, std::vector<double>(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      z[i][j] = (x(i, j) - mean[j]) * y(static_cast<psrfr::Index>(i));

  std::vector<std::vector<double>> sigma(p, std::vector<double>(p, 0.0));
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
      sigma[a][b] = acc / static_cast<double>(n - 1);
    }

  // Gauss-Jordan with partial pivoting on [sigma | I].
  std::vector<std::vector<double>> aug(p, std::vector<double>(2 * p, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) aug[i][j] = sigma[i][j];
    aug[i][p + i] = 1.0;
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    if (aug[pivot][col] == 0.0)
      throw std::runtime_error("oracle: singular covariance");
    std::swap(aug[col], aug[pivot]);
    double scale = aug[col][col];
    for (std::size_t j = 0; j < 2 * p; ++j) aug[col][j] /= scale;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      double factor = aug[r][col];
      for (std::size_t j = 0; j < 2 * p; ++j)
        aug[r][j] -= factor * aug[col][j];
    }
  }
  std::vector<std::vector<double>> inv(p, std::vector<double>(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) inv[i][j] = aug[i][p + j];

  std::vector<std::vector<double>> zz(p, std::vector<double>(p, 0.0));
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += z[i][a] * z[i][b];
      zz[a][b] = acc / static_cast<double>(n);
    }

  psrfr::Matrix kernel(p, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      double acc = 0.0;
      for (std::size_t u = 0; u < p; ++u)
        for (std::size_t v = 0; v < p; ++v)
          acc += inv[a][u] * zz[u][v] * inv[v][b];
      kernel(static_cast<psrfr::Index>(a), static_cast<psrfr::Index>(b)) = acc;
    }
  return kernel;
}

}  // namespace testsupport
