#include "psrfr/distributions.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace psrfr {

namespace {

Matrix cholesky_factor(const Matrix& sigma, const Vector& mu) {
  if (sigma.rows() != sigma.cols())
    fail(ErrorCode::ShapeMismatch, "sigma must be square");
  if (mu.size() != sigma.rows())
    fail(ErrorCode::LengthMismatch, "mu length must match sigma dimension");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NotPositiveDefinite, "sigma has no Cholesky factor");
  return llt.matrixL();
}

void check_n(Index n) {
  if (n < 2) fail(ErrorCode::InsufficientRows, "need n >= 2 samples");
}

Vector standard_normal_vector(RandomStream& rs, Index p) {
  Vector z(p);
  for (Index i = 0; i < p; ++i) z(i) = rs.normal();
  return z;
}

}  // namespace

DataMatrix sample_normal(const Vector& mu, const Matrix& sigma, Index n,
                         SeededStream stream) {
  check_n(n);
  Matrix chol = cholesky_factor(sigma, mu);
  const Index p = sigma.rows();
  RandomStream rs(stream);
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i)
    x.row(i) = (mu + chol * standard_normal_vector(rs, p)).transpose();
  return DataMatrix::from(std::move(x));
}

DataMatrix sample_t(const Vector& mu, const Matrix& sigma, double nu, Index n,
                    SeededStream stream) {
  check_n(n);
  if (!(nu > 0.0)) fail(ErrorCode::ConfigInvalid, "t requires nu > 0");
  Matrix chol = cholesky_factor(sigma, mu);
  const Index p = sigma.rows();
  RandomStream rs(stream);
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    Vector z = chol * standard_normal_vector(rs, p);
    double w = rs.chi_square(nu);
    x.row(i) = (mu + z / std::sqrt(w / nu)).transpose();
  }
  return DataMatrix::from(std::move(x));
}

DataMatrix sample_pe(const Vector& mu, const Matrix& sigma, double beta,
                     Index n, SeededStream stream) {
  check_n(n);
  if (!(beta > 0.0)) fail(ErrorCode::ConfigInvalid, "pe requires beta > 0");
  Matrix chol = cholesky_factor(sigma, mu);
  const Index p = sigma.rows();
  RandomStream rs(stream);
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    Vector u;
    double norm = 0.0;
    do {
      u = standard_normal_vector(rs, p);
      norm = u.norm();
    } while (norm == 0.0);
    u /= norm;
    double t = rs.gamma(p / (2.0 * beta), 2.0);
    double r = std::pow(t, 1.0 / (2.0 * beta));
    x.row(i) = (mu + r * (chol * u)).transpose();
  }
  return DataMatrix::from(std::move(x));
}

DataMatrix sample_mixture(const Matrix& sigma, double weight, double halfwidth,
                          Index n, SeededStream stream) {
  check_n(n);
  if (!(weight >= 0.0 && weight <= 1.0))
    fail(ErrorCode::ConfigInvalid, "mixture weight must lie in [0, 1]");
  if (!(halfwidth > 0.0))
    fail(ErrorCode::ConfigInvalid, "mixture halfwidth must be positive");
  const Index p = sigma.rows();
  Vector zero = Vector::Zero(p);
  // weight = 1 must match sample_normal bit for bit on the same stream, so
  // skip the per-row branch draw entirely.
  if (weight == 1.0) return sample_normal(zero, sigma, n, stream);
  Matrix chol = cholesky_factor(sigma, zero);
  RandomStream rs(stream);
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    if (rs.uniform01() < weight) {
      x.row(i) = (chol * standard_normal_vector(rs, p)).transpose();
    } else {
      for (Index j = 0; j < p; ++j) x(i, j) = rs.uniform(-halfwidth, halfwidth);
    }
  }
  return DataMatrix::from(std::move(x));
}

DataMatrix sample(const DistributionSpec& spec, Index n, SeededStream stream) {
  switch (spec.kind) {
    case DistKind::Normal:
      return sample_normal(spec.mu, spec.sigma, n, stream);
    case DistKind::StudentT:
      return sample_t(spec.mu, spec.sigma, spec.nu, n, stream);
    case DistKind::PowerExponential:
      return sample_pe(spec.mu, spec.sigma, spec.beta, n, stream);
    case DistKind::Mixture:
      if (spec.mu.size() != 0 && spec.mu.cwiseAbs().maxCoeff() != 0.0)
        fail(ErrorCode::ConfigInvalid, "mixture law has mean zero");
      return sample_mixture(spec.sigma, spec.mixture_weight,
                            spec.uniform_halfwidth, n, stream);
  }
  fail(ErrorCode::ConfigInvalid, "unknown distribution kind");
}

double pe_mean_square_radius(Index p, double beta) {
  double a = p / (2.0 * beta);
  return std::pow(2.0, 1.0 / beta) *
         std::exp(std::lgamma(a + 1.0 / beta) - std::lgamma(a));
}

}  // namespace psrfr
