#pragma once

#include "psrfr/rng.hpp"
#include "psrfr/types.hpp"

namespace psrfr {

enum class DistKind { Normal, StudentT, PowerExponential, Mixture };

/// Parameters of one predictor law. Fields beyond (mu, sigma) are read only
/// by the kind that needs them. The multivariate Cauchy is StudentT with
/// nu = 1. Mixture draws each row from N(0, sigma) with probability
/// mixture_weight and otherwise fills the row with independent
/// Uniform(-uniform_halfwidth, uniform_halfwidth) entries; its mean is
/// pinned at zero, so a nonzero mu is rejected.
struct DistributionSpec {
  DistKind kind = DistKind::Normal;
  Vector mu;     // length p
  Matrix sigma;  // p x p symmetric positive definite
  double nu = 3.0;
  double beta = 1.0;
  double mixture_weight = 0.8;
  double uniform_halfwidth = 3.0;
};

/// n rows from N(mu, sigma): row = mu + L z with sigma = L L' (Cholesky)
/// and z a fresh standard normal vector.
DataMatrix sample_normal(const Vector& mu, const Matrix& sigma, Index n,
                         SeededStream stream);

/// Multivariate t with nu > 0 degrees of freedom:
/// row = mu + L z / sqrt(w / nu), w ~ chi-square(nu). Covariance exists for
/// nu > 2 and equals nu / (nu - 2) * sigma; nu = 1 is the Cauchy.
DataMatrix sample_t(const Vector& mu, const Matrix& sigma, double nu, Index n,
                    SeededStream stream);

/// Power exponential (multivariate exponential power) law with density
/// proportional to exp(-1/2 ((x-mu)' sigma^-1 (x-mu))^beta). Rows are
/// mu + r * L u with u uniform on the unit sphere and r = t^(1/(2 beta)),
/// t ~ Gamma(p / (2 beta), 2); beta = 1 recovers N(mu, sigma) exactly.
DataMatrix sample_pe(const Vector& mu, const Matrix& sigma, double beta,
                     Index n, SeededStream stream);

/// Normal/uniform contamination mixture (zero mean; see DistributionSpec).
/// weight = 1 degenerates to sample_normal on the same stream, bit for bit.
DataMatrix sample_mixture(const Matrix& sigma, double weight, double halfwidth,
                          Index n, SeededStream stream);

/// Dispatch on spec.kind.
DataMatrix sample(const DistributionSpec& spec, Index n, SeededStream stream);

/// Expected squared Mahalanobis radius E[R^2] of the power exponential law
/// (p = dimension): 2^(1/beta) * Gamma((p+2)/(2 beta)) / Gamma(p/(2 beta)).
double pe_mean_square_radius(Index p, double beta);

}  // namespace psrfr
