#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "psrfr/distributions.hpp"
#include "psrfr/estimators.hpp"
#include "psrfr/metrics.hpp"
#include "psrfr/models.hpp"
#include "psrfr/numerics.hpp"
#include "support/appendix_oracle.hpp"
#include "support/test_helpers.hpp"

using namespace psrfr;
using testsupport::max_abs_diff;

namespace {

Matrix projector(const Matrix& basis) {
  return basis * basis.transpose();
}

Vector standard_noise(Index n, SeededStream s) {
  RandomStream rs(s);
  Vector e(n);
  for (Index i = 0; i < n; ++i) e(i) = rs.normal();
  return e;
}

LabeledSample normal_model_sample(ModelId id, Index n, Index p,
                                  std::uint64_t seed,
                                  std::optional<double> sigma = {}) {
  Matrix cov = covariance_for(CovScenario::NormP10);
  if (p != 10) cov = Matrix::Identity(p, p);
  auto x = sample_normal(Vector::Zero(p), cov, n, SeededStream{seed, 0});
  auto noise = standard_noise(n, SeededStream{seed, 1});
  return generate(default_spec(id, p, sigma), std::move(x), noise,
                  SeededStream{});
}

}  // namespace

TEST_CASE("square-response kernel matches the brute-force oracle") {
  RandomStream meta(SeededStream{200, 0});
  // one fixed mid-size instance plus random shapes
  for (int rep = 0; rep < 12; ++rep) {
    Index n = rep == 0 ? 20 : 10 + static_cast<Index>(meta.uniform01() * 40);
    Index p = rep == 0 ? 5 : 2 + static_cast<Index>(meta.uniform01() * 6);
    if (n <= p + 2) n = p + 3;
    RandomStream ds(SeededStream{201, static_cast<std::uint64_t>(rep)});
    Matrix x = testsupport::random_matrix(ds, n, p, 1.5);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = ds.normal() + 0.5;

    auto kernel = psrfr_kernel(DataMatrix::from(x), y);
    Matrix oracle = testsupport::square_response_kernel_oracle(x, y);
    CHECK(max_abs_diff(kernel.z_hat, oracle) < 1e-10);

    // kernel invariants
    CHECK(max_abs_diff(kernel.z_hat, Matrix(kernel.z_hat.transpose())) <
          1e-12);
    auto eig = sym_eig_desc(kernel.z_hat);
    CHECK(eig.values.minCoeff() >= -1e-8 * eig.values.maxCoeff());
  }
}

TEST_CASE("psrfr degenerates on a zero response") {
  RandomStream s(SeededStream{202, 0});
  Matrix x = testsupport::random_matrix(s, 40, 5);
  Vector zero = Vector::Zero(40);
  try {
    (void)psrfr_fit(DataMatrix::from(x), zero, 2);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpectrum);
  }
}

TEST_CASE("psrfr is invariant to response scaling") {
  auto sample = normal_model_sample(ModelId::N1, 300, 10, 7);
  auto base = psrfr_fit(sample.predictors, sample.response, 2);
  for (double c : {-3.7, 1e6, 1e-6}) {
    auto scaled = psrfr_fit(sample.predictors, Vector(c * sample.response), 2);
    CHECK(max_abs_diff(projector(base.basis), projector(scaled.basis)) <
          1e-10);
    CHECK(scaled.eigenvalues(0) ==
          doctest::Approx(c * c * base.eigenvalues(0)).epsilon(1e-9));
  }
}

TEST_CASE("estimators are orthogonally equivariant") {
  const Index n = 400, p = 5;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{203, 0});
  RandomStream rs(SeededStream{203, 1});
  Vector noise = standard_noise(n, SeededStream{203, 2});
  // generic multi-direction response
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    double b1 = x.values(i, 0), b2 = x.values(i, 1);
    y(i) = b1 * b1 + std::abs(b2) + 0.3 * noise(i);
  }
  Matrix a = testsupport::random_orthogonal(rs, p);
  DataMatrix rotated = DataMatrix::from(Matrix(x.values * a.transpose()));

  auto check_method = [&](auto&& fit) {
    auto plain = fit(x, y);
    auto rot = fit(rotated, y);
    Matrix expected = a * projector(plain.basis) * a.transpose();
    CHECK(max_abs_diff(projector(rot.basis), expected) < 1e-8);
  };
  check_method([](const DataMatrix& d, const Vector& r) {
    return psrfr_fit(d, r, 2);
  });
  check_method([](const DataMatrix& d, const Vector& r) {
    return phd_fit(d, r, 2);
  });
  check_method([](const DataMatrix& d, const Vector& r) {
    return sir_fit(d, r, 2, 10);
  });
  check_method([](const DataMatrix& d, const Vector& r) {
    return save_fit(d, r, 2, 10);
  });
}

TEST_CASE("noiseless span recovery") {
  auto sample = normal_model_sample(ModelId::N5, 5000, 10, 11, 0.0);
  auto fit = psrfr_fit(sample.predictors, sample.response, 2);
  CHECK(trace_correlation(sample.truth.true_basis, fit.basis) > 0.99);
}

TEST_CASE("psrfr single-replicate sanity on n5") {
  auto sample = normal_model_sample(ModelId::N5, 2000, 10, 12);
  auto fit = psrfr_fit(sample.predictors, sample.response, 2);
  CHECK(trace_correlation(sample.truth.true_basis, fit.basis) > 0.9);
  CHECK(fit.eigenvalues.size() == 10);
  for (Index j = 0; j + 1 < 10; ++j)
    CHECK(fit.eigenvalues(j) >= fit.eigenvalues(j + 1));
}

TEST_CASE("ols recovers an exact linear direction") {
  const Index n = 10000, p = 6;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{204, 0});
  Vector beta = Vector::Zero(p);
  beta(0) = 1.0;
  beta(2) = 2.0;
  beta /= beta.norm();
  Vector y = x.values * beta;
  auto fit = ols_direction(x, y);
  CHECK(fit.k == 1);
  CHECK(std::abs(fit.basis.col(0).dot(beta)) > 0.999);
  CHECK(fit.eigenvalues(0) > 0.0);
  CHECK(fit.eigenvalues.tail(p - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ols degenerates on constant and symmetric responses") {
  const Index n = 10000, p = 5;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{205, 0});
  Vector constant = Vector::Constant(n, 0.5);
  try {
    (void)ols_direction(x, constant);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpectrum);
  }

  // even function of a symmetric predictor: moment vector is O(n^-1/2) noise
  Vector y = x.values.col(0).array().square();
  bool degenerate = false;
  double strength = 0.0;
  try {
    strength = ols_direction(x, y).eigenvalues(0);
  } catch (const Error& e) {
    degenerate = e.code() == ErrorCode::DegenerateSpectrum;
  }
  CHECK((degenerate || strength < 0.1));
}

TEST_CASE("phd finds quadratic structure and stays quiet on noise") {
  const Index n = 10000;
  {
    const Index p = 5;
    auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                           SeededStream{206, 0});
    Vector beta = Vector::Zero(p);
    beta(0) = beta(1) = 1.0 / std::sqrt(2.0);
    Vector q = x.values * beta;
    Vector y = q.array().square();
    auto fit = phd_fit(x, y, 1);
    CHECK(std::abs(fit.basis.col(0).dot(beta)) > 0.95);
    for (Index j = 0; j + 1 < p; ++j)
      CHECK(fit.eigenvalues(j) >= fit.eigenvalues(j + 1));
    CHECK(fit.eigenvalues.minCoeff() >= 0.0);
  }
  {
    const Index p = 3;
    auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                           SeededStream{207, 0});
    Vector y = standard_noise(n, SeededStream{207, 1});
    auto fit = phd_fit(x, y, 1);
    CHECK(fit.eigenvalues(0) < 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("phd degenerates on a constant response") {
  auto x = sample_normal(Vector::Zero(4), Matrix(Matrix::Identity(4, 4)), 100,
                         SeededStream{208, 0});
  Vector constant = Vector::Constant(100, 2.0);
  try {
    (void)phd_fit(x, constant, 1);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpectrum);
  }
}

TEST_CASE("sir recovers a monotone link and misses a symmetric one") {
  const Index n = 2000, p = 6;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{209, 0});
  Vector beta = Vector::Zero(p);
  beta(0) = 1.0;
  Vector noise = standard_noise(n, SeededStream{209, 1});

  Vector linear = x.values * beta + 0.1 * noise;
  auto fit = sir_fit(x, linear, 1, 10);
  CHECK(std::abs(fit.basis.col(0).dot(beta)) > 0.95);

  Vector symmetric = (x.values * beta).array().square();
  auto blind = sir_fit(x, symmetric, 1, 10);
  CHECK(trace_correlation(Matrix(beta), blind.basis) < 0.6);
}

TEST_CASE("sir slicing handles ties deterministically") {
  const Index n = 200, p = 4;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{210, 0});
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y(i) = std::floor(3.0 * x.values(i, 0)) + (i % 3 == 0 ? 0.0 : 0.5);
  auto a = sir_fit(x, y, 1, 10);
  auto b = sir_fit(x, y, 1, 10);
  CHECK(max_abs_diff(a.basis, b.basis) == 0.0);
}

TEST_CASE("sir input gates") {
  auto x = sample_normal(Vector::Zero(3), Matrix(Matrix::Identity(3, 3)), 15,
                         SeededStream{211, 0});
  Vector y = x.values.col(0);
  try {
    (void)sir_fit(x, y, 1, 10);  // 15 < 2 * 10
    FAIL("expected TooFewRows");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewRows);
  }
  Vector constant = Vector::Constant(15, 1.0);
  try {
    (void)sir_fit(x, constant, 1, 5);
    FAIL("expected DegenerateSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpectrum);
  }
}

TEST_CASE("save finds the symmetric n5 structure") {
  auto sample = normal_model_sample(ModelId::N5, 2000, 10, 13);
  auto fit = save_fit(sample.predictors, sample.response, 2, 10);
  CHECK(trace_correlation(sample.truth.true_basis, fit.basis) > 0.9);
}

TEST_CASE("save null cases have a near-zero spectrum") {
  const Index n = 4000, p = 4;
  auto x = sample_normal(Vector::Zero(p), Matrix(Matrix::Identity(p, p)), n,
                         SeededStream{212, 0});
  Vector y = standard_noise(n, SeededStream{212, 1});
  auto fit = save_fit(x, y, 1, 10);
  CHECK(fit.eigenvalues(0) < 0.05);

  // single slice: the within covariance of standardized data is the identity
  auto one = save_fit(x, y, 1, 1);
  CHECK(one.eigenvalues.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("all estimators return orthonormal bases") {
  auto sample = normal_model_sample(ModelId::N1, 500, 10, 14);
  std::vector<SubspaceEstimate> fits;
  fits.push_back(psrfr_fit(sample.predictors, sample.response, 2));
  fits.push_back(ols_direction(sample.predictors, sample.response));
  fits.push_back(phd_fit(sample.predictors, sample.response, 2));
  fits.push_back(sir_fit(sample.predictors, sample.response, 2, 10));
  fits.push_back(save_fit(sample.predictors, sample.response, 2, 10));
  for (const auto& fit : fits) {
    Matrix gram = fit.basis.transpose() * fit.basis;
    CHECK(max_abs_diff(gram, Matrix::Identity(fit.k, fit.k)) < 1e-10);
    CHECK(fit.eigenvalues.size() == sample.predictors.p());
  }
}

TEST_CASE("row-count and k gates") {
  RandomStream s(SeededStream{213, 0});
  Matrix wide = testsupport::random_matrix(s, 6, 6);
  Vector y(6);
  for (Index i = 0; i < 6; ++i) y(i) = s.normal();
  auto data = DataMatrix::from(wide);
  CHECK_THROWS_AS((void)psrfr_fit(data, y, 2), Error);     // n <= p
  CHECK_THROWS_AS((void)ols_direction(data, y), Error);
  CHECK_THROWS_AS((void)phd_fit(data, y, 2), Error);

  Matrix tall = testsupport::random_matrix(s, 50, 4);
  Vector y2(50);
  for (Index i = 0; i < 50; ++i) y2(i) = s.normal();
  auto d2 = DataMatrix::from(tall);
  CHECK_THROWS_AS((void)psrfr_fit(d2, y2, 0), Error);
  CHECK_THROWS_AS((void)psrfr_fit(d2, y2, 5), Error);
  CHECK_THROWS_AS((void)psrfr_fit(d2, Vector(y2.head(49)), 2), Error);
}
