#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "psrfr/numerics.hpp"
#include "psrfr/rng.hpp"
#include "support/test_helpers.hpp"

using namespace psrfr;
using testsupport::max_abs_diff;

TEST_CASE("center_and_covariance hand example") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  auto c = center_and_covariance(DataMatrix::from(x));
  CHECK(c.mean(0) == doctest::Approx(2.0));
  CHECK(c.mean(1) == doctest::Approx(3.0));
  CHECK(c.centered(0, 0) == doctest::Approx(-1.0));
  CHECK(c.centered(1, 1) == doctest::Approx(1.0));
  Matrix expected(2, 2);
  expected << 2, 2, 2, 2;
  CHECK(max_abs_diff(c.covariance, expected) < 1e-14);
  CHECK(c.centered.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("covariance matches brute-force double loop") {
  RandomStream s(SeededStream{101, 0});
  Matrix x = testsupport::random_matrix(s, 20, 5, 2.0);
  auto c = center_and_covariance(DataMatrix::from(x));

  const Index n = x.rows(), p = x.cols();
  Matrix brute = Matrix::Zero(p, p);
  for (Index a = 0; a < p; ++a) {
    double ma = 0;
    for (Index i = 0; i < n; ++i) ma += x(i, a);
    ma /= n;
    for (Index b = 0; b < p; ++b) {
      double mb = 0;
      for (Index i = 0; i < n; ++i) mb += x(i, b);
      mb /= n;
      double acc = 0;
      for (Index i = 0; i < n; ++i) acc += (x(i, a) - ma) * (x(i, b) - mb);
      brute(a, b) = acc / (n - 1);
    }
  }
  CHECK(max_abs_diff(c.covariance, brute) < 1e-12);
}

TEST_CASE("covariance is invariant to row order") {
  RandomStream s(SeededStream{102, 0});
  Matrix x = testsupport::random_matrix(s, 40, 4);
  Matrix y = x;
  for (Index i = 0; i < x.rows(); ++i) y.row(i) = x.row(x.rows() - 1 - i);
  auto cx = center_and_covariance(DataMatrix::from(x));
  auto cy = center_and_covariance(DataMatrix::from(y));
  CHECK(max_abs_diff(cx.covariance, cy.covariance) < 1e-12);
}

TEST_CASE("solve_spd basics") {
  Matrix eye = Matrix::Identity(3, 3);
  Vector b(3);
  b << 1, 2, 3;
  CHECK((solve_spd(eye, b) - b).norm() < 1e-14);

  Matrix d = Vector::LinSpaced(2, 2, 8).asDiagonal();
  Vector rhs(2);
  rhs << 2, 8;
  Vector x = solve_spd(d, rhs);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(1.0));
}

TEST_CASE("solve_spd recovers random solutions") {
  RandomStream s(SeededStream{103, 0});
  for (int rep = 0; rep < 20; ++rep) {
    Index p = 2 + static_cast<Index>(s.uniform01() * 14);
    Matrix a = testsupport::random_spd(s, p);
    Matrix x_true = testsupport::random_matrix(s, p, 3);
    Matrix x = solve_spd(a, Matrix(a * x_true));
    CHECK(max_abs_diff(x, x_true) < 1e-8);
    // residual is small relative to the data
    CHECK((a * x - a * x_true).norm() / (a * x_true).norm() < 1e-8);
  }
}

TEST_CASE("solve_spd failure modes") {
  Matrix rank1(2, 2);
  rank1 << 1, 1, 1, 1;
  Vector b = Vector::Ones(2);
  CHECK_THROWS_WITH_AS((void)solve_spd(rank1, b),
                       doctest::Contains("NotPositiveDefinite"), Error);

  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS((void)solve_spd(neg, b),
                       doctest::Contains("NotPositiveDefinite"), Error);

  Matrix nearsing = Matrix::Identity(2, 2);
  nearsing(1, 1) = 1e-13;
  try {
    (void)solve_spd(nearsing, b);
    FAIL("expected IllConditioned");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllConditioned);
  }

  Matrix notsquare(2, 3);
  notsquare.setZero();
  CHECK_THROWS_AS((void)solve_spd(notsquare, b), Error);
}

TEST_CASE("sym_eig_desc on diagonal and 2x2 matrices") {
  Matrix d = Vector::LinSpaced(3, 1, 3).asDiagonal();
  auto eig = sym_eig_desc(d);
  CHECK(eig.values(0) == doctest::Approx(3.0));
  CHECK(eig.values(1) == doctest::Approx(2.0));
  CHECK(eig.values(2) == doctest::Approx(1.0));
  CHECK(eig.vectors(2, 0) == doctest::Approx(1.0));
  CHECK(eig.vectors(1, 1) == doctest::Approx(1.0));
  CHECK(eig.vectors(0, 2) == doctest::Approx(1.0));

  Matrix two(2, 2);
  two << 2, 1, 1, 2;
  auto e2 = sym_eig_desc(two);
  CHECK(e2.values(0) == doctest::Approx(3.0));
  CHECK(e2.values(1) == doctest::Approx(1.0));
  double r = 1.0 / std::sqrt(2.0);
  CHECK(e2.vectors(0, 0) == doctest::Approx(r));
  CHECK(e2.vectors(1, 0) == doctest::Approx(r));
  // tied magnitudes: lowest index gets the positive sign
  CHECK(e2.vectors(0, 1) == doctest::Approx(r));
  CHECK(e2.vectors(1, 1) == doctest::Approx(-r));
}

TEST_CASE("sym_eig_desc reconstruction and orthonormality") {
  RandomStream s(SeededStream{104, 0});
  for (int rep = 0; rep < 10; ++rep) {
    Index p = 2 + static_cast<Index>(s.uniform01() * 18);
    Matrix a = testsupport::random_matrix(s, p, p);
    Matrix sym = 0.5 * (a + a.transpose());
    auto eig = sym_eig_desc(sym);
    Matrix rebuilt =
        eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK(max_abs_diff(rebuilt, sym) < 1e-10);
    CHECK(max_abs_diff(Matrix(eig.vectors.transpose() * eig.vectors),
                       Matrix::Identity(p, p)) < 1e-12);
    for (Index j = 0; j + 1 < p; ++j) CHECK(eig.values(j) >= eig.values(j + 1));
    // sign convention: largest-magnitude entry of each column is positive
    for (Index j = 0; j < p; ++j) {
      Index arg;
      eig.vectors.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(eig.vectors(arg, j) > 0.0);
    }
  }
}

TEST_CASE("sym_eig_desc rejects asymmetric input") {
  Matrix a(2, 2);
  a << 1, 2, 2.1, 1;
  try {
    (void)sym_eig_desc(a);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
}

TEST_CASE("identity eigenvectors stay canonical") {
  auto eig = sym_eig_desc(Matrix(Matrix::Identity(4, 4)));
  CHECK(max_abs_diff(eig.vectors.cwiseAbs(), Matrix::Identity(4, 4)) < 1e-12);
  CHECK(eig.vectors.diagonal().minCoeff() > 0.0);
}

TEST_CASE("gram_schmidt orthonormalizes and preserves span") {
  RandomStream s(SeededStream{105, 0});
  for (int rep = 0; rep < 10; ++rep) {
    Matrix a = testsupport::random_matrix(s, 12, 4);
    Matrix q = gram_schmidt(a);
    CHECK(max_abs_diff(Matrix(q.transpose() * q), Matrix::Identity(4, 4)) <
          1e-12);
    // span is unchanged: projecting a onto q reproduces a
    Matrix proj = q * (q.transpose() * a);
    CHECK(max_abs_diff(proj, a) < 1e-9);
  }
}

TEST_CASE("gram_schmidt passes orthonormal input through") {
  RandomStream s(SeededStream{106, 0});
  Matrix q = testsupport::random_orthogonal(s, 6).leftCols(3);
  CHECK(max_abs_diff(gram_schmidt(q), q) < 1e-12);
}

TEST_CASE("gram_schmidt flags rank deficiency") {
  Matrix dup(5, 2);
  RandomStream s(SeededStream{107, 0});
  for (Index i = 0; i < 5; ++i) dup(i, 0) = s.normal();
  dup.col(1) = dup.col(0);
  try {
    (void)gram_schmidt(dup);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }

  Matrix tiny(3, 1);
  tiny << 1e-14, 0, 0;
  CHECK_THROWS_AS((void)gram_schmidt(tiny), Error);
}

TEST_CASE("fix_column_signs flips negative-dominant columns only") {
  Matrix m(3, 2);
  m << 0.1, -0.2, -0.9, 0.3, 0.2, 0.9;
  fix_column_signs(m);
  CHECK(m(1, 0) == doctest::Approx(0.9));   // column 0 flipped
  CHECK(m(0, 0) == doctest::Approx(-0.1));
  CHECK(m(2, 1) == doctest::Approx(0.9));   // column 1 untouched
  CHECK(m(0, 1) == doctest::Approx(-0.2));
}
