#include <cmath>
#include <random>

#include "doctest.h"
#include "infoineq/errors.hpp"
#include "infoineq/linalg.hpp"

using namespace infoineq;

namespace {

SymMatrix random_gram(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> z;
  Matrix b(n, n + 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n + 3; ++j) b(i, j) = z(rng);
  }
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n + 3; ++k) s += b(i, k) * b(j, k);
      a.set(i, j, s);
    }
  }
  return a;
}

// Gauss-Jordan inverse for the brute-force comparison.
Matrix invert(const SymMatrix& a) {
  const std::size_t n = a.dim();
  Matrix m(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n + i) = 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(m(r, c)) > std::fabs(m(p, c))) p = r;
    }
    for (std::size_t j = 0; j < 2 * n; ++j) std::swap(m(c, j), m(p, j));
    const double d = m(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) m(c, j) /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m(r, c);
      for (std::size_t j = 0; j < 2 * n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = m(i, n + j);
  }
  return inv;
}

}  // namespace

TEST_CASE("cholesky examples") {
  const auto id = cholesky(SymMatrix::identity(3));
  REQUIRE(id.ok());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK((*id.factor)(i, j) == (i == j ? 1.0 : 0.0));
  }
  const auto l = cholesky(SymMatrix::from_rows({{4, 2}, {2, 3}}));
  REQUIRE(l.ok());
  CHECK((*l.factor)(0, 0) == doctest::Approx(2.0));
  CHECK((*l.factor)(1, 0) == doctest::Approx(1.0));
  CHECK((*l.factor)(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK((*l.factor)(0, 1) == 0.0);
  const auto bad = cholesky(SymMatrix::from_rows({{1, 2}, {2, 1}}));
  CHECK_FALSE(bad.ok());
  CHECK(bad.failed_pivot == 2);
}

TEST_CASE("symmetric storage is exact and bounded") {
  SymMatrix a(3);
  a.set(0, 2, 1.5);
  CHECK(a(2, 0) == 1.5);
  CHECK_THROWS_AS(SymMatrix(65), InvalidArgument);
}

TEST_CASE("quadratic form examples") {
  const double m2[] = {3.0, 4.0};
  CHECK(quadratic_form_inv(SymMatrix::identity(2), m2) == doctest::Approx(25.0));
  const double n1[] = {4.0 / 3.0};
  const double m1[] = {2.0 / 3.0};
  CHECK(quadratic_form_inv(SymMatrix::diagonal(n1), m1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const double n7[] = {6.0};
  const double m7[] = {8.0};
  CHECK(quadratic_form_inv(SymMatrix::diagonal(n7), m7) == doctest::Approx(32.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(quadratic_form_inv(SymMatrix::from_rows({{1, 2}, {2, 1}}), m2), NotPositiveDefinite);
}

TEST_CASE("quadratic form agrees with a brute-force inverse") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SymMatrix a = random_gram(rng, n);
    std::vector<double> m(n);
    for (double& v : m) v = z(rng);
    const double q = quadratic_form_inv(a, m);
    const Matrix inv = invert(a);
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) brute += m[i] * inv(i, j) * m[j];
    }
    CHECK(q >= 0.0);
    CHECK(std::fabs(q - brute) <= 1e-9 * std::fabs(brute));
  }
}

TEST_CASE("schur complement examples") {
  const auto zero = schur_complement(SymMatrix::identity(2), Matrix(2, 3), SymMatrix::identity(3));
  CHECK(zero.complement(0, 0) == 1.0);
  CHECK(zero.complement(0, 1) == 0.0);
  CHECK(zero.complement(1, 1) == 1.0);
  Matrix c(1, 1, 1.0);
  const double two[] = {2.0};
  const auto s = schur_complement(SymMatrix::diagonal(two), c, SymMatrix::identity(1));
  CHECK(s.complement(0, 0) == doctest::Approx(1.0));
  CHECK(s.projected(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(schur_complement(SymMatrix::identity(1), c, SymMatrix(1)), NotPositiveDefinite);
  CHECK_THROWS_AS(schur_complement(SymMatrix::identity(2), c, SymMatrix::identity(1)), InvalidArgument);
}

TEST_CASE("schur complements of random PD block matrices are PD") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix full = random_gram(rng, 5);
    const std::size_t t_idx[] = {0, 1};
    const std::size_t s_idx[] = {2, 3, 4};
    Matrix cross(2, 3);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 3; ++j) cross(i, j) = full(i, 2 + j);
    }
    const auto r = schur_complement(full.principal(t_idx), cross, full.principal(s_idx));
    CHECK(cholesky(r.complement).ok());
    CHECK(psd_certificate(r.complement).psd);
  }
}

TEST_CASE("psd certificate handles rank deficiency") {
  const auto cert = psd_certificate(SymMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(cert.psd);
  CHECK(cert.rank == 1);
  CHECK_FALSE(psd_certificate(SymMatrix::from_rows({{1, 2}, {2, 1}})).psd);
}
