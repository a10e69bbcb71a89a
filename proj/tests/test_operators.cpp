#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "interp_scales/operators.hpp"

using namespace interp_scales;

namespace {

std::vector<double> as_vector(const DecreasingSequence& s) { return {s.values().begin(), s.values().end()}; }

DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> d;
  std::vector<double> e(r * c);
  for (double& x : e) x = d(rng);
  return DenseMatrix(r, c, std::move(e));
}

// Orthogonal matrix from modified Gram–Schmidt on a Gaussian matrix.
DenseMatrix random_orthogonal(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (auto& col : q)
    for (double& x : col) x = d(rng);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += q[j][i] * q[k][i];
      for (std::size_t i = 0; i < n; ++i) q[j][i] -= dot * q[k][i];
    }
    double nrm = 0;
    for (double x : q[j]) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : q[j]) x /= nrm;
  }
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = q[j][i];
  return DenseMatrix(n, n, std::move(e));
}

// Singular values of a 2x2 matrix from the eigenvalues of T^T T.
std::pair<double, double> sv2x2(double a, double b, double c, double d) {
  const double fro = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, fro * fro - 4 * det * det));
  return {std::sqrt((fro + disc) / 2), std::sqrt(std::max(0.0, (fro - disc) / 2))};
}

}  // namespace

TEST(ApproximationNumbers, Diagonal) {
  EXPECT_EQ(as_vector(approximation_numbers(DenseMatrix::diagonal(std::vector<double>{3, 1, 2}))),
            (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(as_vector(approximation_numbers(DenseMatrix::diagonal(std::vector<double>{-4, 0.5}))),
            (std::vector<double>{4, 0.5}));
}

TEST(ApproximationNumbers, Permutation) {
  EXPECT_EQ(as_vector(approximation_numbers(DenseMatrix(2, 2, {0, 1, 1, 0}))), (std::vector<double>{1, 1}));
  EXPECT_EQ(as_vector(approximation_numbers(DenseMatrix(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0}))),
            (std::vector<double>{1, 1, 1}));
}

TEST(ApproximationNumbers, ShearClosedForm) {
  const auto s = approximation_numbers(DenseMatrix(2, 2, {1, 1, 0, 1}));
  EXPECT_NEAR(s.a(1), (1 + std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(s.a(2), (std::sqrt(5.0) - 1) / 2, 1e-12);
}

TEST(ApproximationNumbers, Random2x2AgainstQuadratic) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (int k = 0; k < 200; ++k) {
    const double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    const auto [s1, s2] = sv2x2(a, b, c, e);
    const auto s = approximation_numbers(DenseMatrix(2, 2, {a, b, c, e}));
    EXPECT_NEAR(s.a(1), s1, 1e-8 * s1);
    EXPECT_NEAR(s.a(2), s2, 1e-8 * s1);
  }
}

TEST(ApproximationNumbers, RectangularAndTransposeAgree) {
  std::mt19937_64 rng(2);
  const auto m = random_matrix(rng, 5, 3);
  const auto a = approximation_numbers(m);
  const auto b = approximation_numbers(m.transposed());
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_NEAR(a.a(n), b.a(n), 1e-12 * a.a(1));
}

TEST(ApproximationNumbers, FrobeniusIdentity) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto m = random_matrix(rng, 6, 6);
    double fro = 0;
    for (double e : m.entries()) fro += e * e;
    double s2 = 0;
    const auto sv = approximation_numbers(m);
    for (double s : sv.values()) s2 += s * s;
    EXPECT_NEAR(s2, fro, 1e-11 * fro);
  }
}

TEST(ApproximationNumbers, OrthogonalInvariance) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const auto t = random_matrix(rng, 8, 8);
    const auto u = random_orthogonal(rng, 8);
    const auto v = random_orthogonal(rng, 8);
    const auto a = approximation_numbers(t);
    const auto b = approximation_numbers(u * t * v);
    for (std::size_t n = 1; n <= 8; ++n) EXPECT_NEAR(a.a(n), b.a(n), 1e-8 * a.a(1));
  }
}

TEST(ApproximationNumbers, Errors) {
  EXPECT_THROW(DenseMatrix(2, 2, {1, 2, 3}), InvalidInput);
  EXPECT_THROW(DenseMatrix(1, 2, {1, NAN}), InvalidInput);
  EXPECT_THROW(DenseMatrix(0, 0, {}), InvalidInput);
  JacobiOptions opt;
  opt.max_sweeps = 0;
  EXPECT_THROW(approximation_numbers(DenseMatrix(2, 2, {1, 1, 0, 1}), opt), NumericalFailure);
}

TEST(OperatorIdealNorm, Examples) {
  // singular values (2, 0): only the first term survives
  EXPECT_NEAR(operator_ideal_norm(DenseMatrix(2, 2, {1, 1, 1, 1}), BoydFunction::power(0.3), 2), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(operator_ideal_norm(DenseMatrix::diagonal(std::vector<double>{1, 1}), BoydFunction::power(1), 1),
                   2.0);
  EXPECT_NEAR(
      operator_ideal_norm(DenseMatrix::diagonal(std::vector<double>{3, 1, 2}), BoydFunction::power(0.5), 2),
      std::sqrt(14.0), 1e-14);
}

TEST(OperatorIdealNorm, RankOneHasUnitNorm) {
  // u v^T with |u| = |v| = 1 has a single singular value 1.
  const std::vector<double> u{0.6, 0.8, 0.0};
  const std::vector<double> v{0.0, 1.0};
  std::vector<double> e;
  for (double x : u)
    for (double y : v) e.push_back(x * y);
  for (double theta : {0.2, 0.5, 0.9})
    for (double q : {1.0, 2.0, HUGE_VAL})
      EXPECT_NEAR(operator_ideal_norm(DenseMatrix(3, 2, e), BoydFunction::power(theta), q), 1.0, 1e-14);
}
