#include <gtest/gtest.h>

#include <random>

#include "matorth/numkernel.hpp"
#include "oracles.hpp"

using namespace matorth;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

/// Random matrix whose eigenvalues sit in [lo, hi]: Q diag(l) Q^{-1} with a
/// well-conditioned Q.
Matrix shifted_spectrum(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector l(n);
  for (int i = 0; i < n; ++i) l(i) = u(rng);
  Matrix q = Matrix::Identity(n, n) + 0.3 * oracle::random_matrix(rng, n, n);
  return q * l.asDiagonal() * q.inverse();
}

}  // namespace

TEST(Sylvester, IdentityCaseHalvesRhs) {
  const Matrix c = mat2(1, 2, 3, 4);
  const Matrix x = solve_sylvester(Matrix::Identity(2, 2), Matrix::Identity(2, 2), c);
  EXPECT_LT((x - c / 2).norm(), 1e-15);
}

TEST(Sylvester, DiagonalDecouples) {
  const Matrix a = Eigen::Vector2d(2, 3).asDiagonal();
  const Matrix b = Eigen::Vector2d(4, 5).asDiagonal();
  const Matrix x = solve_sylvester(a, b, Matrix::Ones(2, 2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(x(i, j), 1.0 / (a(i, i) + b(j, j)), 1e-15);
  }
}

TEST(Sylvester, SharedSpectrumIsRejected) {
  const Matrix a = Eigen::Vector2d(1, 2).asDiagonal();
  const Matrix b = Eigen::Vector2d(-2, 5).asDiagonal();
  EXPECT_THROW(solve_sylvester(a, b, Matrix::Ones(2, 2)), SharedSpectrum);
}

TEST(Sylvester, MatchesKroneckerOracleOn200Instances) {
  std::mt19937_64 rng(20240611);
  double worst_oracle = 0.0;
  double worst_bound = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 1 + inst % 5;
    const Matrix a = shifted_spectrum(rng, n, 1.0, 3.0);
    const Matrix b = shifted_spectrum(rng, n, 0.5, 2.0);
    const Matrix c = oracle::random_matrix(rng, n, n);
    const Matrix x = solve_sylvester(a, b, c);
    const Matrix ref = oracle::kronecker_sylvester(a, b, c);
    worst_oracle = std::max(worst_oracle, oracle::rel(x, ref));
    const double resid = (a * x + x * b - c).norm();
    const double bound = 1e-12 * (a.norm() + b.norm()) * x.norm() + 1e-12 * c.norm();
    worst_bound = std::max(worst_bound, resid / bound);
  }
  EXPECT_LT(worst_oracle, 1e-10);
  EXPECT_LE(worst_bound, 1.0);
}

TEST(Nullspace, ZeroMatrixGivesFullBasis) {
  const auto v = common_nullspace({Matrix::Zero(3, 3)}, 1e-10);
  EXPECT_EQ(v.size(), 3u);
}

TEST(Nullspace, IdentityGivesNothing) {
  EXPECT_TRUE(common_nullspace({Matrix::Identity(3, 3)}, 1e-10).empty());
}

TEST(Nullspace, VectorsAnnihilateEveryMatrix) {
  std::mt19937_64 rng(7);
  const Matrix basis = oracle::random_matrix(rng, 5, 2);
  // Rows orthogonal to a 2-dimensional subspace.
  const Matrix proj = Matrix::Identity(5, 5) - basis * (basis.transpose() * basis).inverse() * basis.transpose();
  const Matrix m1 = oracle::random_matrix(rng, 3, 5) * proj;
  const Matrix m2 = oracle::random_matrix(rng, 4, 5) * proj;
  const auto v = common_nullspace({m1, m2}, 1e-10);
  ASSERT_EQ(v.size(), 2u);
  for (const auto& x : v) {
    EXPECT_LE((m1 * x).norm(), 1e-10 * m1.norm());
    EXPECT_LE((m2 * x).norm(), 1e-10 * m2.norm());
  }
}

TEST(Psd, IntroMassIsPsd) { EXPECT_TRUE(psd_check(mat2(1, 1, 1, 1))); }

TEST(Psd, IndefiniteRejected) { EXPECT_FALSE(psd_check(mat2(1, 2, 2, 1))); }

TEST(Psd, ZeroAccepted) { EXPECT_TRUE(psd_check(Matrix::Zero(2, 2))); }

TEST(Psd, AsymmetricRejected) { EXPECT_FALSE(psd_check(mat2(1, 1, 0, 1))); }
