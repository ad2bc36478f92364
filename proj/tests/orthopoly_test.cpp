#include <gtest/gtest.h>

#include "matorth/matorth.hpp"
#include "oracles.hpp"

using namespace matorth;

namespace {

Matrix intro_mass() {
  Matrix m(2, 2);
  m << 1, 1, 1, 1;
  return m;
}

}  // namespace

TEST(MonicSequence, ScalarHermiteMatchesRecurrence) {
  const auto seq = monic_sequence(make_family(ScalarHermite{}), 10);
  const auto ref = oracle::monic_hermite(10);
  for (int n = 0; n <= 10; ++n) {
    ASSERT_EQ(seq.polys[n].degree(), n);
    for (int j = 0; j <= n; ++j) {
      EXPECT_NEAR(seq.polys[n].coeff(j)(0, 0), ref[n][j], 1e-9 * std::max(1.0, std::abs(ref[n][j])))
          << "n=" << n << " j=" << j;
    }
  }
}

TEST(MonicSequence, FirstPolynomialFromMoments) {
  const auto w = make_family(Laguerre32{0.8, 0.5}).with_atom(1.5, catalog_mass(Laguerre32{0.8, 0.5}, 1.5, Branch::plus),
                                                              1.0, 2.0);
  const auto mu = moments(w, 4);
  const auto seq = monic_sequence(mu, 1);
  EXPECT_LT((seq.polys[1].coeff(1) - Matrix::Identity(2, 2)).norm(), 1e-15);
  const Matrix c0 = -mu[1] * mu[0].inverse();
  EXPECT_LT(oracle::rel(seq.polys[1].coeff(0), c0), 1e-12);
}

TEST(MonicSequence, OrthogonalToLowerDegrees) {
  const auto w = make_family(Hermite31{1.0}).with_atom(0.0, intro_mass(), 1.0, 1.0);
  const auto mu = moments(w, 24);
  const auto seq = monic_sequence(mu, 10);
  for (int n = 1; n <= 10; ++n) {
    for (int m = 0; m < n; ++m) {
      const auto tm = MatrixPolynomial::monomial(2, m);
      const Matrix ip = inner_product(seq.polys[n], mu, tm);
      EXPECT_LT(ip.norm() / mu[n + m].norm(), 1e-10) << n << " " << m;
    }
  }
}

TEST(MonicSequence, NormsPositiveDefinite) {
  const auto seq = monic_sequence(make_family(Laguerre32{1.0, 1.0}), 6);
  for (const auto& d : seq.norms) {
    EXPECT_LT((d - d.transpose()).norm() / d.norm(), 1e-10);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (d + d.transpose())).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(MonicSequence, IllConditionedRaises) {
  EXPECT_THROW(monic_sequence(make_family(Hermite31{1.0}), 15, 1e3), IllConditionedMoments);
}

TEST(MonicSequence, NeedsMoments) {
  EXPECT_THROW(monic_sequence(moments(make_family(ScalarHermite{}), 5), 4), MissingMoments);
}

TEST(Recurrence, ResidualSmallAndDiagonalTermMatchesNorms) {
  const auto w = make_family(Hermite31{0.5});
  const auto mu = moments(w, 22);
  const auto seq = monic_sequence(mu, 10);
  const auto rec = recurrence_coeffs(seq, mu);
  EXPECT_LT(rec.max_residual, 1e-9);
  for (int n = 1; n < 10; ++n) {
    // <t P_n, P_{n-1}> = <P_n, P_n> because t P_{n-1} = P_n + lower.
    const Matrix expected = seq.norms[n] * seq.norms[n - 1].inverse();
    EXPECT_LT(oracle::rel(rec.f[n], expected), 1e-8) << n;
  }
}

TEST(Recurrence, ScalarHermiteCoefficients) {
  const auto seq = monic_sequence(make_family(ScalarHermite{}), 8);
  const auto rec = recurrence_coeffs(seq, make_family(ScalarHermite{}));
  for (int n = 0; n < 8; ++n) {
    EXPECT_NEAR(rec.e[n](0, 0), 0.0, 1e-12);
    if (n > 0) EXPECT_NEAR(rec.f[n](0, 0), 0.5 * n, 1e-10);
  }
}

TEST(VerifyEigen, IntroFamilyAllConfigurations) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto d = oracle::hermite31_typed(a, 0.0, oracle::xi(a, 0.0, -1.0));
    for (auto [g, z] : {std::pair{1.0, 0.0}, {1.0, 1.0}, {2.0, 5.0}}) {
      const auto w = make_family(Hermite31{a}).with_atom(0.0, intro_mass(), g, z);
      const auto rep = verify_eigen(monic_sequence(w, 12), d);
      EXPECT_TRUE(rep.verdict) << a << " " << g << " " << z << " " << rep.max_residual;
    }
  }
}

TEST(VerifyEigen, GammaMatchesDisplayedEntries) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto d = oracle::hermite31_typed(a, 0.0, -1.0);
    for (int n = 0; n <= 12; ++n) {
      const Matrix g = operator_eigenvalue(d, n);
      const double a2 = a * a;
      EXPECT_NEAR(g(0, 0), -(2.0 * n + 1), 1e-12);
      EXPECT_NEAR(g(0, 1), (2 + n * a2) * (2 + (n + 1) * a2) / a2, 1e-12 * (1 + std::abs(g(0, 1))));
      EXPECT_NEAR(g(1, 0), 4 / a2, 1e-12);
      EXPECT_NEAR(g(1, 1), -2.0 * n + 1, 1e-12);
    }
  }
}

TEST(VerifyEigen, MassChangesPolynomialsNotEigenvalues) {
  const auto d = oracle::hermite31_typed(1.0, 0.0, -1.0);
  const auto w0 = make_family(Hermite31{1.0});
  const auto w1 = w0.with_atom(0.0, intro_mass(), 1.0, 1.0);
  const auto s0 = monic_sequence(w0, 6);
  const auto s1 = monic_sequence(w1, 6);
  EXPECT_GT((s0.polys[1].coeff(0) - s1.polys[1].coeff(0)).norm(), 1e-2);
  const auto r0 = verify_eigen(s0, d);
  const auto r1 = verify_eigen(s1, d);
  for (int n = 0; n <= 6; ++n) EXPECT_TRUE(r0.gamma[n] == r1.gamma[n]);
}

TEST(VerifyEigen, ScalarMassLosesEigenfunctions) {
  const auto w = make_family(ScalarHermite{}).with_atom(0.5, Matrix::Ones(1, 1), 1.0, 1.0);
  EXPECT_FALSE(verify_eigen(monic_sequence(w, 6), classical_operator(ScalarHermite{})).verdict);
}

TEST(VerifyEigen, EigenAlgebraContainsSymmetricSpace) {
  const auto w = make_family(Hermite31{1.0});
  const auto sym = find_operator_basis(w, 2);
  const auto eig = eigen_operator_space(monic_sequence(w, 12), 2);
  EXPECT_GE(eig.basis.size(), sym.size());
  const auto seq = monic_sequence(w, 10);
  for (const auto& d : sym) EXPECT_TRUE(verify_eigen(seq, d, 1e-7).verdict);
}
