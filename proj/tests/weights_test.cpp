#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "matorth/quadrature.hpp"
#include "oracles.hpp"

using namespace matorth;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

std::vector<Family> three_points_each() {
  return {
      Hermite31{0.5},          Hermite31{1.0},          Hermite31{2.0},
      Laguerre32{1.0, 0.0},    Laguerre32{0.5, 1.5},    Laguerre32{-2.0, -0.5},
      Jacobi33{0.0, 0.0, 0.5}, Jacobi33{1.5, 0.5, 1.2}, Jacobi33{-0.5, 2.0, 0.3},
      General34{2, 0.5, {1.5}}, General34{3, 0.0, nu_chain_solve(3, 1.0)},
      General34{4, 1.0, nu_chain_solve(4, 2.0)},
      ScalarHermite{},          ScalarLaguerre{0.3},     ScalarJacobi{1.0, 2.5},
  };
}

}  // namespace

TEST(Families, Hermite31AtZeroIsIdentity) {
  EXPECT_EQ(make_family(Hermite31{1.0}).density(0.0), Matrix::Identity(2, 2));
}

TEST(Families, Hermite31AtOne) {
  EXPECT_LT((make_family(Hermite31{1.0}).density(1.0) - std::exp(-1.0) * mat2(2, 1, 1, 1)).norm(), 1e-15);
}

TEST(Families, General34SizeTwoMatchesDisplayedDensity) {
  const double a = 1.7;
  const double alpha = 0.4;
  const auto w = make_family(General34{2, alpha, {a}});
  for (double t : {0.3, 1.0, 2.5, 4.0}) {
    const Matrix expected = std::pow(t, alpha) * std::exp(-t) * mat2(t * (1 + a * a * t), a * t, a * t, 1);
    EXPECT_LT(oracle::rel(w.density(t), expected), 1e-14);
  }
}

TEST(Families, DomainViolations) {
  EXPECT_THROW(make_family(Hermite31{0.0}), DomainError);
  EXPECT_THROW(make_family(Laguerre32{1.0, -1.0}), DomainError);
  EXPECT_THROW(make_family(Jacobi33{0.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(make_family(Jacobi33{0.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(make_family(General34{3, 0.0, {1.0, 0.0}}), DomainError);
  EXPECT_THROW(make_family(General34{3, 0.0, {1.0}}), DomainError);
}

TEST(NuChain, SizeTwoHasNoConstraint) {
  EXPECT_EQ(nu_chain_solve(2, 0.7), std::vector<double>{0.7});
}

TEST(NuChain, SizeThree) {
  const auto nu = nu_chain_solve(3, 1.0);
  ASSERT_EQ(nu.size(), 2u);
  EXPECT_NEAR(nu[0], std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(NuChain, SizeFourResiduals) {
  for (double r : nu_chain_residuals(nu_chain_solve(4, 2.0))) EXPECT_LT(r, 1e-14);
}

TEST(Moments, Hermite31LowOrders) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto w = make_family(Hermite31{a});
    EXPECT_LT(oracle::rel(moment(w, 0), mat2(kSqrtPi * (1 + a * a / 2), 0, 0, kSqrtPi)), 1e-15);
    EXPECT_LT(oracle::rel(moment(w, 1), mat2(0, a * kSqrtPi / 2, a * kSqrtPi / 2, 0)), 1e-15);
  }
}

TEST(Moments, Hermite31ClosedFormAndParity) {
  const auto w = make_family(Hermite31{1.3});
  for (int n = 0; n <= 30; ++n) {
    const Matrix mu = moment(w, n);
    EXPECT_LT(oracle::rel(mu, oracle::hermite31_moment(1.3, n)), 1e-14) << n;
    if (n % 2) {
      EXPECT_EQ(mu(0, 0), 0.0);
      EXPECT_EQ(mu(1, 1), 0.0);
    } else {
      EXPECT_EQ(mu(0, 1), 0.0);
      EXPECT_EQ(mu(1, 0), 0.0);
    }
  }
}

TEST(Moments, Laguerre32ClosedForm) {
  for (auto [a, alpha] : {std::pair{1.0, 0.0}, {0.5, 1.5}, {-2.0, -0.5}}) {
    const auto w = make_family(Laguerre32{a, alpha});
    for (int n = 0; n <= 20; ++n) {
      EXPECT_LT(oracle::rel(moment(w, n), oracle::laguerre32_moment(a, alpha, n)), 1e-13) << n;
    }
  }
}

TEST(Moments, Jacobi33ZeroOrderBetaIntegral) {
  // int_0^1 [[t^2/2 + 1/2, (1-t)/2], [(1-t)/2, (1-t)^2/2]] dt
  const Matrix expected = mat2(2.0 / 3.0, 0.25, 0.25, 1.0 / 6.0);
  const auto w = make_family(Jacobi33{0.0, 0.0, 0.5});
  EXPECT_LT(oracle::rel(moment(w, 0), expected), 1e-15);
  EXPECT_LT(oracle::rel(moment_quadrature_oracle(w, 0, 8), expected), 1e-12);
}

TEST(Moments, JacobiKernelAgainstStdBeta) {
  for (auto [al, be] : {std::pair{0.0, 0.0}, {1.5, 0.5}, {-0.5, 2.0}}) {
    for (int r = 0; r <= 25; ++r) {
      const double ref = std::beta(r + al + 1.0, be + 1.0);
      EXPECT_NEAR(kernel_moment(Kernel::jacobi_beta, al, be, r) / ref, 1.0, 1e-13);
    }
  }
}

TEST(Moments, SymmetricAndPositiveDefiniteAtZero) {
  for (const auto& f : three_points_each()) {
    const auto mu = moments(make_family(f), 20);
    EXPECT_LT(mu.max_asymmetry(), 1e-12) << family_name(f);
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(mu[0]).eigenvalues().minCoeff();
    EXPECT_GT(lmin, 1e-6 * mu[0].norm()) << family_name(f);
  }
}

TEST(Moments, ScalarHermiteQuadrature) {
  const auto w = make_family(ScalarHermite{});
  EXPECT_NEAR(moment_quadrature_oracle(w, 0, 10)(0, 0), kSqrtPi, 1e-12);
}

TEST(Moments, ClosedFormAgreesWithQuadrature) {
  for (const auto& f : three_points_each()) {
    const auto w = make_family(f);
    for (int n = 0; n <= 20; ++n) {
      const Matrix q = moment_quadrature_oracle(w, n, 40);
      const Matrix mu = moment(w, n);
      const double scale = std::max(mu.norm(), moment_magnitude(w, n).norm());
      EXPECT_LT((mu - q).norm() / scale, 1e-10) << family_name(f) << " n = " << n;
    }
  }
}

TEST(Moments, QuadratureRejectsTooFewNodes) {
  EXPECT_THROW(moment_quadrature_oracle(make_family(Hermite31{1.0}), 20, 5), DomainError);
}

TEST(Moments, LinearInTheWeight) {
  const auto w1 = make_family(Hermite31{1.0});
  const auto w2 = WeightMatrix::atoms_only(2).with_atom(0.5, mat2(1, 1, 1, 1));
  const auto w = WeightMatrix::combine(w1, 2.5, w2, 0.75);
  for (int n = 0; n <= 15; ++n) {
    EXPECT_LT(oracle::rel(moment(w, n), 2.5 * moment(w1, n) + 0.75 * moment(w2, n)), 1e-15);
  }
}

TEST(Moments, MissingOrderThrows) {
  const auto mu = moments(make_family(Hermite31{1.0}), 4);
  EXPECT_THROW(mu[5], MissingMoments);
}

TEST(Moments, LaguerreDivergence) {
  EXPECT_THROW(kernel_moment(Kernel::laguerre_exp, -1.5, 0.0, 0), DivergentMoment);
}

TEST(WithAtom, ZetaZeroOnlyScales) {
  const auto w = make_family(Hermite31{1.0});
  const auto v = w.with_atom(0.3, mat2(1, 1, 1, 1), 2.0, 0.0);
  for (int n = 0; n <= 10; ++n) EXPECT_LT(oracle::rel(moment(v, n), 2.0 * moment(w, n)), 1e-15);
}

TEST(WithAtom, AtOriginOnlyZerothMomentChanges) {
  const auto w = make_family(Laguerre32{1.0, 0.5});
  const Matrix m = mat2(4, 2, 2, 1);
  const auto v = w.with_atom(0.0, m, 1.5, 3.0);
  EXPECT_LT(oracle::rel(moment(v, 0), 1.5 * moment(w, 0) + 3.0 * m), 1e-15);
  for (int n = 1; n <= 10; ++n) EXPECT_LT(oracle::rel(moment(v, n), 1.5 * moment(w, n)), 1e-15);
}

TEST(WithAtom, HermiteIntroWeightKeepsFirstMoment) {
  const auto w = make_family(Hermite31{1.0});
  const auto v = w.with_atom(0.0, mat2(1, 1, 1, 1), 1.0, 1.0);
  EXPECT_EQ(moment(v, 1), moment(w, 1));
}

TEST(WithAtom, GeneralLocationAddsPowers) {
  const auto w = make_family(Hermite31{2.0});
  const Matrix m = mat2(1, -1, -1, 1);
  const auto v = w.with_atom(-1.3, m, 0.5, 2.0);
  for (int n = 0; n <= 12; ++n) {
    EXPECT_LT(oracle::rel(moment(v, n), 0.5 * moment(w, n) + 2.0 * std::pow(-1.3, n) * m), 1e-14);
  }
}

TEST(WithAtom, RejectsIndefiniteMass) {
  const auto w = make_family(Hermite31{1.0});
  EXPECT_THROW(w.with_atom(0.0, mat2(1, 2, 2, 1)), NotPSD);
  EXPECT_NO_THROW(w.with_atom(0.0, mat2(1, 2, 2, 1), 1.0, -1.0, true));
}
