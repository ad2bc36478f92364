#pragma once

// Monic orthogonal matrix polynomials built from moments, their norms and
// three-term recurrence, and eigenfunction verification against an operator.

#include <limits>
#include <vector>

#include "matorth/diffop.hpp"
#include "matorth/weights.hpp"

namespace matorth {

inline constexpr double kHankelConditionLimit = 1e12;

/// <P, Q> = sum_ij P_i mu_{i+j} Q_j^T
inline Matrix inner_product(const MatrixPolynomial& p, const MomentSequence& mu,
                            const MatrixPolynomial& q) {
  if (p.size() != mu.size() || q.size() != mu.size()) throw SizeMismatch("inner_product");
  Matrix out = Matrix::Zero(mu.size(), mu.size());
  for (int i = 0; i <= p.degree(); ++i) {
    for (int j = 0; j <= q.degree(); ++j) out += p.coeff(i) * mu[i + j] * q.coeff(j).transpose();
  }
  return out;
}

inline Matrix inner_product(const MatrixPolynomial& p, const WeightMatrix& w,
                            const MatrixPolynomial& q) {
  return inner_product(p, moments(w, std::max(0, p.degree() + q.degree())), q);
}

struct OrthoSequence {
  std::vector<MatrixPolynomial> polys;  // P_0 .. P_n, monic
  std::vector<Matrix> norms;            // Delta_n = <P_n, P_n>
  std::vector<double> condition;        // equilibrated Hankel condition per degree

  int max_degree() const { return static_cast<int>(polys.size()) - 1; }
};

/// P_n = t^n I + sum_{j<n} C_j t^j with <P_n, t^m I> = 0 for m < n. Solved degree by
/// degree on the diagonally equilibrated block Hankel matrix [mu_{j+m}].
inline OrthoSequence monic_sequence(const MomentSequence& mu, int n_max,
                                    double condition_limit = kHankelConditionLimit) {
  if (mu.max_order() < 2 * n_max) {
    throw MissingMoments("monic_sequence: need moments up to " + std::to_string(2 * n_max));
  }
  const Index s = mu.size();
  OrthoSequence out;
  const Matrix id = Matrix::Identity(s, s);
  out.polys.push_back(MatrixPolynomial::constant(id));
  out.norms.push_back(mu[0]);
  out.condition.push_back(0.0);
  for (int n = 1; n <= n_max; ++n) {
    const Index dim = n * s;
    Matrix h(dim, dim);
    Matrix rhs(dim, s);
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) h.block(j * s, m * s, s, s) = mu[j + m];
      rhs.block(j * s, 0, s, s) = -mu[n + j];
    }
    const Vector d = h.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse();
    const Matrix hs = d.asDiagonal() * h * d.asDiagonal();
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (hs + hs.transpose()), Eigen::EigenvaluesOnly)
            .eigenvalues();
    const double cond = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff()
                                            : std::numeric_limits<double>::infinity();
    if (!(cond < condition_limit)) throw IllConditionedMoments(n, cond);
    // Rows of [C_0 ... C_{n-1}] solve C H = -[mu_n ... mu_{2n-1}]; H is symmetric.
    const Matrix y = hs.ldlt().solve(d.asDiagonal() * rhs);
    const Matrix x = d.asDiagonal() * y;
    std::vector<Matrix> coeffs;
    for (int j = 0; j < n; ++j) coeffs.push_back(x.block(j * s, 0, s, s).transpose());
    coeffs.push_back(id);
    MatrixPolynomial p(coeffs);
    Matrix delta = mu[2 * n];
    for (int j = 0; j < n; ++j) delta += coeffs[j] * mu[j + n];
    out.polys.push_back(std::move(p));
    out.norms.push_back(delta);
    out.condition.push_back(cond);
  }
  return out;
}

inline OrthoSequence monic_sequence(const WeightMatrix& w, int n_max,
                                    double condition_limit = kHankelConditionLimit) {
  return monic_sequence(moments(w, 2 * n_max + 2), n_max, condition_limit);
}

/// Largest coefficient entry in absolute value.
inline double coeff_max_abs(const MatrixPolynomial& p) {
  double m = 0.0;
  for (const auto& c : p.coeffs()) m = std::max(m, max_abs(c));
  return m;
}

struct RecurrenceCoeffs {
  std::vector<Matrix> e;  // E_0 .. E_{n-1}
  std::vector<Matrix> f;  // F_0 (zero) .. F_{n-1}
  std::vector<double> residual;
  double max_residual = 0.0;
};

/// t P_n = P_{n+1} + E_n P_n + F_n P_{n-1}, E_n = <tP_n, P_n> Delta_n^{-1},
/// F_n = <tP_n, P_{n-1}> Delta_{n-1}^{-1}; residuals coefficientwise and relative.
inline RecurrenceCoeffs recurrence_coeffs(const OrthoSequence& seq, const MomentSequence& mu) {
  RecurrenceCoeffs out;
  const Index s = mu.size();
  const auto t = MatrixPolynomial::monomial(s, 1);
  for (int n = 0; n < seq.max_degree(); ++n) {
    const MatrixPolynomial tp = t * seq.polys[n];
    const Matrix e = inner_product(tp, mu, seq.polys[n]) * seq.norms[n].inverse();
    Matrix f = Matrix::Zero(s, s);
    MatrixPolynomial rhs = seq.polys[n + 1] + e * seq.polys[n];
    if (n > 0) {
      f = inner_product(tp, mu, seq.polys[n - 1]) * seq.norms[n - 1].inverse();
      rhs = rhs + f * seq.polys[n - 1];
    }
    const double scale = std::max(coeff_max_abs(tp), coeff_max_abs(rhs));
    const double r = scale == 0.0 ? 0.0 : coeff_max_abs(tp - rhs) / scale;
    out.e.push_back(e);
    out.f.push_back(f);
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

inline RecurrenceCoeffs recurrence_coeffs(const OrthoSequence& seq, const WeightMatrix& w) {
  return recurrence_coeffs(seq, moments(w, 2 * seq.max_degree() + 2));
}

struct EigenReport {
  std::vector<Matrix> gamma;
  std::vector<double> residual;
  double max_residual = 0.0;
  double tolerance = 1e-8;
  bool verdict = true;
};

/// Residual of P_n D - Gamma_n P_n for each n, relative to the larger of the two
/// sides coefficientwise.
inline EigenReport verify_eigen(const OrthoSequence& seq, const DiffOperator& d,
                                double tolerance = 1e-8) {
  EigenReport out;
  out.tolerance = tolerance;
  for (int n = 0; n <= seq.max_degree(); ++n) {
    const MatrixPolynomial& p = seq.polys[n];
    if (p.size() != d.size()) throw SizeMismatch("verify_eigen: operator size");
    const Matrix g = operator_eigenvalue(d, n);
    const MatrixPolynomial lhs = right_apply(p, d);
    const MatrixPolynomial rhs = g * p;
    const double scale = std::max(coeff_max_abs(lhs), coeff_max_abs(rhs));
    const double r = scale == 0.0 ? 0.0 : coeff_max_abs(lhs - rhs) / scale;
    out.gamma.push_back(g);
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, r);
  }
  out.verdict = out.max_residual <= tolerance;
  return out;
}

}  // namespace matorth
