#pragma once

// The cone of weights sharing a symmetric second-order operator: admissible zeroth
// moments, the Sylvester moment recursion, reconstruction of (gamma, zeta), and the
// Fourier-transform / moment-series cross-check.

#include <complex>
#include <numbers>
#include <vector>

#include "matorth/catalog.hpp"
#include "matorth/symmetry.hpp"

namespace matorth {

/// Basis of symmetric X with F_0 X = X F_0^T (orthonormal in the coordinates
/// x_ij, i <= j).
inline std::vector<Matrix> solve_mu0_space(const Matrix& f0, double tol = 1e-10) {
  require_square(f0, "solve_mu0_space");
  const Index n = f0.rows();
  std::vector<Matrix> sym;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      Matrix s = Matrix::Zero(n, n);
      s(i, j) = s(j, i) = 1.0;
      sym.push_back(s);
    }
  }
  Matrix a(n * n, static_cast<Index>(sym.size()));
  for (std::size_t c = 0; c < sym.size(); ++c) {
    const Matrix img = f0 * sym[c] - sym[c] * f0.transpose();
    a.col(static_cast<Index>(c)) = img.reshaped();
  }
  std::vector<Matrix> out;
  std::vector<Vector> null;
  if (a.norm() == 0.0) {
    for (std::size_t c = 0; c < sym.size(); ++c) null.push_back(Vector::Unit(a.cols(), static_cast<Index>(c)));
  } else {
    null = nullspace(a, tol);
  }
  for (const auto& v : null) {
    Matrix x = Matrix::Zero(n, n);
    for (std::size_t c = 0; c < sym.size(); ++c) x += v(static_cast<Index>(c)) * sym[c];
    out.push_back(x);
  }
  return out;
}

struct RecursionOptions {
  double tolerance = 1e-9;
  SylvesterOptions sylvester;
};

namespace detail {

/// Residuals of the three second-order moment equations at step n, each relative to
/// the largest product entering it:
///   F2^2 mu_n + F1^2 mu_{n-1} + F0^2 mu_{n-2} - (same)^T = 0                      (n >= 2)
///   2(n-1)(F2^2 mu_n + F1^2 mu_{n-1} + F0^2 mu_{n-2}) + F1^1 mu_n + F0^1 mu_{n-1}
///     + (F1^1 mu_n + F0^1 mu_{n-1})^T = 0                                          (n >= 1)
///   n(n-1)(F2^2 mu_n + ...) + n(F1^1 mu_n + F0^1 mu_{n-1}) + F0 mu_n - mu_n F0^T = 0
inline double second_order_step_residual(const DiffOperator& d, const std::vector<Matrix>& mu, int n) {
  const Index s = d.size();
  auto at = [&](int m) -> Matrix { return m < 0 ? Matrix::Zero(s, s) : mu[static_cast<std::size_t>(m)]; };
  const Matrix p22 = d.coefficient(2, 2) * at(n);
  const Matrix p21 = d.coefficient(2, 1) * at(n - 1);
  const Matrix p20 = d.coefficient(2, 0) * at(n - 2);
  const Matrix p11 = d.coefficient(1, 1) * at(n);
  const Matrix p10 = d.coefficient(1, 0) * at(n - 1);
  const Matrix p00 = d.coefficient(0, 0) * at(n);
  const double big2 = std::max({p22.norm(), p21.norm(), p20.norm()});
  const double big1 = std::max(p11.norm(), p10.norm());
  const Matrix b2 = p22 + p21 + p20;
  const Matrix b1 = p11 + p10;
  double worst = 0.0;
  auto rel = [&](const Matrix& r, double scale) {
    if (scale > 0.0) worst = std::max(worst, r.norm() / scale);
  };
  if (n >= 2) rel(b2 - b2.transpose(), big2);
  if (n >= 1) rel(2.0 * (n - 1) * b2 + b1 + b1.transpose(), std::max(2.0 * std::abs(n - 1.0) * big2, big1));
  rel(n * (n - 1.0) * b2 + n * b1 + p00 - p00.transpose(),
      std::max({n * std::abs(n - 1.0) * big2, n * big1, p00.norm()}));
  return worst;
}

}  // namespace detail

/// Moments generated from mu_0 by
///   L_n mu_n + mu_n L_n^T = ((1-n)F1^2 - F0^1) mu_{n-1} + mu_{n-1}(...)^T
///                          + (1-n)(F0^2 mu_{n-2} + mu_{n-2} (F0^2)^T),
/// L_n = (n-1) F2^2 + F1^1; every step is checked against the raw equations.
inline MomentSequence moment_recursion(const DiffOperator& d, const Matrix& mu0, int n_max,
                                       const RecursionOptions& opts = {}) {
  if (d.order() != 2) throw DomainError("moment_recursion: operator must have order 2");
  if (mu0.rows() != d.size() || mu0.cols() != d.size()) throw SizeMismatch("moment_recursion: mu_0 size");
  std::vector<Matrix> mu{mu0};
  const double r0 = detail::second_order_step_residual(d, mu, 0);
  if (r0 > opts.tolerance) throw Inconsistent(0, r0);
  const Matrix f22 = d.coefficient(2, 2);
  const Matrix f21 = d.coefficient(2, 1);
  const Matrix f20 = d.coefficient(2, 0);
  const Matrix f11 = d.coefficient(1, 1);
  const Matrix f10 = d.coefficient(1, 0);
  for (int n = 1; n <= n_max; ++n) {
    const Matrix lam = (n - 1.0) * f22 + f11;
    const Matrix g = (1.0 - n) * f21 - f10;
    Matrix rhs = g * mu[n - 1] + mu[n - 1] * g.transpose();
    if (n >= 2) rhs += (1.0 - n) * (f20 * mu[n - 2] + mu[n - 2] * f20.transpose());
    Matrix next;
    try {
      next = solve_sylvester(lam, lam.transpose(), rhs, opts.sylvester);
    } catch (const SharedSpectrum& e) {
      throw SharedSpectrum(e.gap(), n);
    }
    mu.push_back(next);
    const double r = detail::second_order_step_residual(d, mu, n);
    if (r > opts.tolerance) throw Inconsistent(n, r);
  }
  return MomentSequence(std::move(mu));
}

struct ConeDecomposition {
  double gamma = 0.0;
  double zeta = 0.0;
  double mu0_residual = 0.0;        // of the least-squares fit of mu_0
  double match_residual = 0.0;      // max_n relative deviation of the moments
  double symmetry_residual = 0.0;   // moment equations of the candidate for D
  bool is_weight = false;           // gamma > 0 and zeta >= 0
};

/// Fits candidate mu_0 = gamma mu_0(W_ref) + zeta M and compares every moment with
/// gamma mu_n(W_ref) + zeta t0^n M.
inline ConeDecomposition cone_reconstruct(const DiffOperator& d, const MomentSequence& candidate,
                                          const WeightMatrix& w_ref, double t0, const Matrix& m,
                                          double span_tol = 1e-8) {
  const int n_max = candidate.max_order();
  const auto ref = moments(w_ref, n_max);
  Matrix a(m.size(), 2);
  a.col(0) = ref[0].reshaped();
  a.col(1) = m.reshaped();
  const Vector b = candidate[0].reshaped();
  const Vector coef = a.colPivHouseholderQr().solve(b);
  ConeDecomposition out;
  out.gamma = coef(0);
  out.zeta = coef(1);
  out.mu0_residual = (a * coef - b).norm() / std::max(b.norm(), 1e-300);
  if (out.mu0_residual > span_tol) {
    throw DomainError("cone_reconstruct: mu_0 lies outside span{mu_0(W), M}");
  }
  for (int n = 0; n <= n_max; ++n) {
    const double p = std::pow(t0, n);
    const Matrix model = out.gamma * ref[n] + out.zeta * p * m;
    const double scale = std::max({candidate[n].norm(), std::abs(out.gamma) * ref[n].norm(),
                                   std::abs(out.zeta * p) * m.norm()});
    if (scale > 0.0) out.match_residual = std::max(out.match_residual, (candidate[n] - model).norm() / scale);
  }
  if (n_max >= d.order()) {
    out.symmetry_residual = moment_equation_residual(candidate, d, n_max).max_residual;
  }
  out.is_weight = out.gamma > 0.0 && out.zeta >= 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Fourier transform and growth

using ComplexMatrix = Eigen::MatrixXcd;

/// Tr(mu_{2m}) r^{2m} / (2m)! for 2m <= n_max.
inline std::vector<double> growth_sequence(const MomentSequence& mu, double r) {
  std::vector<double> g;
  double log_fact = 0.0;
  for (int m = 0; 2 * m <= mu.max_order(); ++m) {
    if (m > 0) log_fact += std::log(2.0 * m) + std::log(2.0 * m - 1.0);
    const double tr = mu[2 * m].trace();
    g.push_back(r == 0.0 ? (m == 0 ? tr : 0.0) : tr * std::exp(2.0 * m * std::log(r) - log_fact));
  }
  return g;
}

/// True when the sequence is non-increasing from its maximum on.
inline bool decays_beyond_peak(const std::vector<double>& g) {
  if (g.empty()) return true;
  const auto peak = std::max_element(g.begin(), g.end());
  for (auto it = peak; it + 1 != g.end(); ++it) {
    if (*(it + 1) > *it) return false;
  }
  return true;
}

struct FourierCheck {
  ComplexMatrix closed_form;
  ComplexMatrix series;
  double deviation = 0.0;
  std::vector<double> growth;
  bool decays = true;
};

/// Closed form of int e^{itx} dW(t) for gamma W_a + zeta delta_{t0} M:
///   gamma sqrt(pi) e^{-x^2/4} [[1 + a^2(2 - x^2)/4, a i x/2], [a i x/2, 1]] + zeta e^{i t0 x} M,
/// against the truncated series sum_n mu_n (ix)^n / n!.
inline FourierCheck fourier_check(double a, double gamma, double zeta, double x, int terms,
                                  double t0 = 0.0, Branch branch = Branch::plus) {
  if (std::abs(x) > 2.0) throw DomainError("fourier_check: need |x| <= 2");
  if (terms < 1 || terms > 80) throw DomainError("fourier_check: need 1 <= terms <= 80");
  using C = std::complex<double>;
  const Family fam = Hermite31{a};
  const Matrix m = catalog_mass(fam, t0, branch);
  const auto w = make_family(fam).with_atom(t0, m, gamma, zeta, true);
  const auto mu = moments(w, terms - 1, 80);
  FourierCheck out;
  const double g = gamma * std::sqrt(std::numbers::pi) * std::exp(-x * x / 4.0);
  out.closed_form = ComplexMatrix(2, 2);
  out.closed_form << g * (1.0 + a * a * (2.0 - x * x) / 4.0), C(0.0, g * a * x / 2.0),
      C(0.0, g * a * x / 2.0), g;
  out.closed_form += zeta * std::exp(C(0.0, t0 * x)) * m.cast<C>();
  out.series = ComplexMatrix::Zero(2, 2);
  C factor(1.0, 0.0);
  for (int n = 0; n < terms; ++n) {
    if (n > 0) factor *= C(0.0, x) / static_cast<double>(n);
    out.series += factor * mu[n].cast<C>();
  }
  out.deviation = (out.closed_form - out.series).cwiseAbs().maxCoeff();
  out.growth = growth_sequence(mu, std::abs(x));
  out.decays = decays_beyond_peak(out.growth);
  return out;
}

}  // namespace matorth
