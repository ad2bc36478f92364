#pragma once

// Closed-form operator / mass pairs for the example families, plus the classical
// scalar operators.

#include <cmath>
#include <string>

#include "matorth/diffop.hpp"
#include "matorth/weights.hpp"

namespace matorth {

/// Sign of the square root selecting the mass M(t0).
enum class Branch { plus, minus };

/// How the Jacobi-type instance treats (1 - t0) / phi at the point where phi = 0:
/// `printed` sets it to 1, `continuous` uses its limit 2.
enum class LimitRule { printed, continuous };

inline Branch opposite(Branch b) { return b == Branch::plus ? Branch::minus : Branch::plus; }
inline double sign_of(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
inline std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }
inline std::string to_string(LimitRule r) { return r == LimitRule::printed ? "printed" : "continuous"; }

/// xi = (a t0 +- sqrt(4 + a^2 t0^2)) / 2
inline double xi_root(double a, double t0, Branch b) {
  return 0.5 * (a * t0 + sign_of(b) * std::sqrt(4.0 + a * a * t0 * t0));
}

/// phi = ((a^2+1)(t0+alpha) - a^2 + 1 +- sqrt((a^2+1)(a^2(t0-alpha-1)^2 + (t0+alpha+1)^2))) / (2a)
inline double phi_root(double a, double alpha, double t0, Branch b) {
  const double a2 = a * a;
  const double disc = (a2 + 1.0) * (a2 * std::pow(t0 - alpha - 1.0, 2) + std::pow(t0 + alpha + 1.0, 2));
  return 0.5 * ((a2 + 1.0) * (t0 + alpha) - a2 + 1.0 + sign_of(b) * std::sqrt(disc)) / a;
}

/// varphi = (2 - t0 +- sqrt(2 t0^2 - 2 t0 + 1)) / (t0 + 3)
inline double varphi_root(double t0, Branch b) {
  if (t0 == -3.0) throw ExcludedPoint("jacobi33: t0 = -3 is excluded");
  return (2.0 - t0 + sign_of(b) * std::sqrt(2.0 * t0 * t0 - 2.0 * t0 + 1.0)) / (t0 + 3.0);
}

namespace detail {

inline Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix rank_one(const Vector& v) { return v * v.transpose(); }

}  // namespace detail

/// Operator for the Hermite-type weight with root x in its coefficients.
inline DiffOperator hermite31_operator(double a, double t0, double x) {
  using detail::m2;
  const double a2 = a * a;
  const MatrixPolynomial f2({m2(-x + a * t0, -1, -1, -x), m2(-a, -a2 * t0, 0, a), m2(0, a2, 0, 0)});
  const MatrixPolynomial f1(
      {m2(-2 * a, -2 * t0 - 2 * a * x, 2 * t0, 0), m2(2 * x, 2 * (2 + a2), 0, 2 * (x - a * t0))});
  const MatrixPolynomial f0({m2(x + 2 * t0 / a, 2 * (2 + a2) / a2, 4 / a2, -x - 2 * t0 / a)});
  return DiffOperator({f0, f1, f2});
}

/// Operator for the Laguerre-type weight with root p in its coefficients.
inline DiffOperator laguerre32_operator(double a, double alpha, double t0, double p) {
  using detail::m2;
  const double a2 = a * a;
  const double s = t0 + alpha + 1.0;
  const MatrixPolynomial f2({m2(a * t0, a2 * t0, -t0, -a * t0),
                             m2(p - (1 + (alpha + t0) * (1 + a2)) / a, -s * (1 + a2), 0, p + a),
                             m2(0, (1 + a2) * (1 + alpha), 0, 0)});
  const Matrix f1c = m2(-a * (3 * t0 - 2 + (alpha + 1) * (alpha + 1)) + (alpha + 3) * (p - s / a),
                        2 * a * p - (1 + a2) * (alpha * alpha + 2 * t0 + 3 * alpha) +
                            alpha * t0 * (a2 - 1) - (t0 + alpha + 3),
                        t0 - alpha - 1, p * (alpha + 1) - a * alpha * t0);
  const Matrix f1t = m2(-p + a * (t0 - 1) + s / a,
                        (1 + a2) * (alpha * alpha + 3 * alpha - t0 * alpha + 2) + 2 * (alpha + 1),
                        0, -p + a * alpha);
  const double c = (1 + alpha) / (1 + a2);
  const double d = -p / 2 + a * (t0 - 1) / 2 + (alpha + 2) * s / (2 * a) - a * c;
  const MatrixPolynomial f0(
      {m2(d, 1 + a * alpha * p - alpha * (t0 - 1) * (a2 + alpha + 2) + c, c, -d)});
  return DiffOperator({f0, MatrixPolynomial({f1c, f1t}), f2});
}

/// (1 - t0) / varphi, with the limit rule applied where varphi vanishes.
inline double jacobi33_ratio(double t0, double phi, LimitRule rule) {
  if (std::abs(phi) <= 1e-14) return rule == LimitRule::printed ? 1.0 : 2.0;
  return (1.0 - t0) / phi;
}

/// Operator for the Jacobi-type weight (alpha = beta = 0, k = 1/2) with root phi.
inline DiffOperator jacobi33_operator(double t0, double phi, LimitRule rule) {
  using detail::m2;
  if (t0 == -3.0) throw ExcludedPoint("jacobi33: t0 = -3 is excluded");
  const double r = jacobi33_ratio(t0, phi, rule);
  const MatrixPolynomial f2({m2(-t0, t0, -t0, t0), m2(3 * t0 - 3 + r, 2 - 2 * t0, 2 * t0, -1 - t0 + r),
                             m2(-(2 * t0 - 3) - r, -t0, -t0, 1 - r)});
  const MatrixPolynomial f1({m2(-10 + 8 * t0 + 3 * r, 9 - 8 * t0 - 2 * r, -(1 - 4 * t0), -4 * t0 + r),
                             m2(12 - 8 * t0 - 4 * r, -1 - 4 * t0, 1 - 4 * t0, 4 - 4 * r)});
  const double d = r * (1 + 2 * phi) / 2;
  const MatrixPolynomial f0({m2(d, -t0 - 3 + r / 2, -t0 + r / 2, -d)});
  return DiffOperator({f0, f1, f2});
}

namespace detail {

inline Matrix general34_y(int n, const std::vector<double>& nu) {
  Matrix y = Matrix::Zero(n, n);
  for (int i = 1; i <= n - 1; ++i) y(i, i - 1) = i * (n - i) / nu[static_cast<std::size_t>(i - 1)];
  return y;
}

}  // namespace detail

/// First operator of the arbitrary-size family:
/// d^2 tI + d^1 [(alpha+1)I + J + t(A - I)] + d^0 [(J + alpha I)A - J].
inline DiffOperator general34_d1(const General34& p) {
  const auto [j, a] = detail::general34_ja(p.n, p.nu);
  const Matrix id = Matrix::Identity(p.n, p.n);
  const Matrix z = Matrix::Zero(p.n, p.n);
  return DiffOperator({MatrixPolynomial({(j + p.alpha * id) * a - j}),
                       MatrixPolynomial({(p.alpha + 1) * id + j, a - id}),
                       MatrixPolynomial({z, id})});
}

/// Second operator, valid on the nu-chain:
/// G_2 = t(J - At), G_1 = ((1+alpha)I + J)J + Y - t(J + (alpha+2)A + Y^T - AY + YA),
/// G_0 = (N-1)/nu_{N-1}^2 [J - (alpha I + J)A].
inline DiffOperator general34_d2(const General34& p) {
  const auto [j, a] = detail::general34_ja(p.n, p.nu);
  const Matrix id = Matrix::Identity(p.n, p.n);
  const Matrix z = Matrix::Zero(p.n, p.n);
  const Matrix y = detail::general34_y(p.n, p.nu);
  const double v2 = p.nu.back() * p.nu.back();
  return DiffOperator(
      {MatrixPolynomial({(p.n - 1) / v2 * (j - (p.alpha * id + j) * a)}),
       MatrixPolynomial({((1 + p.alpha) * id + j) * j + y,
                         -(j + (p.alpha + 2) * a + y.transpose() - a * y + y * a)}),
       MatrixPolynomial({z, j, -a})});
}

/// D = -(N-1) D_1 + D_2 from its expanded coefficients.
inline DiffOperator general34_operator(const General34& p) {
  const int n = p.n;
  const auto [j, a] = detail::general34_ja(n, p.nu);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix z = Matrix::Zero(n, n);
  const Matrix y = detail::general34_y(n, p.nu);
  Matrix diag = Matrix::Zero(n, n);
  for (int i = 1; i <= n; ++i) diag(i - 1, i - 1) = (i - 1) * (p.alpha + n - i + 1);
  const double v2 = p.nu.back() * p.nu.back();
  return DiffOperator(
      {MatrixPolynomial({(n - 1) * (1 + v2) / v2 * (j - (p.alpha * id + j) * a)}),
       MatrixPolynomial({y - diag, j - (p.alpha + n + 1) * a - y.transpose()}),
       MatrixPolynomial({z, -(n - 1) * id + j, -a})});
}

/// v_j = prod_{k=1}^{N-j} nu_{N-k}(alpha+k)/k for j < N, v_N = 1.
inline Vector general34_vector(const General34& p) {
  Vector v(p.n);
  for (int jj = 1; jj <= p.n; ++jj) {
    double prod = 1.0;
    for (int k = 1; k <= p.n - jj; ++k) prod *= p.nu[static_cast<std::size_t>(p.n - k - 1)] * (p.alpha + k) / k;
    v(jj - 1) = prod;
  }
  return v;
}

struct CatalogEntry {
  DiffOperator op;
  Matrix mass;
  double t0;
  Branch branch;
};

/// Root sign used in the operator coefficients for a given mass branch. The
/// Hermite-type display pairs opposite signs; the Laguerre- and Jacobi-type pair
/// equal signs (fixed by the mass conditions).
inline Branch operator_branch(const Family& f, Branch mass_branch) {
  return std::holds_alternative<Hermite31>(f) ? opposite(mass_branch) : mass_branch;
}

/// Operator of a family at t0 with the given root sign in its coefficients.
inline DiffOperator catalog_operator(const Family& f, double t0, Branch operator_root,
                                     LimitRule rule = LimitRule::printed) {
  validate_family(f);
  if (const auto* p = std::get_if<Hermite31>(&f)) {
    return hermite31_operator(p->a, t0, xi_root(p->a, t0, operator_root));
  }
  if (const auto* p = std::get_if<Laguerre32>(&f)) {
    return laguerre32_operator(p->a, p->alpha, t0, phi_root(p->a, p->alpha, t0, operator_root));
  }
  if (const auto* p = std::get_if<Jacobi33>(&f)) {
    if (p->alpha != 0.0 || p->beta != 0.0 || p->k != 0.5) {
      throw DomainError("jacobi33: closed form only for alpha = beta = 0, k = 1/2; use the numeric finder");
    }
    return jacobi33_operator(t0, varphi_root(t0, operator_root), rule);
  }
  if (const auto* p = std::get_if<General34>(&f)) {
    if (t0 != 0.0) throw DomainError("general34: the mass sits at t0 = 0");
    for (double r : nu_chain_residuals(p->nu)) {
      if (r > 1e-12) throw DomainError("general34: parameters violate the nu-chain condition");
    }
    return general34_operator(*p);
  }
  throw DomainError("catalog: no closed form for " + family_name(f));
}

inline Matrix catalog_mass(const Family& f, double t0, Branch mass_root) {
  validate_family(f);
  Vector v(2);
  if (const auto* p = std::get_if<Hermite31>(&f)) {
    const double x = xi_root(p->a, t0, mass_root);
    v << x, 1.0;
    return detail::rank_one(v);
  }
  if (const auto* p = std::get_if<Laguerre32>(&f)) {
    const double x = phi_root(p->a, p->alpha, t0, mass_root);
    v << x, 1.0;
    return detail::rank_one(v);
  }
  if (std::holds_alternative<Jacobi33>(f)) {
    v << 1.0, varphi_root(t0, mass_root);
    return detail::rank_one(v);
  }
  if (const auto* p = std::get_if<General34>(&f)) {
    if (t0 != 0.0) throw DomainError("general34: the mass sits at t0 = 0");
    return detail::rank_one(general34_vector(*p));
  }
  throw DomainError("catalog: no closed form for " + family_name(f));
}

/// Operator and mass at t0 with the canonical root pairing.
inline CatalogEntry catalog(const Family& f, double t0, Branch branch = Branch::plus,
                            LimitRule rule = LimitRule::printed) {
  return {catalog_operator(f, t0, operator_branch(f, branch), rule), catalog_mass(f, t0, branch), t0,
          branch};
}

/// Classical second-order operator of a scalar family.
inline DiffOperator classical_operator(const Family& f) {
  auto c = [](std::vector<double> v) {
    std::vector<Matrix> m;
    for (double x : v) m.push_back(Matrix::Constant(1, 1, x));
    return MatrixPolynomial(m);
  };
  if (std::holds_alternative<ScalarHermite>(f)) {
    return DiffOperator({MatrixPolynomial(Index{1}), c({0.0, -2.0}), c({1.0})});
  }
  if (const auto* p = std::get_if<ScalarLaguerre>(&f)) {
    return DiffOperator({MatrixPolynomial(Index{1}), c({p->alpha + 1.0, -1.0}), c({0.0, 1.0})});
  }
  if (const auto* p = std::get_if<ScalarJacobi>(&f)) {
    return DiffOperator({MatrixPolynomial(Index{1}),
                         c({p->alpha + 1.0, -(p->alpha + p->beta + 2.0)}), c({0.0, 1.0, -1.0})});
  }
  throw DomainError("classical_operator: not a scalar family");
}

}  // namespace matorth
