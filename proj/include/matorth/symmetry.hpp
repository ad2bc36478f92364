#pragma once

// Symmetry of right-hand-side operators with respect to weight matrices: moment
// equations, the bilinear definition, the differential and boundary forms, the
// mass-point conditions, and numeric discovery of symmetric operators and masses.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "matorth/diffop.hpp"
#include "matorth/orthopoly.hpp"
#include "matorth/weights.hpp"

namespace matorth {

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kMassTolerance = 1e-12;

/// symmetric: <PD, Q> = <P, QD>; antisymmetric: <PD, Q> = -<P, QD>.
enum class Parity { symmetric, antisymmetric };

/// B_n^l = sum_{i=0}^l F^l_{l-i} mu_{n-i}
inline Matrix b_matrix(const DiffOperator& d, const MomentSequence& mu, int n, int l) {
  if (l < 0 || l > d.order()) throw DomainError("b_matrix: l out of range");
  if (n < l) throw DomainError("b_matrix: need n >= l");
  Matrix b = Matrix::Zero(d.size(), d.size());
  for (int i = 0; i <= l; ++i) b += d.coefficient(l, l - i) * mu[n - i];
  return b;
}

struct EquationResidual {
  int l = 0;
  int n = 0;
  Matrix residual;  // LHS - RHS
  double scale = 0.0;
  double relative = 0.0;
};

struct SymmetryReport {
  std::vector<EquationResidual> table;
  double max_residual = 0.0;
  double tolerance = kSymmetryTolerance;
  int n_max = 0;
  bool verdict = true;
};

namespace detail {

/// ||F^l_j mu_{n-j}|| over the products entering B_n^l, times |c|.
inline double b_term_scale(const DiffOperator& d, const MomentSequence& mu, int n, int l, double c) {
  double s = 0.0;
  for (int i = 0; i <= l; ++i) {
    s = std::max(s, std::abs(c) * (d.coefficient(l, l - i) * mu[n - i]).norm());
  }
  return s;
}

}  // namespace detail

/// Residual matrices of
///   sum_{i=0}^{k-l} C(k-i, l) (n-l)_{k-l-i} B_n^{k-i} = (-1)^l (B_n^l)^T
/// for l = 0..k, n = l..n_max, each scaled by the largest product F mu entering it.
/// Rows are ordered by n, then l.
inline std::vector<EquationResidual> moment_equation_table(const DiffOperator& d,
                                                           const MomentSequence& mu, int n_max,
                                                           Parity parity = Parity::symmetric) {
  if (d.size() != mu.size()) throw SizeMismatch("moment equations: operator and moment sizes");
  const int k = d.order();
  if (mu.max_order() < n_max) {
    throw MissingMoments("moment equations: need moments up to " + std::to_string(n_max));
  }
  const double sign = parity == Parity::symmetric ? 1.0 : -1.0;
  std::vector<EquationResidual> table;
  for (int n = 0; n <= n_max; ++n) {
    for (int l = 0; l <= std::min(k, n); ++l) {
      EquationResidual e;
      e.l = l;
      e.n = n;
      Matrix lhs = Matrix::Zero(d.size(), d.size());
      double scale = 0.0;
      for (int i = 0; i <= k - l; ++i) {
        const double c = binomial(k - i, l) * falling_factorial(n - l, k - l - i);
        if (c == 0.0) continue;
        lhs += c * b_matrix(d, mu, n, k - i);
        scale = std::max(scale, detail::b_term_scale(d, mu, n, k - i, c));
      }
      const double rs = (l % 2 == 0 ? 1.0 : -1.0) * sign;
      e.residual = lhs - rs * b_matrix(d, mu, n, l).transpose();
      e.scale = std::max(scale, detail::b_term_scale(d, mu, n, l, 1.0));
      e.relative = e.scale == 0.0 ? 0.0 : e.residual.norm() / e.scale;
      table.push_back(std::move(e));
    }
  }
  return table;
}

inline SymmetryReport summarize(std::vector<EquationResidual> table, int n_max, double tolerance) {
  SymmetryReport r;
  r.table = std::move(table);
  r.tolerance = tolerance;
  r.n_max = n_max;
  for (const auto& e : r.table) r.max_residual = std::max(r.max_residual, e.relative);
  r.verdict = r.max_residual <= tolerance;
  return r;
}

inline SymmetryReport moment_equation_residual(const MomentSequence& mu, const DiffOperator& d,
                                               int n_max, double tolerance = kSymmetryTolerance,
                                               Parity parity = Parity::symmetric) {
  if (n_max < d.order()) throw DomainError("moment_equation_residual: need n_max >= k");
  return summarize(moment_equation_table(d, mu, n_max, parity), n_max, tolerance);
}

inline SymmetryReport moment_equation_residual(const WeightMatrix& w, const DiffOperator& d,
                                               int n_max, double tolerance = kSymmetryTolerance,
                                               Parity parity = Parity::symmetric) {
  return moment_equation_residual(moments(w, n_max), d, n_max, tolerance, parity);
}

/// max over (l, n) of ||R_a - R_b|| / max(scale_a, scale_b).
inline double table_agreement(const std::vector<EquationResidual>& a,
                              const std::vector<EquationResidual>& b) {
  if (a.size() != b.size()) throw SizeMismatch("table_agreement: table sizes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].l != b[i].l || a[i].n != b[i].n) throw SizeMismatch("table_agreement: index mismatch");
    const double s = std::max(a[i].scale, b[i].scale);
    if (s > 0.0) worst = std::max(worst, (a[i].residual - b[i].residual).norm() / s);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Bilinear form

namespace detail {

inline double inner_product_magnitude(const MatrixPolynomial& p, const MomentSequence& mu,
                                      const MatrixPolynomial& q) {
  double s = 0.0;
  for (int i = 0; i <= p.degree(); ++i) {
    for (int j = 0; j <= q.degree(); ++j) {
      s = std::max(s, (p.coeff(i) * mu[i + j] * q.coeff(j).transpose()).norm());
    }
  }
  return s;
}

}  // namespace detail

/// max over P = t^i I, Q = t^j I (i, j <= deg) of ||<PD, Q> - <P, QD>|| relative to
/// the largest product entering either pairing.
inline double bilinear_symmetry_residual(const MomentSequence& mu, const DiffOperator& d, int deg) {
  if (deg < 0) throw DomainError("bilinear_symmetry_residual: negative degree");
  const Index s = d.size();
  double worst = 0.0;
  for (int i = 0; i <= deg; ++i) {
    const auto p = MatrixPolynomial::monomial(s, i);
    const auto pd = right_apply(p, d);
    for (int j = 0; j <= deg; ++j) {
      const auto q = MatrixPolynomial::monomial(s, j);
      const auto qd = right_apply(q, d);
      const Matrix diff = inner_product(pd, mu, q) - inner_product(p, mu, qd);
      const double scale = std::max(detail::inner_product_magnitude(pd, mu, q),
                                    detail::inner_product_magnitude(p, mu, qd));
      if (scale > 0.0) worst = std::max(worst, diff.norm() / scale);
    }
  }
  return worst;
}

inline double bilinear_symmetry_residual(const WeightMatrix& w, const DiffOperator& d, int deg) {
  return bilinear_symmetry_residual(moments(w, 2 * deg), d, deg);
}

// ---------------------------------------------------------------------------
// Differential and boundary forms (continuous part only)

namespace detail {

/// (F_i W)^{(m)}(t) summed over the continuous parts.
inline Matrix fw_derivative(const WeightMatrix& w, const DiffOperator& d, int i, int m, double t) {
  Matrix out = Matrix::Zero(w.size(), w.size());
  for (const auto& part : w.continuous()) {
    out += part.scale * part.density.left_multiplied(d.coefficient(i)).derivative(m)(t);
  }
  return out;
}

}  // namespace detail

/// max over l and grid points of the relative residual of
///   sum_{i=0}^{k-l} (-1)^{k-i} C(k-i, l) (F_{k-i} W)^{(k-i-l)} = W F_l^T.
inline double differential_equation_residual(const WeightMatrix& w, const DiffOperator& d,
                                             const std::vector<double>& grid) {
  if (!w.has_continuous()) throw DomainError("differential_equation_residual: no continuous part");
  if (w.size() != d.size()) throw SizeMismatch("differential_equation_residual");
  const int k = d.order();
  double worst = 0.0;
  for (double t : grid) {
    for (const auto& part : w.continuous()) {
      if (!part.density.support().contains(t)) {
        throw DomainError("differential_equation_residual: grid point outside the support");
      }
    }
    const Matrix wt = w.density(t);
    for (int l = 0; l <= k; ++l) {
      Matrix lhs = Matrix::Zero(d.size(), d.size());
      double scale = 0.0;
      for (int i = 0; i <= k - l; ++i) {
        const double c = ((k - i) % 2 == 0 ? 1.0 : -1.0) * binomial(k - i, l);
        const Matrix term = c * detail::fw_derivative(w, d, k - i, k - i - l, t);
        lhs += term;
        scale = std::max(scale, term.norm());
      }
      const Matrix rhs = wt * d.coefficient(l)(t).transpose();
      scale = std::max(scale, rhs.norm());
      if (scale > 0.0) worst = std::max(worst, (lhs - rhs).norm() / scale);
    }
  }
  return worst;
}

struct BoundaryEndpoint {
  double endpoint = 0.0;
  std::vector<double> approach;
  std::vector<double> magnitude;  // max over (p, l) of ||expression|| at each sample
  double last = 0.0;
  bool vanishing = true;
};

struct BoundaryReport {
  std::vector<BoundaryEndpoint> endpoints;
  double max_last = 0.0;
  bool vanishing = true;
};

/// Default sample sequences: |t| = 1..8 toward infinite Hermite ends, t = 5..60 toward
/// infinite Laguerre ends, 10^{-1}..10^{-8} away from finite ends.
inline std::vector<std::pair<double, std::vector<double>>> default_approach(const WeightMatrix& w) {
  std::vector<std::pair<double, std::vector<double>>> out;
  if (!w.has_continuous()) return out;
  const QuasiDensity& d = w.continuous().front().density;
  const Support s = d.support();
  auto finite = [](double e, double dir) {
    std::vector<double> v;
    for (int j = 1; j <= 8; ++j) v.push_back(e + dir * std::pow(10.0, -j));
    return v;
  };
  if (std::isinf(s.lo)) {
    std::vector<double> v;
    for (int j = 1; j <= 8; ++j) v.push_back(-j);
    out.push_back({s.lo, v});
  } else {
    out.push_back({s.lo, finite(s.lo, 1.0)});
  }
  if (std::isinf(s.hi)) {
    std::vector<double> v;
    const double step = d.kernel() == Kernel::hermite_exp ? 1.0 : 5.0;
    const double top = d.kernel() == Kernel::hermite_exp ? 8.0 : 60.0;
    for (double t = step; t <= top + 1e-9; t += step) v.push_back(t);
    out.push_back({s.hi, v});
  } else {
    out.push_back({s.hi, finite(s.hi, -1.0)});
  }
  return out;
}

/// Evaluates sum_{i=0}^{p-1} (-1)^{k-i+p-1} C(k-i, l) (F_{k-i} W)^{(p-1-i)} for
/// p = 1..k, l = 0..k-p along each approach sequence. Diagnostic only; an endpoint
/// counts as vanishing when the last sample is below 1e-12 or below 1e-6 of the
/// largest sample.
inline BoundaryReport boundary_limit_check(
    const WeightMatrix& w, const DiffOperator& d,
    std::vector<std::pair<double, std::vector<double>>> approach = {}) {
  BoundaryReport report;
  if (!w.has_continuous()) return report;
  if (approach.empty()) approach = default_approach(w);
  const int k = d.order();
  for (auto& [endpoint, samples] : approach) {
    BoundaryEndpoint e;
    e.endpoint = endpoint;
    e.approach = samples;
    for (double t : samples) {
      double mag = 0.0;
      for (int p = 1; p <= k; ++p) {
        for (int l = 0; l <= k - p; ++l) {
          Matrix expr = Matrix::Zero(d.size(), d.size());
          for (int i = 0; i <= p - 1; ++i) {
            const double c = ((k - i + p - 1) % 2 == 0 ? 1.0 : -1.0) * binomial(k - i, l);
            expr += c * detail::fw_derivative(w, d, k - i, p - 1 - i, t);
          }
          mag = std::max(mag, expr.norm());
        }
      }
      e.magnitude.push_back(mag);
    }
    e.last = e.magnitude.empty() ? 0.0 : e.magnitude.back();
    const double peak =
        e.magnitude.empty() ? 0.0 : *std::max_element(e.magnitude.begin(), e.magnitude.end());
    e.vanishing = e.last < 1e-12 || e.last <= 1e-6 * peak;
    report.max_last = std::max(report.max_last, e.last);
    report.vanishing = report.vanishing && e.vanishing;
    report.endpoints.push_back(std::move(e));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Mass-point conditions

struct MassConditionReport {
  std::vector<double> annihilation;  // ||F_j(t0) M|| / (||F_j(t0)|| ||M||), j = 1..k
  double commutation = 0.0;          // ||F_0 M - M F_0^T|| / (||F_0|| ||M||)
  double max_residual = 0.0;
  double tolerance = kMassTolerance;
  bool verdict = true;
};

/// F_j(t0) M = 0 for j = 1..k and F_0 M = M F_0^T.
inline MassConditionReport theorem22_report(const DiffOperator& d, double t0, const Matrix& m,
                                            double tolerance = kMassTolerance) {
  if (!psd_check(m)) throw NotPSD("mass conditions: M is not positive semidefinite");
  if (m.rows() != d.size()) throw SizeMismatch("mass conditions: M size");
  MassConditionReport r;
  r.tolerance = tolerance;
  const double mn = m.norm();
  for (int j = 1; j <= d.order(); ++j) {
    const Matrix f = d.coefficient(j)(t0);
    const double s = f.norm() * mn;
    const double res = s == 0.0 ? 0.0 : (f * m).norm() / s;
    r.annihilation.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  const Matrix f0 = d.coefficient(0, 0);
  const double s0 = f0.norm() * mn;
  r.commutation = s0 == 0.0 ? 0.0 : (f0 * m - m * f0.transpose()).norm() / s0;
  r.max_residual = std::max(r.max_residual, r.commutation);
  r.verdict = r.max_residual <= tolerance;
  return r;
}

inline bool theorem22_check(const DiffOperator& d, double t0, const Matrix& m,
                            double tolerance = kMassTolerance) {
  return theorem22_report(d, t0, m, tolerance).verdict;
}

/// Unit-norm v v^T with v in the common kernel of F_1(t0)..F_k(t0) and F_0 v
/// parallel to v, if any.
inline std::optional<Matrix> find_mass(const DiffOperator& d, double t0, double tol = 1e-9) {
  const Index s = d.size();
  std::vector<Matrix> fs;
  for (int j = 1; j <= d.order(); ++j) fs.push_back(d.coefficient(j)(t0));
  std::vector<Vector> kernel;
  if (fs.empty() || stack_rows(fs).norm() == 0.0) {
    for (Index i = 0; i < s; ++i) kernel.push_back(Vector::Unit(s, i));
  } else {
    kernel = common_nullspace(std::span<const Matrix>(fs), tol);
  }
  if (kernel.empty()) return std::nullopt;
  const Matrix f0 = d.coefficient(0, 0);
  const double f0n = std::max(f0.norm(), 1.0);
  auto invariant = [&](const Vector& v) {
    const Vector fv = f0 * v;
    return (fv - v.dot(fv) * v).norm() <= 1e-8 * f0n;
  };
  auto as_mass = [](Vector v) -> Matrix {
    v.normalize();
    return v * v.transpose();
  };
  for (const auto& v : kernel) {
    if (invariant(v)) return as_mass(v);
  }
  Matrix basis(s, static_cast<Index>(kernel.size()));
  for (std::size_t i = 0; i < kernel.size(); ++i) basis.col(static_cast<Index>(i)) = kernel[i];
  const Matrix restricted = basis.transpose() * f0 * basis;
  Eigen::EigenSolver<Matrix> es(restricted);
  for (Index i = 0; i < restricted.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i).imag()) > 1e-12 * f0n) continue;
    const Vector v = basis * es.eigenvectors().col(i).real();
    if (v.norm() > 0.0 && invariant(v.normalized())) return as_mass(v);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Operator spaces

struct OperatorSpace {
  std::vector<DiffOperator> basis;
  Vector singular_values;  // of the row-normalised system, descending
  int n_max = 0;
  Index unknowns = 0;
  Index equations = 0;
};

inline constexpr double kNullspaceTolerance = 1e-10;

inline int default_basis_n_max(Index size, int order) {
  const int full = static_cast<int>(2 * (order + 1) * size * size + order);
  return std::min(full, kDefaultMaxMomentOrder);
}

namespace detail {

inline Matrix normalize_rows(Matrix m) {
  for (Index r = 0; r < m.rows(); ++r) {
    const double n = m.row(r).norm();
    if (n > 0.0) m.row(r) /= n;
  }
  return m;
}

/// Nullspace of the linear system whose columns are the images of the coefficient
/// unit vectors; the returned operators are orthonormal in coefficient space.
inline OperatorSpace solve_operator_space(const std::vector<Vector>& columns, Index size, int order,
                                          int n_max, Index tail_rows) {
  OperatorSpace out;
  out.n_max = n_max;
  out.unknowns = static_cast<Index>(columns.size());
  const Index rows = columns.empty() ? 0 : columns.front().size();
  out.equations = rows;
  Matrix a(rows, out.unknowns);
  for (Index c = 0; c < out.unknowns; ++c) a.col(c) = columns[static_cast<std::size_t>(c)];
  a = normalize_rows(a);
  Eigen::JacobiSVD<Matrix> svd(a);
  out.singular_values = svd.singularValues();
  const auto null = nullspace(a, kNullspaceTolerance);
  if (tail_rows > 0 && rows > tail_rows) {
    const auto shorter = nullspace(a.topRows(rows - tail_rows), kNullspaceTolerance);
    if (shorter.size() != null.size()) {
      throw RankInstability("operator space dimension changed from " +
                            std::to_string(shorter.size()) + " to " + std::to_string(null.size()) +
                            " in the last equations; raise n_max");
    }
  }
  for (const auto& v : null) out.basis.push_back(DiffOperator::unflatten(v, size, order));
  return out;
}

inline std::vector<Vector> moment_system_columns(const MomentSequence& mu, Index size, int order,
                                                 int n_max, Parity parity) {
  const Index p = DiffOperator::parameter_count(size, order);
  std::vector<Vector> cols;
  for (Index c = 0; c < p; ++c) {
    const DiffOperator e = DiffOperator::unflatten(Vector::Unit(p, c), size, order);
    const auto table = moment_equation_table(e, mu, n_max, parity);
    Vector col(static_cast<Index>(table.size()) * size * size);
    Index r = 0;
    for (const auto& eq : table) {
      for (Index i = 0; i < size; ++i) {
        for (Index j = 0; j < size; ++j) col(r++) = eq.residual(i, j);
      }
    }
    cols.push_back(col);
  }
  return cols;
}

}  // namespace detail

/// All order-<=k operators satisfying the moment equations for n <= n_max (n_max < 0
/// selects the default), as an orthonormal coefficient-space basis.
inline OperatorSpace operator_space(const WeightMatrix& w, int order, int n_max = -1,
                                    Parity parity = Parity::symmetric) {
  if (n_max < 0) n_max = default_basis_n_max(w.size(), order);
  const auto mu = moments(w, n_max);
  const Index s = w.size();
  return detail::solve_operator_space(detail::moment_system_columns(mu, s, order, n_max, parity), s,
                                      order, n_max, s * s);
}

inline std::vector<DiffOperator> find_operator_basis(const WeightMatrix& w, int order,
                                                     int n_max = -1) {
  return operator_space(w, order, n_max).basis;
}

/// Operators of order <= k having the monic orthogonal polynomials P_0..P_{n_max}
/// as eigenfunctions: P_n D = Gamma_n(D) P_n coefficientwise.
inline OperatorSpace eigen_operator_space(const OrthoSequence& seq, int order) {
  const Index s = seq.polys.front().size();
  const Index p = DiffOperator::parameter_count(s, order);
  std::vector<Vector> cols;
  for (Index c = 0; c < p; ++c) {
    const DiffOperator e = DiffOperator::unflatten(Vector::Unit(p, c), s, order);
    std::vector<double> entries;
    for (int n = 0; n <= seq.max_degree(); ++n) {
      const auto& pn = seq.polys[n];
      const MatrixPolynomial r = right_apply(pn, e) - operator_eigenvalue(e, n) * pn;
      for (int j = 0; j < n; ++j) {
        const Matrix cj = r.coeff(j);
        for (Index i = 0; i < s; ++i) {
          for (Index m = 0; m < s; ++m) entries.push_back(cj(i, m));
        }
      }
    }
    cols.push_back(Eigen::Map<Vector>(entries.data(), static_cast<Index>(entries.size())));
  }
  return detail::solve_operator_space(cols, s, order, seq.max_degree(), 0);
}

// ---------------------------------------------------------------------------
// Joint operator and mass search

struct OperatorMassCandidate {
  DiffOperator op;
  Matrix mass;
  double residual;  // sigma_min / sigma_max of the conditions at the chosen direction
};

namespace detail {

/// Unit coefficient-space norm, largest-magnitude coefficient positive.
inline DiffOperator normalized_operator(const DiffOperator& d) {
  Vector v = d.flatten();
  const double n = v.norm();
  if (n == 0.0) return d;
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
  return DiffOperator::unflatten(v / n, d.size(), d.order());
}

/// Removes the identity direction (F_0 = I) from a basis and re-orthonormalises.
inline std::vector<DiffOperator> without_identity(const std::vector<DiffOperator>& basis) {
  if (basis.empty()) return {};
  const Index s = basis.front().size();
  const int k = basis.front().order();
  const Vector id = DiffOperator::identity(s, k).flatten().normalized();
  Matrix b(id.size(), static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vector v = basis[i].flatten();
    b.col(static_cast<Index>(i)) = v - id.dot(v) * id;
  }
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
  std::vector<DiffOperator> out;
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-8 * smax) {
      out.push_back(DiffOperator::unflatten(svd.matrixU().col(i), s, k));
    }
  }
  return out;
}

inline DiffOperator combine_basis(const std::vector<DiffOperator>& basis, const Vector& c) {
  DiffOperator d = c(0) * basis[0];
  for (std::size_t i = 1; i < basis.size(); ++i) d = d + c(static_cast<Index>(i)) * basis[i];
  return d;
}

/// Rows: F_j(t0) v for j >= 1 and w^T F_0 v for w spanning v-perp; columns: basis.
inline Matrix direction_system(const std::vector<DiffOperator>& basis, double t0, const Vector& v) {
  const Index s = v.size();
  const int k = basis.front().order();
  const Matrix perp = Eigen::JacobiSVD<Matrix>(v.transpose(), Eigen::ComputeFullV)
                          .matrixV()
                          .rightCols(s - 1);
  const Index rows = k * s + (s - 1);
  Matrix a(rows, static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Vector col(rows);
    for (int j = 1; j <= k; ++j) col.segment((j - 1) * s, s) = basis[i].coefficient(j)(t0) * v;
    col.tail(s - 1) = perp.transpose() * basis[i].coefficient(0, 0) * v;
    a.col(static_cast<Index>(i)) = col;
  }
  return a;
}

struct DirectionFit {
  double ratio;
  Vector c;
};

inline DirectionFit fit_direction(const std::vector<DiffOperator>& basis, double t0,
                                  const Vector& v) {
  const Matrix a = direction_system(basis, t0, v);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const Index m = a.cols();
  // More unknowns than rows leaves an exact null vector.
  const double smin = a.rows() < m ? 0.0 : sv(m - 1);
  const double smax = sv.size() ? sv(0) : 0.0;
  return {smax == 0.0 ? 0.0 : smin / smax, svd.matrixV().col(m - 1)};
}

inline Vector unit_direction(double theta) {
  Vector v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

}  // namespace detail

inline constexpr int kDirectionSweep = 2048;
inline constexpr double kDirectionThreshold = 1e-6;

/// Every (operator, mass) pair found in the span of the basis, modulo the identity
/// operator. N = 2 sweeps v = (cos theta, sin theta); N = 1 solves directly; larger N
/// runs alternating least squares from a few fixed starts.
inline std::vector<OperatorMassCandidate> find_operator_and_mass_all(
    const std::vector<DiffOperator>& basis_in, double t0) {
  std::vector<OperatorMassCandidate> out;
  const auto basis = detail::without_identity(basis_in);
  if (basis.empty()) return out;
  const Index s = basis.front().size();
  if (s == 1) {
    Vector v(1);
    v << 1.0;
    const auto fit = detail::fit_direction(basis, t0, v);
    if (fit.ratio < kDirectionThreshold) {
      out.push_back({detail::normalized_operator(detail::combine_basis(basis, fit.c)),
                     Matrix::Ones(1, 1), fit.ratio});
    }
    return out;
  }
  auto accept = [&](const Vector& v, const detail::DirectionFit& fit) {
    const Vector u = v.normalized();
    for (const auto& c : out) {
      if (std::abs(std::abs(u.dot(c.mass * u)) - 1.0) < 1e-10) return;
    }
    out.push_back({detail::normalized_operator(detail::combine_basis(basis, fit.c)),
                   u * u.transpose(), fit.ratio});
  };
  if (s == 2) {
    const int grid = kDirectionSweep;
    const double h = std::numbers::pi / grid;
    std::vector<double> r(grid);
    for (int i = 0; i < grid; ++i) r[i] = detail::fit_direction(basis, t0, detail::unit_direction(i * h)).ratio;
    for (int i = 0; i < grid; ++i) {
      const double left = r[(i + grid - 1) % grid];
      const double right = r[(i + 1) % grid];
      if (!(r[i] <= left && r[i] < right)) continue;
      // Golden-section polish on [theta - h, theta + h].
      double lo = (i - 1) * h;
      double hi = (i + 1) * h;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      auto f = [&](double th) { return detail::fit_direction(basis, t0, detail::unit_direction(th)).ratio; };
      double x1 = hi - g * (hi - lo);
      double x2 = lo + g * (hi - lo);
      double f1 = f(x1);
      double f2 = f(x2);
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = f(x2);
        }
      }
      const Vector v = detail::unit_direction(0.5 * (lo + hi));
      const auto fit = detail::fit_direction(basis, t0, v);
      if (fit.ratio < kDirectionThreshold) accept(v, fit);
    }
  } else {
    for (Index start = 0; start < s; ++start) {
      Vector v = Vector::Ones(s) + Vector::Unit(s, start);
      v.normalize();
      detail::DirectionFit fit{1.0, Vector()};
      for (int it = 0; it < 300; ++it) {
        fit = detail::fit_direction(basis, t0, v);
        const DiffOperator d = detail::combine_basis(basis, fit.c);
        const Matrix f0 = d.coefficient(0, 0);
        const double rho = v.dot(f0 * v);
        std::vector<Matrix> rows;
        for (int j = 1; j <= d.order(); ++j) rows.push_back(d.coefficient(j)(t0));
        rows.push_back(f0 - rho * Matrix::Identity(s, s));
        Eigen::JacobiSVD<Matrix> svd(stack_rows(rows), Eigen::ComputeFullV);
        Vector next = svd.matrixV().col(s - 1);
        if (next.dot(v) < 0.0) next = -next;
        const double step = (next - v).norm();
        v = next;
        if (step < 1e-14) break;
      }
      fit = detail::fit_direction(basis, t0, v);
      if (fit.ratio < kDirectionThreshold) accept(v, fit);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.residual < b.residual; });
  return out;
}

inline std::optional<std::pair<DiffOperator, Matrix>> find_operator_and_mass(
    const std::vector<DiffOperator>& basis, double t0) {
  auto all = find_operator_and_mass_all(basis, t0);
  if (all.empty()) return std::nullopt;
  return std::make_pair(all.front().op, all.front().mass);
}

}  // namespace matorth
