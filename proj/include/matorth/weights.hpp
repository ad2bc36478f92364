#pragma once

// Weight matrices (quasi-polynomial densities plus Dirac atoms), the example
// families, and closed-form moments.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matorth/matpoly.hpp"

namespace matorth {

inline constexpr int kDefaultMaxMomentOrder = 40;

/// zeta * delta_{location} * mass
struct Atom {
  double location;
  Matrix mass;
  double scale;
};

struct ContinuousPart {
  double scale;
  QuasiDensity density;
};

/// mu_0 ... mu_n
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::vector<Matrix> moments) : mu_(std::move(moments)) {}

  const Matrix& operator[](int n) const {
    if (n < 0 || n > max_order()) {
      throw MissingMoments("moment " + std::to_string(n) + " not available (have up to " +
                           std::to_string(max_order()) + ")");
    }
    return mu_[static_cast<std::size_t>(n)];
  }
  int max_order() const { return static_cast<int>(mu_.size()) - 1; }
  Index size() const { return mu_.empty() ? 0 : mu_.front().rows(); }
  const std::vector<Matrix>& data() const { return mu_; }
  void push_back(Matrix m) { mu_.push_back(std::move(m)); }

  /// Largest ||mu_n - mu_n^T|| / ||mu_n||.
  double max_asymmetry() const {
    double worst = 0.0;
    for (const auto& m : mu_) worst = std::max(worst, relative_difference(m, m.transpose()));
    return worst;
  }

 private:
  std::vector<Matrix> mu_;
};

class WeightMatrix {
 public:
  static WeightMatrix from_density(QuasiDensity density, double scale = 1.0) {
    if (!(scale > 0.0)) throw DomainError("WeightMatrix: continuous scale must be positive");
    WeightMatrix w;
    w.size_ = density.size();
    w.continuous_.push_back({scale, std::move(density)});
    return w;
  }

  /// Weight made only of atoms, to be filled with with_atom.
  static WeightMatrix atoms_only(Index size) {
    WeightMatrix w;
    w.size_ = size;
    return w;
  }

  Index size() const { return size_; }
  const std::vector<ContinuousPart>& continuous() const { return continuous_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool has_continuous() const { return !continuous_.empty(); }
  bool is_signed() const { return signed_; }

  /// gamma * W + zeta * delta_{t0} M. The signed flag admits non-PSD masses and
  /// negative coefficients for cone algebra.
  WeightMatrix with_atom(double t0, const Matrix& mass, double gamma = 1.0, double zeta = 1.0,
                         bool allow_signed = false) const {
    if (mass.rows() != size_ || mass.cols() != size_) throw SizeMismatch("with_atom: mass size");
    if (!allow_signed) {
      if (!psd_check(mass)) throw NotPSD("with_atom: mass is not positive semidefinite");
      if (!(gamma > 0.0) || zeta < 0.0) {
        throw DomainError("with_atom: need gamma > 0 and zeta >= 0 (or the signed flag)");
      }
    }
    WeightMatrix w = scaled(gamma, allow_signed);
    w.atoms_.push_back({t0, mass, zeta});
    w.signed_ = signed_ || allow_signed;
    return w;
  }

  WeightMatrix scaled(double gamma, bool allow_signed = false) const {
    if (!allow_signed && !(gamma > 0.0)) throw DomainError("scaled: gamma must be positive");
    WeightMatrix w = *this;
    for (auto& c : w.continuous_) c.scale *= gamma;
    for (auto& a : w.atoms_) a.scale *= gamma;
    w.signed_ = signed_ || allow_signed;
    return w;
  }

  /// gamma * A + zeta * B, term by term.
  static WeightMatrix combine(const WeightMatrix& a, double gamma, const WeightMatrix& b,
                              double zeta, bool allow_signed = false) {
    if (a.size_ != b.size_) throw SizeMismatch("combine: size mismatch");
    if (!allow_signed && (gamma < 0.0 || zeta < 0.0)) {
      throw DomainError("combine: negative coefficient without the signed flag");
    }
    WeightMatrix w;
    w.size_ = a.size_;
    w.signed_ = allow_signed || a.signed_ || b.signed_;
    for (auto c : a.continuous_) w.continuous_.push_back({gamma * c.scale, c.density});
    for (auto c : b.continuous_) w.continuous_.push_back({zeta * c.scale, c.density});
    for (auto t : a.atoms_) w.atoms_.push_back({t.location, t.mass, gamma * t.scale});
    for (auto t : b.atoms_) w.atoms_.push_back({t.location, t.mass, zeta * t.scale});
    return w;
  }

  /// Density of the continuous parts at t (atoms excluded).
  Matrix density(double t) const {
    Matrix out = Matrix::Zero(size_, size_);
    for (const auto& c : continuous_) out += c.scale * c.density(t);
    return out;
  }

 private:
  WeightMatrix() = default;

  Index size_ = 0;
  std::vector<ContinuousPart> continuous_;
  std::vector<Atom> atoms_;
  bool signed_ = false;
};

/// r-th moment of the scalar kernel: Hermite Gamma((r+1)/2) for even r and 0 for
/// odd r; Laguerre Gamma(r+alpha+1); Jacobi Gamma(r+a+1)Gamma(b+1)/Gamma(r+a+b+2).
inline double kernel_moment(Kernel kernel, double alpha, double beta, int r) {
  switch (kernel) {
    case Kernel::hermite_exp:
      if (r % 2 != 0) return 0.0;
      return std::tgamma(0.5 * r + 0.5);
    case Kernel::laguerre_exp:
      if (!(r + alpha > -1.0)) throw DivergentMoment("Laguerre kernel moment diverges");
      return std::tgamma(r + alpha + 1.0);
    case Kernel::jacobi_beta: {
      if (!(r + alpha > -1.0) || !(beta > -1.0)) {
        throw DivergentMoment("Jacobi kernel moment diverges");
      }
      // Beta(alpha+1, beta+1), then m_{s+1} = m_s (s+alpha+1) / (s+alpha+beta+2).
      double m = std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) / std::tgamma(alpha + beta + 2.0);
      for (int s = 0; s < r; ++s) m *= (s + alpha + 1.0) / (s + alpha + beta + 2.0);
      return m;
    }
  }
  return 0.0;
}

/// mu_n = int t^n dW(t).
inline Matrix moment(const WeightMatrix& w, int n) {
  if (n < 0) throw DomainError("moment: negative order");
  Matrix mu = Matrix::Zero(w.size(), w.size());
  for (const auto& part : w.continuous()) {
    const QuasiDensity& d = part.density;
    const auto& q = d.poly().coeffs();
    for (std::size_t j = 0; j < q.size(); ++j) {
      mu += part.scale * kernel_moment(d.kernel(), d.alpha(), d.beta(), n + static_cast<int>(j)) * q[j];
    }
  }
  for (const auto& atom : w.atoms()) mu += atom.scale * std::pow(atom.location, n) * atom.mass;
  return mu;
}

/// Same sum as moment() with every term replaced by its absolute value; the
/// natural scale for relative comparisons when mu_n has cancelling entries.
inline Matrix moment_magnitude(const WeightMatrix& w, int n) {
  Matrix out = Matrix::Zero(w.size(), w.size());
  for (const auto& part : w.continuous()) {
    const QuasiDensity& d = part.density;
    const auto& q = d.poly().coeffs();
    for (std::size_t j = 0; j < q.size(); ++j) {
      const int r = n + static_cast<int>(j);
      double m = 0.0;
      if (d.kernel() == Kernel::hermite_exp) {
        m = std::tgamma(0.5 * r + 0.5);
      } else {
        m = std::abs(kernel_moment(d.kernel(), d.alpha(), d.beta(), r));
      }
      out += std::abs(part.scale) * m * q[j].cwiseAbs();
    }
  }
  for (const auto& atom : w.atoms()) {
    out += std::abs(atom.scale) * std::pow(std::abs(atom.location), n) * atom.mass.cwiseAbs();
  }
  return out;
}

inline MomentSequence moments(const WeightMatrix& w, int n_max,
                              int max_order = kDefaultMaxMomentOrder) {
  if (n_max > max_order) {
    std::clog << "matorth: warning: moments requested up to order " << n_max
              << " beyond the configured maximum " << max_order << "\n";
  }
  std::vector<Matrix> mu;
  mu.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) mu.push_back(moment(w, n));
  return MomentSequence(std::move(mu));
}

// ---------------------------------------------------------------------------
// Families

/// e^{-t^2} e^{At} e^{A*t}, A = a E_12, on R.
struct Hermite31 {
  double a;
};
/// t^alpha e^{-t} t^B t^{B*}, B = [[1, a], [0, 0]], on (0, inf).
struct Laguerre32 {
  double a;
  double alpha;
};
/// t^alpha (1-t)^beta [[k t^2 + beta-k+1, c(1-t)], [c(1-t), c(1-t)^2]], c = beta-k+1, on (0, 1).
struct Jacobi33 {
  double alpha;
  double beta;
  double k;
};
/// t^alpha e^{-t} e^{At} t^J e^{A*t}, J = sum (N-i) E_ii, A = sum nu_i E_{i,i+1}.
struct General34 {
  int n;
  double alpha;
  std::vector<double> nu;  // nu_1 .. nu_{N-1}
};
struct ScalarHermite {};
struct ScalarLaguerre {
  double alpha;
};
struct ScalarJacobi {
  double alpha;
  double beta;
};

using Family = std::variant<Hermite31, Laguerre32, Jacobi33, General34, ScalarHermite,
                            ScalarLaguerre, ScalarJacobi>;

/// nu_i = sqrt(i(N-i) nu^2 / ((N-1) + (N-i-1) nu^2)) for i < N-1, nu_{N-1} = nu_last.
inline std::vector<double> nu_chain_solve(int n, double nu_last) {
  if (n < 2) throw DomainError("nu_chain_solve: N must be at least 2");
  if (nu_last == 0.0) throw DomainError("nu_chain_solve: nu_{N-1} must be nonzero");
  const double v2 = nu_last * nu_last;
  std::vector<double> nu;
  for (int i = 1; i <= n - 2; ++i) {
    nu.push_back(std::sqrt(i * (n - i) * v2 / ((n - 1) + (n - i - 1) * v2)));
  }
  nu.push_back(nu_last);
  return nu;
}

/// Residuals of i(N-i) nu_{N-1}^2 = (N-1) nu_i^2 + (N-i-1) nu_i^2 nu_{N-1}^2, relative
/// to the left-hand side.
inline std::vector<double> nu_chain_residuals(const std::vector<double>& nu) {
  const int n = static_cast<int>(nu.size()) + 1;
  const double v2 = nu.back() * nu.back();
  std::vector<double> res;
  for (int i = 1; i <= n - 2; ++i) {
    const double ni2 = nu[i - 1] * nu[i - 1];
    const double lhs = i * (n - i) * v2;
    res.push_back(std::abs(lhs - (n - 1) * ni2 - (n - i - 1) * ni2 * v2) / lhs);
  }
  return res;
}

namespace detail {

inline Matrix unit(Index n, Index i, Index j) {
  Matrix e = Matrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

/// Matrices J and A of the arbitrary-size family (0-based storage).
inline std::pair<Matrix, Matrix> general34_ja(int n, const std::vector<double>& nu) {
  Matrix j = Matrix::Zero(n, n);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = n - 1 - i;
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = nu[static_cast<std::size_t>(i)];
  return {j, a};
}

/// e^{At} t^J e^{A^T t} for nilpotent A and diagonal integer J.
inline MatrixPolynomial general34_poly(int n, const std::vector<double>& nu) {
  const auto [j, a] = general34_ja(n, nu);
  std::vector<Matrix> exp_coeffs;
  Matrix power = Matrix::Identity(n, n);
  double factorial = 1.0;
  for (int p = 0; p < n; ++p) {
    if (p > 0) {
      power = power * a;
      factorial *= p;
    }
    exp_coeffs.push_back(power / factorial);
  }
  std::vector<Matrix> tj(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i) tj[static_cast<std::size_t>(n - 1 - i)](i, i) = 1.0;
  const MatrixPolynomial e(exp_coeffs);
  return e * MatrixPolynomial(tj) * e.transposed();
}

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace detail

inline std::string family_name(const Family& f) {
  struct {
    std::string operator()(const Hermite31&) const { return "hermite31"; }
    std::string operator()(const Laguerre32&) const { return "laguerre32"; }
    std::string operator()(const Jacobi33&) const { return "jacobi33"; }
    std::string operator()(const General34&) const { return "general34"; }
    std::string operator()(const ScalarHermite&) const { return "scalar-hermite"; }
    std::string operator()(const ScalarLaguerre&) const { return "scalar-laguerre"; }
    std::string operator()(const ScalarJacobi&) const { return "scalar-jacobi"; }
  } v;
  return std::visit(v, f);
}

inline void validate_family(const Family& f) {
  struct {
    void operator()(const Hermite31& p) const {
      if (p.a == 0.0) throw DomainError("hermite31: a must be nonzero");
    }
    void operator()(const Laguerre32& p) const {
      if (p.a == 0.0) throw DomainError("laguerre32: a must be nonzero");
      if (!(p.alpha > -1.0)) throw DomainError("laguerre32: alpha must exceed -1");
    }
    void operator()(const Jacobi33& p) const {
      if (!(p.alpha > -1.0) || !(p.beta > -1.0)) {
        throw DomainError("jacobi33: alpha, beta must exceed -1");
      }
      if (!(p.k > 0.0) || !(p.k < p.beta + 1.0)) throw DomainError("jacobi33: need 0 < k < beta+1");
    }
    void operator()(const General34& p) const {
      if (p.n < 2) throw DomainError("general34: N must be at least 2");
      if (!(p.alpha > -1.0)) throw DomainError("general34: alpha must exceed -1");
      if (static_cast<int>(p.nu.size()) != p.n - 1) {
        throw DomainError("general34: need N-1 values nu_i");
      }
      for (double v : p.nu) {
        if (v == 0.0) throw DomainError("general34: nu_i must be nonzero");
      }
    }
    void operator()(const ScalarHermite&) const {}
    void operator()(const ScalarLaguerre& p) const {
      if (!(p.alpha > -1.0)) throw DomainError("scalar-laguerre: alpha must exceed -1");
    }
    void operator()(const ScalarJacobi& p) const {
      if (!(p.alpha > -1.0) || !(p.beta > -1.0)) {
        throw DomainError("scalar-jacobi: alpha, beta must exceed -1");
      }
    }
  } v;
  std::visit(v, f);
}

inline WeightMatrix make_family(const Family& f) {
  using detail::mat2;
  validate_family(f);
  struct {
    WeightMatrix operator()(const Hermite31& p) const {
      const double a = p.a;
      return WeightMatrix::from_density(QuasiDensity::hermite(MatrixPolynomial(
          {Matrix::Identity(2, 2), mat2(0, a, a, 0), mat2(a * a, 0, 0, 0)})));
    }
    WeightMatrix operator()(const Laguerre32& p) const {
      const double a = p.a;
      // [[t^2 + a^2 (t-1)^2, a(t-1)], [a(t-1), 1]]
      return WeightMatrix::from_density(QuasiDensity::laguerre(
          p.alpha, MatrixPolynomial({mat2(a * a, -a, -a, 1), mat2(-2 * a * a, a, a, 0),
                                     mat2(1 + a * a, 0, 0, 0)})));
    }
    WeightMatrix operator()(const Jacobi33& p) const {
      const double c = p.beta - p.k + 1.0;
      return WeightMatrix::from_density(QuasiDensity::jacobi(
          p.alpha, p.beta,
          MatrixPolynomial({mat2(c, c, c, c), mat2(0, -c, -c, -2 * c), mat2(p.k, 0, 0, c)})));
    }
    WeightMatrix operator()(const General34& p) const {
      return WeightMatrix::from_density(
          QuasiDensity::laguerre(p.alpha, detail::general34_poly(p.n, p.nu)));
    }
    WeightMatrix operator()(const ScalarHermite&) const {
      return WeightMatrix::from_density(
          QuasiDensity::hermite(MatrixPolynomial::constant(Matrix::Identity(1, 1))));
    }
    WeightMatrix operator()(const ScalarLaguerre& p) const {
      return WeightMatrix::from_density(
          QuasiDensity::laguerre(p.alpha, MatrixPolynomial::constant(Matrix::Identity(1, 1))));
    }
    WeightMatrix operator()(const ScalarJacobi& p) const {
      return WeightMatrix::from_density(QuasiDensity::jacobi(
          p.alpha, p.beta, MatrixPolynomial::constant(Matrix::Identity(1, 1))));
    }
  } v;
  return std::visit(v, f);
}

}  // namespace matorth
