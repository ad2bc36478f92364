#pragma once

// Matrix polynomials and "classical kernel x matrix polynomial" densities.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "matorth/numkernel.hpp"

namespace matorth {

/// P(t) = sum_j A_j t^j with square N x N coefficients. Trailing zero
/// coefficients are trimmed, so the zero polynomial has degree -1.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;

  explicit MatrixPolynomial(Index size) : size_(size) {}

  explicit MatrixPolynomial(std::vector<Matrix> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw SizeMismatch("MatrixPolynomial: need at least one coefficient");
    size_ = coeffs_.front().rows();
    for (const auto& c : coeffs_) {
      if (c.rows() != size_ || c.cols() != size_) {
        throw SizeMismatch("MatrixPolynomial: coefficients must be square of equal size");
      }
    }
    trim();
  }

  static MatrixPolynomial constant(const Matrix& c) { return MatrixPolynomial({c}); }

  /// c * t^power * I
  static MatrixPolynomial monomial(Index size, int power, double c = 1.0) {
    std::vector<Matrix> coeffs(static_cast<std::size_t>(power) + 1, Matrix::Zero(size, size));
    coeffs.back() = c * Matrix::Identity(size, size);
    return MatrixPolynomial(std::move(coeffs));
  }

  Index size() const { return size_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Matrix>& coeffs() const { return coeffs_; }

  /// Coefficient of t^j (zero beyond the degree).
  Matrix coeff(int j) const {
    if (j < 0 || j > degree()) return Matrix::Zero(size_, size_);
    return coeffs_[static_cast<std::size_t>(j)];
  }

  Matrix leading_coeff() const { return coeff(degree()); }

  Matrix operator()(double t) const {
    Matrix acc = Matrix::Zero(size_, size_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  MatrixPolynomial derivative(int order = 1) const {
    MatrixPolynomial out(size_);
    if (order > degree()) return out;
    for (int j = order; j <= degree(); ++j) {
      double factor = 1.0;
      for (int i = 0; i < order; ++i) factor *= j - i;
      out.coeffs_.push_back(factor * coeffs_[static_cast<std::size_t>(j)]);
    }
    out.trim();
    return out;
  }

  /// Multiplies by the scalar polynomial sum_j s_j t^j.
  MatrixPolynomial times_scalar_poly(const std::vector<double>& s) const {
    MatrixPolynomial out(size_);
    if (is_zero() || s.empty()) return out;
    out.coeffs_.assign(coeffs_.size() + s.size() - 1, Matrix::Zero(size_, size_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) out.coeffs_[i + j] += s[j] * coeffs_[i];
    }
    out.trim();
    return out;
  }

  MatrixPolynomial transposed() const {
    MatrixPolynomial out(size_);
    for (const auto& c : coeffs_) out.coeffs_.push_back(c.transpose());
    return out;
  }

  /// Largest Frobenius norm among the coefficients.
  double coeff_norm() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, c.norm());
    return m;
  }

  friend MatrixPolynomial operator+(const MatrixPolynomial& p, const MatrixPolynomial& q) {
    check_sizes(p, q);
    MatrixPolynomial out(p.size_);
    const int d = std::max(p.degree(), q.degree());
    for (int j = 0; j <= d; ++j) out.coeffs_.push_back(p.coeff(j) + q.coeff(j));
    out.trim();
    return out;
  }

  friend MatrixPolynomial operator-(const MatrixPolynomial& p, const MatrixPolynomial& q) {
    return p + (-1.0) * q;
  }

  friend MatrixPolynomial operator*(double s, const MatrixPolynomial& p) {
    MatrixPolynomial out(p.size_);
    for (const auto& c : p.coeffs_) out.coeffs_.push_back(s * c);
    out.trim();
    return out;
  }

  /// Noncommutative product with coefficient convolution.
  friend MatrixPolynomial operator*(const MatrixPolynomial& p, const MatrixPolynomial& q) {
    check_sizes(p, q);
    MatrixPolynomial out(p.size_);
    if (p.is_zero() || q.is_zero()) return out;
    out.coeffs_.assign(p.coeffs_.size() + q.coeffs_.size() - 1, Matrix::Zero(p.size_, p.size_));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) {
        out.coeffs_[i + j].noalias() += p.coeffs_[i] * q.coeffs_[j];
      }
    }
    out.trim();
    return out;
  }

  friend MatrixPolynomial operator*(const Matrix& m, const MatrixPolynomial& p) {
    return MatrixPolynomial::constant(m) * p;
  }

  friend MatrixPolynomial operator*(const MatrixPolynomial& p, const Matrix& m) {
    return p * MatrixPolynomial::constant(m);
  }

 private:
  static void check_sizes(const MatrixPolynomial& p, const MatrixPolynomial& q) {
    if (p.size_ != q.size_) throw SizeMismatch("MatrixPolynomial: size mismatch");
  }

  void trim() {
    while (!coeffs_.empty() && (coeffs_.back().array() == 0.0).all()) coeffs_.pop_back();
  }

  Index size_ = 0;
  std::vector<Matrix> coeffs_;
};

enum class Kernel {
  hermite_exp,   // e^{-t^2} on R
  laguerre_exp,  // t^alpha e^{-t} on (0, inf)
  jacobi_beta,   // t^alpha (1-t)^beta on (0, 1)
};

struct Support {
  double lo;
  double hi;
  bool contains(double t) const { return t > lo && t < hi; }
};

/// kernel(t) * poly(t) on the open support of the kernel, zero elsewhere.
class QuasiDensity {
 public:
  static QuasiDensity hermite(MatrixPolynomial poly) {
    return QuasiDensity(Kernel::hermite_exp, 0.0, 0.0, std::move(poly));
  }
  static QuasiDensity laguerre(double alpha, MatrixPolynomial poly) {
    return QuasiDensity(Kernel::laguerre_exp, alpha, 0.0, std::move(poly));
  }
  static QuasiDensity jacobi(double alpha, double beta, MatrixPolynomial poly) {
    return QuasiDensity(Kernel::jacobi_beta, alpha, beta, std::move(poly));
  }

  Kernel kernel() const { return kernel_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const MatrixPolynomial& poly() const { return poly_; }
  Index size() const { return poly_.size(); }

  Support support() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kernel_) {
      case Kernel::hermite_exp: return {-inf, inf};
      case Kernel::laguerre_exp: return {0.0, inf};
      case Kernel::jacobi_beta: return {0.0, 1.0};
    }
    return {-inf, inf};
  }

  /// Exponents above -1, so the kernel is integrable near the finite endpoints.
  bool integrable() const {
    switch (kernel_) {
      case Kernel::hermite_exp: return true;
      case Kernel::laguerre_exp: return alpha_ > -1.0;
      case Kernel::jacobi_beta: return alpha_ > -1.0 && beta_ > -1.0;
    }
    return false;
  }

  double kernel_value(double t) const {
    if (!support().contains(t)) return 0.0;
    switch (kernel_) {
      case Kernel::hermite_exp: return std::exp(-t * t);
      case Kernel::laguerre_exp: return std::pow(t, alpha_) * std::exp(-t);
      case Kernel::jacobi_beta: return std::pow(t, alpha_) * std::pow(1.0 - t, beta_);
    }
    return 0.0;
  }

  Matrix operator()(double t) const {
    if (!support().contains(t)) return Matrix::Zero(size(), size());
    return kernel_value(t) * poly_(t);
  }

  /// Exact derivative; stays in the class with shifted exponents.
  QuasiDensity derivative() const {
    const MatrixPolynomial dp = poly_.derivative();
    switch (kernel_) {
      case Kernel::hermite_exp:
        return hermite(dp + poly_.times_scalar_poly({0.0, -2.0}));
      case Kernel::laguerre_exp:
        return laguerre(alpha_ - 1.0,
                        poly_.times_scalar_poly({alpha_, -1.0}) + dp.times_scalar_poly({0.0, 1.0}));
      case Kernel::jacobi_beta:
        return jacobi(alpha_ - 1.0, beta_ - 1.0,
                      poly_.times_scalar_poly({alpha_, -alpha_ - beta_}) +
                          dp.times_scalar_poly({0.0, 1.0, -1.0}));
    }
    return *this;
  }

  QuasiDensity derivative(int order) const {
    QuasiDensity out = *this;
    for (int i = 0; i < order; ++i) out = out.derivative();
    return out;
  }

  /// F(t) * W(t)
  QuasiDensity left_multiplied(const MatrixPolynomial& f) const {
    return QuasiDensity(kernel_, alpha_, beta_, f * poly_);
  }

  /// W(t) * F(t)
  QuasiDensity right_multiplied(const MatrixPolynomial& f) const {
    return QuasiDensity(kernel_, alpha_, beta_, poly_ * f);
  }

 private:
  QuasiDensity(Kernel kernel, double alpha, double beta, MatrixPolynomial poly)
      : kernel_(kernel), alpha_(alpha), beta_(beta), poly_(std::move(poly)) {}

  Kernel kernel_;
  double alpha_;
  double beta_;
  MatrixPolynomial poly_;
};

}  // namespace matorth
