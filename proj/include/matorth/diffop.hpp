#pragma once

// Right-hand-side differential operators D = sum_i d^i F_i(t), acting as
// P D = sum_i P^{(i)}(t) F_i(t).

#include <string>
#include <utility>
#include <vector>

#include "matorth/matpoly.hpp"

namespace matorth {

/// (x)_n = x (x-1) ... (x-n+1), with (x)_0 = 1.
inline double falling_factorial(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x - i;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class DiffOperator {
 public:
  /// Coefficients F_0..F_k. Rejects deg F_i > i.
  explicit DiffOperator(std::vector<MatrixPolynomial> coefficients)
      : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw SizeMismatch("DiffOperator: need F_0");
    size_ = coeffs_.front().size();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].size() != size_) throw SizeMismatch("DiffOperator: coefficient sizes differ");
      if (coeffs_[i].degree() > static_cast<int>(i)) {
        throw DomainError("DiffOperator: deg F_" + std::to_string(i) + " = " +
                          std::to_string(coeffs_[i].degree()) + " exceeds " + std::to_string(i));
      }
    }
  }

  static DiffOperator zero(Index size, int order) {
    return DiffOperator(std::vector<MatrixPolynomial>(order + 1, MatrixPolynomial(size)));
  }

  static DiffOperator identity(Index size, int order = 0) {
    DiffOperator d = zero(size, order);
    d.coeffs_[0] = MatrixPolynomial::constant(Matrix::Identity(size, size));
    return d;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  Index size() const { return size_; }
  const std::vector<MatrixPolynomial>& coefficients() const { return coeffs_; }
  const MatrixPolynomial& coefficient(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

  /// F_j^i, the t^j coefficient of F_i (zero when i > order).
  Matrix coefficient(int i, int j) const {
    if (i > order()) return Matrix::Zero(size_, size_);
    return coeffs_[static_cast<std::size_t>(i)].coeff(j);
  }

  /// Number of real unknowns {F_j^i}: N^2 (k+1)(k+2)/2.
  static Index parameter_count(Index size, int order) {
    return size * size * (order + 1) * (order + 2) / 2;
  }

  /// Coefficient-space vector, ordered by (i, j, row, col), j <= i.
  Vector flatten() const {
    Vector v(parameter_count(size_, order()));
    Index p = 0;
    for (int i = 0; i <= order(); ++i) {
      for (int j = 0; j <= i; ++j) {
        const Matrix c = coefficient(i, j);
        for (Index r = 0; r < size_; ++r) {
          for (Index s = 0; s < size_; ++s) v(p++) = c(r, s);
        }
      }
    }
    return v;
  }

  static DiffOperator unflatten(const Vector& v, Index size, int order) {
    if (v.size() != parameter_count(size, order)) throw SizeMismatch("DiffOperator::unflatten");
    std::vector<MatrixPolynomial> coeffs;
    Index p = 0;
    for (int i = 0; i <= order; ++i) {
      std::vector<Matrix> cs;
      for (int j = 0; j <= i; ++j) {
        Matrix c(size, size);
        for (Index r = 0; r < size; ++r) {
          for (Index s = 0; s < size; ++s) c(r, s) = v(p++);
        }
        cs.push_back(c);
      }
      coeffs.emplace_back(std::move(cs));
    }
    return DiffOperator(std::move(coeffs));
  }

  friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
    if (a.size_ != b.size_) throw SizeMismatch("DiffOperator: size mismatch");
    const int k = std::max(a.order(), b.order());
    std::vector<MatrixPolynomial> out;
    for (int i = 0; i <= k; ++i) {
      MatrixPolynomial fa = i <= a.order() ? a.coeffs_[i] : MatrixPolynomial(a.size_);
      MatrixPolynomial fb = i <= b.order() ? b.coeffs_[i] : MatrixPolynomial(a.size_);
      out.push_back(fa + fb);
    }
    return DiffOperator(std::move(out));
  }

  friend DiffOperator operator*(double s, const DiffOperator& d) {
    std::vector<MatrixPolynomial> out;
    for (const auto& f : d.coeffs_) out.push_back(s * f);
    DiffOperator r(std::move(out));
    return r;
  }

  friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
    return a + (-1.0) * b;
  }

 private:
  std::vector<MatrixPolynomial> coeffs_;
  Index size_ = 0;
};

/// P D = sum_i P^{(i)} F_i. The operator acts on the right of P.
inline MatrixPolynomial right_apply(const MatrixPolynomial& p, const DiffOperator& d) {
  if (p.size() != d.size()) throw SizeMismatch("right_apply: size mismatch");
  MatrixPolynomial out(p.size());
  for (int i = 0; i <= d.order(); ++i) {
    out = out + p.derivative(i) * d.coefficient(i);
  }
  return out;
}

/// Gamma_n = sum_i (n)_i F_i^i: the eigenvalue any monic degree-n eigenfunction
/// of D must carry.
inline Matrix operator_eigenvalue(const DiffOperator& d, int n) {
  Matrix g = Matrix::Zero(d.size(), d.size());
  for (int i = 0; i <= d.order(); ++i) g += falling_factorial(n, i) * d.coefficient(i, i);
  return g;
}

}  // namespace matorth
