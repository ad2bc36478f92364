#pragma once

// Dense real-matrix primitives: PSD tests, Sylvester solves, numerical nullspaces.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "matorth/errors.hpp"

namespace matorth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Conjugate transpose. The scalar field is real, so this is the transpose.
inline Matrix adjoint(const Matrix& m) { return m.transpose(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw SizeMismatch(std::string(what) + " must be square");
  }
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw SizeMismatch(std::string(what) + ": shape mismatch");
  }
}

inline double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::EigenSolver<Matrix>(m, false).eigenvalues().cwiseAbs().maxCoeff();
}

/// Minimum over eigenvalue pairs of |lambda_A + lambda_B|, i.e. the distance
/// between the spectra of A and -B.
inline double sylvester_gap(const Matrix& a, const Matrix& b) {
  const Eigen::VectorXcd ea = Eigen::EigenSolver<Matrix>(a, false).eigenvalues();
  const Eigen::VectorXcd eb = Eigen::EigenSolver<Matrix>(b, false).eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ea.size(); ++i) {
    for (Index j = 0; j < eb.size(); ++j) {
      gap = std::min(gap, std::abs(ea(i) + eb(j)));
    }
  }
  return gap;
}

struct SylvesterOptions {
  /// Spectra closer than separation * max(rho(A), rho(B)) count as shared.
  double separation = 1e-8;
};

/// Solves A X + X B = C through the vectorised N^2 x N^2 system
/// (I kron A + B^T kron I) vec(X) = vec(C).
inline Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c,
                              const SylvesterOptions& opts = {}) {
  require_square(a, "solve_sylvester: A");
  require_square(b, "solve_sylvester: B");
  require_square(c, "solve_sylvester: C");
  if (a.rows() != b.rows() || a.rows() != c.rows()) {
    throw SizeMismatch("solve_sylvester: A, B, C must have equal size");
  }
  const Index n = a.rows();
  const double radius = std::max(spectral_radius(a), spectral_radius(b));
  const double gap = sylvester_gap(a, b);
  if (!(gap > opts.separation * radius) || gap == 0.0) {
    throw SharedSpectrum(gap);
  }
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Index col = 0; col < n; ++col) {
    k.block(col * n, col * n, n, n) += a;
    for (Index row = 0; row < n; ++row) {
      k.block(row * n, col * n, n, n).diagonal().array() += b(col, row);
    }
  }
  const Vector x = k.fullPivLu().solve(c.reshaped());
  return x.reshaped(n, n);
}

/// Orthonormal basis of ker(M): right singular vectors whose singular value is
/// below rel_tol times the largest one.
inline std::vector<Vector> nullspace(const Matrix& m, double rel_tol) {
  std::vector<Vector> out;
  const Index cols = m.cols();
  if (cols == 0) return out;
  if (m.rows() == 0) {
    for (Index i = 0; i < cols; ++i) out.push_back(Vector::Unit(cols, i));
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Index rank = 0;
  if (smax > 0.0) {
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > rel_tol * smax) ++rank;
    }
  }
  for (Index i = rank; i < cols; ++i) out.push_back(svd.matrixV().col(i));
  return out;
}

inline Matrix stack_rows(std::span<const Matrix> ms) {
  if (ms.empty()) return Matrix();
  const Index cols = ms.front().cols();
  Index rows = 0;
  for (const auto& m : ms) {
    if (m.cols() != cols) throw SizeMismatch("stack_rows: column counts differ");
    rows += m.rows();
  }
  Matrix out(rows, cols);
  Index r = 0;
  for (const auto& m : ms) {
    out.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return out;
}

/// Orthonormal basis of the intersection of ker(M_j).
inline std::vector<Vector> common_nullspace(std::span<const Matrix> ms, double tol) {
  if (ms.empty()) return {};
  return nullspace(stack_rows(ms), tol);
}

inline std::vector<Vector> common_nullspace(std::initializer_list<Matrix> ms, double tol) {
  const std::vector<Matrix> v(ms);
  return common_nullspace(std::span<const Matrix>(v), tol);
}

/// True iff M is symmetric within tol and its smallest eigenvalue is >= -tol * ||M||.
inline bool psd_check(const Matrix& m, double tol = 1e-12) {
  require_square(m, "psd_check");
  const double scale = m.norm();
  if (scale == 0.0) return true;
  if ((m - m.transpose()).norm() > tol * scale) return false;
  const Matrix sym = 0.5 * (m + m.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  return lmin >= -tol * scale;
}

/// ||a - b|| / max(||a||, ||b||), zero when both vanish.
inline double relative_difference(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace matorth
