#pragma once

#include <stdexcept>
#include <string>

namespace matorth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Spectra of A and -B in AX + XB = C are not separated; the solution is not unique.
class SharedSpectrum : public Error {
 public:
  explicit SharedSpectrum(double gap, int step = -1)
      : Error("shared spectrum in Sylvester equation (gap " + std::to_string(gap) +
              (step >= 0 ? ", step " + std::to_string(step) : std::string()) + ")"),
        gap_(gap),
        step_(step) {}
  double gap() const { return gap_; }
  int step() const { return step_; }

 private:
  double gap_;
  int step_;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

class DivergentMoment : public Error {
 public:
  using Error::Error;
};

class MissingMoments : public Error {
 public:
  using Error::Error;
};

class UnsupportedKernel : public Error {
 public:
  using Error::Error;
};

class IllConditionedMoments : public Error {
 public:
  IllConditionedMoments(int degree, double condition)
      : Error("moment block matrix ill-conditioned at degree " + std::to_string(degree) +
              " (condition " + std::to_string(condition) + ")"),
        degree_(degree),
        condition_(condition) {}
  int degree() const { return degree_; }
  double condition() const { return condition_; }

 private:
  int degree_;
  double condition_;
};

/// A moment sequence fails the consistency equations at step n.
class Inconsistent : public Error {
 public:
  Inconsistent(int n, double residual)
      : Error("moment recursion inconsistent at n = " + std::to_string(n) + " (residual " +
              std::to_string(residual) + ")"),
        n_(n),
        residual_(residual) {}
  int n() const { return n_; }
  double residual() const { return residual_; }

 private:
  int n_;
  double residual_;
};

class ExcludedPoint : public Error {
 public:
  using Error::Error;
};

class RankInstability : public Error {
 public:
  using Error::Error;
};

}  // namespace matorth
