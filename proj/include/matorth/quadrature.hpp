#pragma once

// Gauss rules for the classical kernels (Golub-Welsch with Newton polishing) and
// the quadrature moment oracle.

#include <cmath>
#include <vector>

#include "matorth/weights.hpp"

namespace matorth {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

/// Jacobi-matrix recurrence of the monic orthogonal polynomials of a kernel:
/// p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1}; beta_0 is the total mass.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
};

inline Recurrence kernel_recurrence(Kernel kernel, double al, double be, int n) {
  Recurrence r;
  r.alpha.resize(static_cast<std::size_t>(n));
  r.beta.resize(static_cast<std::size_t>(n));
  switch (kernel) {
    case Kernel::hermite_exp:
      for (int k = 0; k < n; ++k) {
        r.alpha[k] = 0.0;
        r.beta[k] = k == 0 ? std::sqrt(std::numbers::pi) : 0.5 * k;
      }
      break;
    case Kernel::laguerre_exp:
      for (int k = 0; k < n; ++k) {
        r.alpha[k] = 2.0 * k + al + 1.0;
        r.beta[k] = k == 0 ? std::tgamma(al + 1.0) : k * (k + al);
      }
      break;
    case Kernel::jacobi_beta: {
      // (1-x)^a (1+x)^b on (-1, 1) with x = 2t - 1: a = beta, b = alpha.
      const double a = be;
      const double b = al;
      const double ab = a + b;
      for (int k = 0; k < n; ++k) {
        double ax;
        double bx;
        if (k == 0) {
          ax = (b - a) / (ab + 2.0);
          bx = 0.0;
        } else {
          const double s = 2.0 * k + ab;
          ax = (b * b - a * a) / (s * (s + 2.0));
          if (k == 1) {
            bx = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
          } else {
            bx = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
          }
        }
        r.alpha[k] = 0.5 * (ax + 1.0);
        r.beta[k] = k == 0 ? std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(ab + 2.0)
                           : 0.25 * bx;
      }
      break;
    }
  }
  return r;
}

}  // namespace detail

/// n-point Gauss rule of the kernel. Nodes from the symmetric Jacobi matrix, then
/// one or two Newton steps on the orthonormal polynomial; weights by Christoffel
/// numbers 1 / sum p_k(x)^2.
inline GaussRule gauss_rule(Kernel kernel, double alpha, double beta, int n) {
  if (n < 1) throw DomainError("gauss_rule: need at least one node");
  const auto rec = detail::kernel_recurrence(kernel, alpha, beta, n);
  Matrix jm = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jm(k, k) = rec.alpha[k];
    if (k + 1 < n) jm(k, k + 1) = jm(k + 1, k) = std::sqrt(rec.beta[k + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jm, Eigen::EigenvaluesOnly);
  GaussRule rule;
  const double mass = rec.beta[0];
  // Orthonormal values p_0..p_n at x and the derivative of p_n.
  auto eval = [&](double x, double& pn, double& dpn, double& sum_sq) {
    double pm1 = 0.0;
    double p = 1.0 / std::sqrt(mass);
    double dpm1 = 0.0;
    double dp = 0.0;
    sum_sq = p * p;
    for (int k = 0; k < n; ++k) {
      const double sb_next = std::sqrt(k + 1 < n ? rec.beta[k + 1] : 0.0);
      const double sb = k == 0 ? 0.0 : std::sqrt(rec.beta[k]);
      double next;
      double dnext;
      if (k + 1 < n) {
        next = ((x - rec.alpha[k]) * p - sb * pm1) / sb_next;
        dnext = (p + (x - rec.alpha[k]) * dp - sb * dpm1) / sb_next;
        sum_sq += next * next;
      } else {
        // Monic-scaled last step; only the zero matters.
        next = (x - rec.alpha[k]) * p - sb * pm1;
        dnext = p + (x - rec.alpha[k]) * dp - sb * dpm1;
      }
      pm1 = p;
      dpm1 = dp;
      p = next;
      dp = dnext;
    }
    pn = p;
    dpn = dp;
  };
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double pn;
    double dpn;
    double ss;
    for (int it = 0; it < 2; ++it) {
      eval(x, pn, dpn, ss);
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    eval(x, pn, dpn, ss);
    rule.nodes.push_back(x);
    rule.weights.push_back(1.0 / ss);
  }
  return rule;
}

/// Quadrature moment with a Gauss rule matched to each continuous kernel; atoms
/// are added exactly.
inline Matrix moment_quadrature_oracle(const WeightMatrix& w, int n, int nodes) {
  Matrix mu = Matrix::Zero(w.size(), w.size());
  for (const auto& part : w.continuous()) {
    const QuasiDensity& d = part.density;
    const int needed = (n + d.poly().degree() + 2 + 1) / 2;
    if (nodes < needed) {
      throw DomainError("moment_quadrature_oracle: need at least " + std::to_string(needed) +
                        " nodes");
    }
    const GaussRule rule = gauss_rule(d.kernel(), d.alpha(), d.beta(), nodes);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      mu += part.scale * rule.weights[i] * std::pow(x, n) * d.poly()(x);
    }
  }
  for (const auto& atom : w.atoms()) mu += atom.scale * std::pow(atom.location, n) * atom.mass;
  return mu;
}

}  // namespace matorth
