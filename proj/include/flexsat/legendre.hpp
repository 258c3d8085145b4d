#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "flexsat/types.hpp"

namespace flexsat::legendre {

template <typename Scalar>
struct GaussRule {
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;
};

/// Gauss-Legendre rule with `n` points on [-1, 1]. Newton iteration on the
/// three-term recurrence from Chebyshev-like initial guesses.
template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n) {
  using std::abs;
  using std::atan;
  using std::cos;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule<Scalar> rule{VectorX<Scalar>(n), VectorX<Scalar>(n)};
  if (n == 1) {
    rule.nodes(0) = Scalar(0);
    rule.weights(0) = Scalar(2);
    return rule;
  }
  // P_n(x) and P_n'(x) via the recurrence.
  auto eval = [n](const Scalar& x, Scalar& p, Scalar& dp) {
    Scalar p0(1), p1 = x;
    for (int k = 1; k < n; ++k) {
      Scalar p2 = (Scalar(2 * k + 1) * x * p1 - Scalar(k) * p0) / Scalar(k + 1);
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
  };
  const Scalar pi = Scalar(4) * atan(Scalar(1));
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar p, dp;
    for (int iter = 0; iter < 100; ++iter) {
      eval(x, p, dp);
      const Scalar dx = p / dp;
      x -= dx;
      if (abs(dx) <= Scalar(4) * eps) break;
    }
    eval(x, p, dp);
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = Scalar(0);
  return rule;
}

/// Gauss rule mapped to [lo, hi].
template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n, const Scalar& lo, const Scalar& hi) {
  GaussRule<Scalar> ref = gauss_legendre<Scalar>(n);
  const Scalar half = (hi - lo) / Scalar(2);
  const Scalar mid = (hi + lo) / Scalar(2);
  ref.nodes = (ref.nodes.array() * half + mid).matrix();
  ref.weights *= half;
  return ref;
}

/// Values P_0(x) .. P_{n-1}(x).
template <typename Scalar>
VectorX<Scalar> polynomials(int n, const Scalar& x) {
  VectorX<Scalar> p(n);
  if (n > 0) p(0) = Scalar(1);
  if (n > 1) p(1) = x;
  for (int k = 1; k + 1 < n; ++k)
    p(k + 1) = (Scalar(2 * k + 1) * x * p(k) - Scalar(k) * p(k - 1)) / Scalar(k + 1);
  return p;
}

/// Evaluates sum_k c_k P_k(x).
template <typename Scalar>
Scalar evaluate(const VectorX<Scalar>& coeffs, const Scalar& x) {
  const int n = static_cast<int>(coeffs.size());
  if (n == 0) return Scalar(0);
  return coeffs.dot(polynomials<Scalar>(n, x));
}

/// Legendre coefficients of x -> integral_{-1}^{x} f(t) dt, where f has
/// Legendre coefficients `coeffs`. Uses (2k+1) P_k = P'_{k+1} - P'_{k-1}.
template <typename Scalar>
VectorX<Scalar> antiderivative(const VectorX<Scalar>& coeffs) {
  const Eigen::Index n = coeffs.size();
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == 0) {
      out(0) += coeffs(0);
      out(1) += coeffs(0);
    } else {
      const Scalar c = coeffs(k) / Scalar(2 * k + 1);
      out(k + 1) += c;
      out(k - 1) -= c;
    }
  }
  return out;
}

}  // namespace flexsat::legendre
