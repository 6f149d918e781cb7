#pragma once

// Univariate building blocks: Chebyshev polynomials of the second kind,
// orthonormal Jacobi polynomials with weight (1+t)^b, associated Legendre
// functions, and Gauss rules for the Legendre and (1+t)^2 weights.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace specgal {

/// A value together with its first derivative.
struct ValueDeriv {
  double value = 0.0;
  double derivative = 0.0;
};

/// U_n(t) and U_n'(t) through the coupled three-term recurrences
///   U_{k+1}  = 2t U_k - U_{k-1}
///   U_{k+1}' = 2 U_k + 2t U_k' - U_{k-1}'
inline ValueDeriv chebyshev_u(int n, double t) {
  if (n < 0) throw std::invalid_argument("chebyshev_u: negative degree");
  double u_prev = 0.0, u = 1.0;    // U_{-1}, U_0
  double du_prev = 0.0, du = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u_next = 2.0 * t * u - u_prev;
    const double du_next = 2.0 * u + 2.0 * t * du - du_prev;
    u_prev = u;
    u = u_next;
    du_prev = du;
    du = du_next;
  }
  return {u, du};
}

namespace detail {

// Standard (unnormalized) Jacobi polynomial P_n^{(alpha,beta)} and its
// derivative, by the three-term recurrence and its t-derivative.
inline ValueDeriv jacobi_p(int n, double alpha, double beta, double t) {
  if (n == 0) return {1.0, 0.0};
  const double ab = alpha + beta;
  double p_prev = 1.0, dp_prev = 0.0;
  double p = 0.5 * (alpha - beta + (ab + 2.0) * t);
  double dp = 0.5 * (ab + 2.0);
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + ab;
    const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
    const double p_next = ((a2 + a3 * t) * p - a4 * p_prev) / a1;
    const double dp_next = ((a2 + a3 * t) * dp + a3 * p - a4 * dp_prev) / a1;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

// Squared L2 norm of P_n^{(0,beta)} under the weight (1+t)^beta:
// 2^{beta+1} / (2n + beta + 1).
inline double jacobi_0b_norm_sq(int n, double beta) {
  return std::pow(2.0, beta + 1.0) / (2.0 * n + beta + 1.0);
}

}  // namespace detail

/// Orthonormal Jacobi polynomial p_j with respect to (1+t)^b on [-1,1],
/// i.e. P_j^{(0,b)} / ||P_j^{(0,b)}||.
inline ValueDeriv jacobi_normalized(int j, double b, double t) {
  if (j < 0) throw std::invalid_argument("jacobi_normalized: negative degree");
  if (!(b > -1.0)) throw std::invalid_argument("jacobi_normalized: exponent must exceed -1");
  const ValueDeriv p = detail::jacobi_p(j, 0.0, b, t);
  const double scale = 1.0 / std::sqrt(detail::jacobi_0b_norm_sq(j, b));
  return {p.value * scale, p.derivative * scale};
}

/// T_k^l(t) = (1-t^2)^{l/2} d^l/dt^l P_k(t), without the Condon-Shortley
/// phase. Zero when l > k.
inline double assoc_legendre(int k, int l, double t) {
  if (k < 0 || l < 0) throw std::invalid_argument("assoc_legendre: negative index");
  if (l > k) return 0.0;
  const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
  double p_ll = 1.0;  // T_l^l = (2l-1)!! s^l
  for (int i = 1; i <= l; ++i) p_ll *= (2.0 * i - 1.0) * s;
  if (k == l) return p_ll;
  double p_prev = p_ll;
  double p = t * (2.0 * l + 1.0) * p_ll;
  for (int kk = l + 2; kk <= k; ++kk) {
    const double next = (t * (2.0 * kk - 1.0) * p - (kk + l - 1.0) * p_prev) / (kk - l);
    p_prev = p;
    p = next;
  }
  return p;
}

/// d^l/dt^l P_k(t) and its t-derivative, via the Gegenbauer identity
/// d^l P_k = (2l-1)!! C_{k-l}^{(l+1/2)}. Smooth through t = +-1.
inline ValueDeriv legendre_derivative(int k, int l, double t) {
  if (k < 0 || l < 0) throw std::invalid_argument("legendre_derivative: negative index");
  if (l > k) return {0.0, 0.0};
  auto gegenbauer = [t](int n, double lam) {
    double c_prev = 1.0;
    if (n == 0) return c_prev;
    double c = 2.0 * lam * t;
    for (int m = 2; m <= n; ++m) {
      const double next = (2.0 * t * (m + lam - 1.0) * c - (m + 2.0 * lam - 2.0) * c_prev) / m;
      c_prev = c;
      c = next;
    }
    return c;
  };
  double dfact = 1.0;
  for (int i = 1; i <= l; ++i) dfact *= 2.0 * i - 1.0;
  const double value = dfact * gegenbauer(k - l, l + 0.5);
  // d/dt d^l P_k = d^{l+1} P_k = (2l+1)!! C_{k-l-1}^{(l+3/2)}
  const double deriv =
      (k > l) ? dfact * (2.0 * l + 1.0) * gegenbauer(k - l - 1, l + 1.5) : 0.0;
  return {value, deriv};
}

enum class WeightKind { legendre, jacobi_0_2 };

/// A one-dimensional Gauss rule on [-1,1] (or an affine image of it).
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  WeightKind weight_kind = WeightKind::legendre;
  int point_count = 0;

  /// Affine image on [lo, hi]; weights scale by (hi-lo)/2.
  [[nodiscard]] GaussRule1D rescaled(double lo, double hi) const {
    GaussRule1D out = *this;
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out.nodes[i] = lo + half * (nodes[i] + 1.0);
      out.weights[i] = half * weights[i];
    }
    return out;
  }
};

namespace detail {

// q-point Gauss rule for the weight (1+t)^beta. Initial node guesses are the
// eigenvalues of the symmetric Jacobi matrix; each is then polished by Newton
// on the recurrence, and weights come from the closed form
//   w_i = 2^{beta+1} / ((1 - x_i^2) [P_q'(x_i)]^2).
inline GaussRule1D gauss_jacobi_0b(int q, double beta, WeightKind kind) {
  if (q < 1) throw std::invalid_argument("gauss rule: point count must be >= 1");
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(q, q);
  for (int k = 0; k < q; ++k) {
    const double c = 2.0 * k + beta;
    jm(k, k) = (k == 0) ? beta / (beta + 2.0) : beta * beta / (c * (c + 2.0));
    if (k + 1 < q) {
      const double n = k + 1.0;
      const double cn = 2.0 * n + beta;
      const double b = 4.0 * n * n * (n + beta) * (n + beta) / (cn * cn * (cn + 1.0) * (cn - 1.0));
      jm(k, k + 1) = jm(k + 1, k) = std::sqrt(b);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jm, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd guess = eig.eigenvalues();

  GaussRule1D rule;
  rule.weight_kind = kind;
  rule.point_count = q;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const double scale = std::pow(2.0, beta + 1.0);
  for (int i = 0; i < q; ++i) {
    double x = guess[i];
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const ValueDeriv p = jacobi_p(q, 0.0, beta, x);
      const double dx = p.value / p.derivative;
      x -= dx;
      if (std::abs(dx) <= 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("gauss rule: Newton iteration failed to converge for q=" +
                               std::to_string(q));
    const double dp = jacobi_p(q, 0.0, beta, x).derivative;
    rule.nodes[i] = x;
    rule.weights[i] = scale / ((1.0 - x) * (1.0 + x) * dp * dp);
  }
  return rule;
}

}  // namespace detail

/// q-point Gauss-Legendre rule on [-1,1], exact through degree 2q-1.
inline GaussRule1D gauss_legendre(int q) {
  GaussRule1D rule = detail::gauss_jacobi_0b(q, 0.0, WeightKind::legendre);
  // Symmetrize to remove the last-bit asymmetry of independent Newton solves.
  for (int i = 0; i < q / 2; ++i) {
    const int j = q - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

/// q-point Gauss rule for the weight (1+t)^2 on [-1,1], exact for
/// deg p <= 2q-1.
inline GaussRule1D gauss_jacobi_02(int q) {
  return detail::gauss_jacobi_0b(q, 2.0, WeightKind::jacobi_0_2);
}

/// Radial weights for int_0^1 r^2 v(r) dr: nodes (zeta+1)/2, weights nu'/8.
inline GaussRule1D radial_r2_rule(int q) {
  GaussRule1D rule = gauss_jacobi_02(q);
  for (int i = 0; i < q; ++i) {
    rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
    rule.weights[i] /= 8.0;
  }
  return rule;
}

}  // namespace specgal
