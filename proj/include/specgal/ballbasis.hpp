#pragma once

// Orthonormal polynomial bases of Pi_n on the unit disk (ridge polynomials)
// and the unit ball (Jacobi radial part times real spherical harmonics), the
// trial functions psi = (1 - |x|^2) phi, and their Cartesian gradients.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "specgal/orthopoly.hpp"
#include "specgal/quadrature.hpp"

namespace specgal {

/// Ridge polynomial phi_{n,k}, 0 <= k <= n. Ordered by n, then k.
struct DiskIndex {
  int position = 0;
  int n = 0;
  int k = 0;
  [[nodiscard]] int degree() const { return n; }
};

/// Ball polynomial phi_{m,j,beta}, 0 <= j <= m/2, 0 <= beta <= 2(m-2j).
/// Ordered by m, then j, then beta.
struct BallIndex {
  int position = 0;
  int m = 0;
  int j = 0;
  int beta = 0;
  [[nodiscard]] int degree() const { return m; }
  [[nodiscard]] int harmonic_degree() const { return m - 2 * j; }
};

template <int D>
using BasisIndex = std::conditional_t<D == 2, DiskIndex, BallIndex>;

template <int D>
struct BasisEval {
  double value = 0.0;
  Point<D> gradient = Point<D>::Zero();
};

/// Dimension of Pi_n in d variables.
inline int dim_pi(int n, int d) {
  if (n < 0) throw std::invalid_argument("dim_pi: negative degree");
  if (d == 2) return (n + 1) * (n + 2) / 2;
  if (d == 3) return (n + 1) * (n + 2) * (n + 3) / 6;
  throw std::invalid_argument("dim_pi: dimension must be 2 or 3");
}

/// All basis indices of Pi_n in lexicographic order.
template <int D>
std::vector<BasisIndex<D>> basis_indices(int n) {
  if (n < 0) throw std::invalid_argument("basis_indices: negative degree");
  std::vector<BasisIndex<D>> out;
  out.reserve(static_cast<std::size_t>(dim_pi(n, D)));
  int pos = 0;
  if constexpr (D == 2) {
    for (int deg = 0; deg <= n; ++deg)
      for (int k = 0; k <= deg; ++k) out.push_back({pos++, deg, k});
  } else {
    for (int m = 0; m <= n; ++m)
      for (int j = 0; j <= m / 2; ++j)
        for (int beta = 0; beta <= 2 * (m - 2 * j); ++beta) out.push_back({pos++, m, j, beta});
  }
  return out;
}

/// phi_{n,k}(x) = U_n(x cos(kh) + y sin(kh)) / sqrt(pi), h = pi/(n+1).
inline BasisEval<2> ridge_phi(const DiskIndex& idx, const Point<2>& x) {
  const double h = std::numbers::pi / (idx.n + 1);
  const Point<2> dir(std::cos(idx.k * h), std::sin(idx.k * h));
  const ValueDeriv u = chebyshev_u(idx.n, dir.dot(x));
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  return {u.value * inv_sqrt_pi, (u.derivative * inv_sqrt_pi) * dir};
}

namespace detail {

// Order of the associated Legendre factor for harmonic slot beta.
inline int harmonic_order(int beta) { return (beta % 2 == 0) ? beta / 2 : (beta + 1) / 2; }

// Normalizer making S_{beta,k} orthonormal on S^2 with no Condon-Shortley
// phase: sqrt((2k+1)/(4 pi) (k-l)!/(k+l)!), times sqrt(2) for l > 0.
inline double harmonic_normalizer(int k, int l) {
  double ratio = 1.0;
  for (int i = k - l + 1; i <= k + l; ++i) ratio /= i;
  double c = std::sqrt((2.0 * k + 1.0) / (4.0 * std::numbers::pi) * ratio);
  if (l > 0) c *= std::numbers::sqrt2;
  return c;
}

// Trigonometric azimuthal factor and its derivative.
inline ValueDeriv harmonic_trig(int beta, double azimuth) {
  const int l = harmonic_order(beta);
  if (beta % 2 == 0) return {std::cos(l * azimuth), -l * std::sin(l * azimuth)};
  return {std::sin(l * azimuth), l * std::cos(l * azimuth)};
}

// c_{m,j} = 2^{5/4 + m/2 - j}: with t = 2r^2 - 1 the radial integral
// int_0^1 r^{2k+2} p_j(t)^2 dr equals 2^{-k-5/2}, k = m - 2j.
inline double ball_radial_constant(int m, int j) {
  return std::pow(2.0, 1.25 + 0.5 * m - j);
}

// Re or Im of (x + i y)^l and its gradient.
inline BasisEval<2> planar_harmonic(int beta, double x, double y) {
  const int l = harmonic_order(beta);
  const std::complex<double> w(x, y);
  std::complex<double> wl1(1.0, 0.0);  // w^{l-1}
  for (int i = 1; i < l; ++i) wl1 *= w;
  const std::complex<double> wl = (l == 0) ? std::complex<double>(1.0, 0.0) : wl1 * w;
  BasisEval<2> out;
  if (beta % 2 == 0) {
    out.value = wl.real();
    if (l > 0) out.gradient = Point<2>(l * wl1.real(), -l * wl1.imag());
  } else {
    out.value = wl.imag();
    out.gradient = Point<2>(l * wl1.imag(), l * wl1.real());
  }
  return out;
}

// r^{k-l} d^l P_k(z/r) expanded as a polynomial in z and r^2, with gradient.
// Used only very close to the origin.
inline BasisEval<3> zonal_polynomial(int k, int l, const Point<3>& x) {
  auto binom = [](int n, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
  };
  const double r2 = x.squaredNorm();
  const double z = x.z();
  BasisEval<3> out;
  for (int i = 0; 2 * i <= k - l; ++i) {
    const int e = k - l - 2 * i;
    double falling = 1.0;
    for (int s = 0; s < l; ++s) falling *= (k - 2 * i - s);
    const double a = std::ldexp((i % 2 ? -1.0 : 1.0) * binom(k, i) * binom(2 * k - 2 * i, k) * falling, -k);
    const double ze = std::pow(z, e);
    const double r2i = std::pow(r2, i);
    out.value += a * ze * r2i;
    const double dr2 = (i > 0) ? a * ze * i * std::pow(r2, i - 1) : 0.0;
    const double dz = (e > 0) ? a * e * std::pow(z, e - 1) * r2i : 0.0;
    out.gradient += 2.0 * dr2 * x;
    out.gradient.z() += dz;
  }
  return out;
}

struct BallFactors {
  int k = 0;
  int l = 0;
  double scale = 0.0;  // c_{m,j} * normalizer
};

inline BallFactors ball_factors(const BallIndex& idx) {
  const int k = idx.harmonic_degree();
  const int l = harmonic_order(idx.beta);
  return {k, l, ball_radial_constant(idx.m, idx.j) * harmonic_normalizer(k, l)};
}

// Spherical-coordinate evaluation with the Cartesian gradient by the chain
// rule. Requires r > 0 and a polar angle away from the axis.
inline BasisEval<3> ball_phi_spherical(const BallIndex& idx, double r, double azimuth, double polar) {
  const BallFactors f = ball_factors(idx);
  const ValueDeriv p = jacobi_normalized(idx.j, f.k + 0.5, 2.0 * r * r - 1.0);
  const double rk = std::pow(r, f.k);
  const double radial = rk * p.value;
  const double d_radial = (f.k > 0 ? f.k * std::pow(r, f.k - 1) * p.value : 0.0) + 4.0 * rk * r * p.derivative;
  const ValueDeriv az = harmonic_trig(idx.beta, azimuth);
  const double cp = std::cos(polar), sp = std::sin(polar);
  const double leg = assoc_legendre(f.k, f.l, cp);
  const double d_leg = f.l * (cp / sp) * leg - assoc_legendre(f.k, f.l + 1, cp);

  const double dr = f.scale * d_radial * az.value * leg;
  const double daz = f.scale * radial * az.derivative * leg;
  const double dpol = f.scale * radial * az.value * d_leg;
  const double ca = std::cos(azimuth), sa = std::sin(azimuth);

  BasisEval<3> out;
  out.value = f.scale * radial * az.value * leg;
  out.gradient.x() = dr * sp * ca - daz * sa / (r * sp) + dpol * ca * cp / r;
  out.gradient.y() = dr * sp * sa + daz * ca / (r * sp) + dpol * sa * cp / r;
  out.gradient.z() = dr * cp - dpol * sp / r;
  return out;
}

// Solid-harmonic form: phi = scale * p_j(2r^2-1) * H_l(x,y) * r^{k-l} d^lP_k(z/r).
// Smooth on the polar axis; for r below 1e-8 the zonal factor switches to
// its polynomial expansion.
inline BasisEval<3> ball_phi_cartesian(const BallIndex& idx, const Point<3>& x) {
  const BallFactors f = ball_factors(idx);
  const double r2 = x.squaredNorm();
  const double r = std::sqrt(r2);
  const ValueDeriv p = jacobi_normalized(idx.j, f.k + 0.5, 2.0 * r2 - 1.0);
  const BasisEval<2> h = planar_harmonic(idx.beta, x.x(), x.y());

  BasisEval<3> zonal;
  if (r < 1e-8) {
    zonal = zonal_polynomial(f.k, f.l, x);
  } else {
    const int e = f.k - f.l;
    const ValueDeriv g = legendre_derivative(f.k, f.l, x.z() / r);
    const double re = std::pow(r, e);
    zonal.value = re * g.value;
    Point<3> dt = -x.z() * x / (r2 * r);  // grad(z/r)
    dt.z() += 1.0 / r;
    zonal.gradient = (e > 0 ? e * std::pow(r, e - 2) * g.value : 0.0) * x + re * g.derivative * dt;
  }

  const Point<3> grad_h(h.gradient.x(), h.gradient.y(), 0.0);
  BasisEval<3> out;
  out.value = f.scale * p.value * h.value * zonal.value;
  out.gradient = f.scale * (4.0 * p.derivative * h.value * zonal.value * x +
                            p.value * zonal.value * grad_h + p.value * h.value * zonal.gradient);
  return out;
}

}  // namespace detail

/// Real spherical harmonic S_{beta,k}, orthonormal on S^2.
/// beta even: cos(beta/2 az) T_k^{beta/2}(cos polar);
/// beta odd:  sin((beta+1)/2 az) T_k^{(beta+1)/2}(cos polar).
inline double sph_harm(int beta, int k, double azimuth, double polar) {
  if (k < 0 || beta < 0 || beta > 2 * k)
    throw std::invalid_argument("sph_harm: require 0 <= beta <= 2k, got beta=" + std::to_string(beta) +
                                ", k=" + std::to_string(k));
  const int l = detail::harmonic_order(beta);
  return detail::harmonic_normalizer(k, l) * detail::harmonic_trig(beta, azimuth).value *
         assoc_legendre(k, l, std::cos(polar));
}

/// phi_{m,j,beta} with its Cartesian gradient. The spherical chain rule is
/// used away from the origin and the polar axis (both within 1e-8); the
/// solid-harmonic form is used there.
inline BasisEval<3> ball_phi(const BallIndex& idx, const Point<3>& x) {
  const double r = x.norm();
  const double rho = std::hypot(x.x(), x.y());
  if (r < 1e-8 || rho < 1e-8) return detail::ball_phi_cartesian(idx, x);
  return detail::ball_phi_spherical(idx, r, std::atan2(x.y(), x.x()), std::atan2(rho, x.z()));
}

template <int D>
BasisEval<D> basis_phi(const BasisIndex<D>& idx, const Point<D>& x) {
  if constexpr (D == 2)
    return ridge_phi(idx, x);
  else
    return ball_phi(idx, x);
}

/// psi = (1 - |x|^2) phi; gradient by the product rule.
template <int D>
BasisEval<D> trial_psi(const BasisIndex<D>& idx, const Point<D>& x) {
  const BasisEval<D> phi = basis_phi<D>(idx, x);
  const double bubble = 1.0 - x.squaredNorm();
  return {bubble * phi.value, bubble * phi.gradient - 2.0 * phi.value * x};
}

/// Trial-function values and gradients tabulated at every node of a rule.
/// Row p of `values` holds psi_1..psi_N at node p; gradients are stored as
/// D consecutive rows per node.
template <int D>
struct BasisTable {
  int degree = 0;
  std::vector<BasisIndex<D>> indices;
  Eigen::MatrixXd values;     // nodes x N
  Eigen::MatrixXd gradients;  // (D * nodes) x N

  BasisTable(const BallRule<D>& rule, int n) : degree(n), indices(basis_indices<D>(n)) {
    const auto nodes = static_cast<Eigen::Index>(rule.size());
    const auto count = static_cast<Eigen::Index>(indices.size());
    values.resize(nodes, count);
    gradients.resize(D * nodes, count);
    for (Eigen::Index p = 0; p < nodes; ++p) {
      const Point<D>& x = rule.nodes[static_cast<std::size_t>(p)];
      const double bubble = 1.0 - x.squaredNorm();
      for (Eigen::Index c = 0; c < count; ++c) {
        const auto& idx = indices[static_cast<std::size_t>(c)];
        BasisEval<D> phi;
        if constexpr (D == 3) {
          const SphericalCoords& sc = rule.coords[static_cast<std::size_t>(p)];
          phi = detail::ball_phi_spherical(idx, sc.r, sc.azimuth, sc.polar);
        } else {
          phi = ridge_phi(idx, x);
        }
        values(p, c) = bubble * phi.value;
        const Point<D> g = bubble * phi.gradient - 2.0 * phi.value * x;
        for (int d = 0; d < D; ++d) gradients(D * p + d, c) = g[d];
      }
    }
  }
};

}  // namespace specgal
