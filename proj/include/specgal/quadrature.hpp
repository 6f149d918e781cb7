#pragma once

// Product quadrature over the unit disk and the unit ball.

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "specgal/orthopoly.hpp"

namespace specgal {

template <int D>
using Point = Eigen::Matrix<double, D, 1>;

template <int D>
using Matrix = Eigen::Matrix<double, D, D>;

/// Polar/spherical coordinates of a node: radius, azimuth, and (for D=3)
/// polar angle measured from +z.
struct SphericalCoords {
  double r = 0.0;
  double azimuth = 0.0;
  double polar = 0.0;
};

template <int D>
struct BallRule {
  static_assert(D == 2 || D == 3);
  static constexpr int dim = D;

  int q = 0;
  int exact_degree = 0;
  std::vector<Point<D>> nodes;
  std::vector<double> weights;
  std::vector<SphericalCoords> coords;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// (q+1)-point Gauss-Legendre in r on [0,1] times a (2q+1)-point trapezoid
/// in azimuth. Exact on polynomials of total degree <= 2q.
inline BallRule<2> disk_rule(int q) {
  if (q < 1) throw std::invalid_argument("disk_rule: q must be >= 1");
  const GaussRule1D radial = gauss_legendre(q + 1).rescaled(0.0, 1.0);
  const int n_az = 2 * q + 1;
  const double dtheta = 2.0 * std::numbers::pi / n_az;

  BallRule<2> rule;
  rule.q = q;
  rule.exact_degree = 2 * q;
  rule.nodes.reserve(static_cast<std::size_t>((q + 1) * n_az));
  for (int l = 0; l <= q; ++l) {
    const double r = radial.nodes[l];
    for (int m = 0; m < n_az; ++m) {
      const double theta = dtheta * m;
      rule.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
      rule.weights.push_back(radial.weights[l] * dtheta * r);
      rule.coords.push_back({r, theta, 0.0});
    }
  }
  return rule;
}

/// 2q-point trapezoid in azimuth (nodes pi*i/q, weight pi/q), q-point
/// Gauss-Legendre in cos(polar), and the rescaled q-point (1+t)^2 Gauss rule
/// in r. Exact on polynomials of total degree <= 2q-1.
inline BallRule<3> ball_rule(int q) {
  if (q < 1) throw std::invalid_argument("ball_rule: q must be >= 1");
  const GaussRule1D polar = gauss_legendre(q);
  const GaussRule1D radial = radial_r2_rule(q);
  const double daz = std::numbers::pi / q;

  BallRule<3> rule;
  rule.q = q;
  rule.exact_degree = 2 * q - 1;
  rule.nodes.reserve(static_cast<std::size_t>(2 * q * q * q));
  for (int i = 1; i <= 2 * q; ++i) {
    const double az = daz * i;
    const double ca = std::cos(az), sa = std::sin(az);
    for (int j = 0; j < q; ++j) {
      const double cp = polar.nodes[j];
      const double pol = std::acos(cp);
      const double sp = std::sin(pol);
      for (int k = 0; k < q; ++k) {
        const double r = radial.nodes[k];
        rule.nodes.emplace_back(r * sp * ca, r * sp * sa, r * cp);
        rule.weights.push_back(daz * polar.weights[j] * radial.weights[k]);
        rule.coords.push_back({r, az, pol});
      }
    }
  }
  return rule;
}

/// sum_i w_i g(x_i). A non-finite value of g is reported with its node.
template <int D, typename F>
double integrate(const BallRule<D>& rule, F&& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = g(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate: non-finite integrand at node " << i << " = ("
          << rule.nodes[i].transpose() << ")";
      throw std::domain_error(msg.str());
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

}  // namespace specgal
