#pragma once

// Hyper-dual numbers: a + b e1 + c e2 + d e1e2 with e1^2 = e2^2 = 0.
// Seeding e1 and e2 along the same coordinate yields the exact second
// derivative in the e1e2 part, free of truncation error.

#include <cmath>

namespace specgal {

struct HyperDual {
  double f = 0.0;    // value
  double e1 = 0.0;   // d/dx along seed 1
  double e2 = 0.0;   // d/dx along seed 2
  double e12 = 0.0;  // mixed second derivative

  constexpr HyperDual() = default;
  constexpr HyperDual(double v) : f(v) {}  // NOLINT: implicit from constants
  constexpr HyperDual(double v, double d1, double d2, double d12) : f(v), e1(d1), e2(d2), e12(d12) {}

  /// Variable seeded in both directions.
  static constexpr HyperDual variable(double v) { return {v, 1.0, 1.0, 0.0}; }

  HyperDual& operator+=(const HyperDual& o) { return *this = *this + o; }
  HyperDual& operator-=(const HyperDual& o) { return *this = *this - o; }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  friend constexpr HyperDual operator+(const HyperDual& a, const HyperDual& b) {
    return {a.f + b.f, a.e1 + b.e1, a.e2 + b.e2, a.e12 + b.e12};
  }
  friend constexpr HyperDual operator-(const HyperDual& a, const HyperDual& b) {
    return {a.f - b.f, a.e1 - b.e1, a.e2 - b.e2, a.e12 - b.e12};
  }
  friend constexpr HyperDual operator-(const HyperDual& a) { return {-a.f, -a.e1, -a.e2, -a.e12}; }
  friend constexpr HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.f * b.f, a.f * b.e1 + a.e1 * b.f, a.f * b.e2 + a.e2 * b.f,
            a.f * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.f};
  }
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    return a * reciprocal(b);
  }

  // g(x) lifted through a scalar function with derivatives g0, g1, g2.
  static constexpr HyperDual chain(const HyperDual& x, double g0, double g1, double g2) {
    return {g0, g1 * x.e1, g1 * x.e2, g1 * x.e12 + g2 * x.e1 * x.e2};
  }

  friend HyperDual reciprocal(const HyperDual& x) {
    const double inv = 1.0 / x.f;
    return chain(x, inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend HyperDual sqrt(const HyperDual& x) {
    const double s = std::sqrt(x.f);
    return chain(x, s, 0.5 / s, -0.25 / (s * x.f));
  }
  friend HyperDual exp(const HyperDual& x) {
    const double e = std::exp(x.f);
    return chain(x, e, e, e);
  }
  friend HyperDual sin(const HyperDual& x) {
    return chain(x, std::sin(x.f), std::cos(x.f), -std::sin(x.f));
  }
  friend HyperDual cos(const HyperDual& x) {
    return chain(x, std::cos(x.f), -std::sin(x.f), -std::cos(x.f));
  }
};

}  // namespace specgal
