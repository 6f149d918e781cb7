#pragma once

// Domain maps Phi: B -> Omega, their Jacobians, and the pulled-back elliptic
// coefficients det(J) K A K^T, det(J) gamma(Phi), det(J) f(Phi), K = J^{-1}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "specgal/quadrature.hpp"

namespace specgal {

/// Raised when |det J| falls below 1e-12 at an evaluation point.
class SingularJacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <int D>
struct DomainMap {
  using Vec = Point<D>;
  using Mat = Matrix<D>;

  std::string name;
  std::function<Vec(const Vec&)> phi;
  std::function<Mat(const Vec&)> jacobian;
  std::function<double(const Vec&)> det_j;
  std::optional<std::function<Vec(const Vec&)>> psi_inverse;
  bool analytic_jacobian = true;

  /// A map given only by phi; J comes from central differences (step 1e-6)
  /// and det J from J. Not accurate enough for acceptance-grade runs.
  static DomainMap from_phi(std::string name, std::function<Vec(const Vec&)> phi,
                            std::optional<std::function<Vec(const Vec&)>> inverse = std::nullopt) {
    DomainMap m;
    m.name = std::move(name);
    m.phi = phi;
    m.jacobian = [phi](const Vec& x) {
      constexpr double h = 1e-6;
      Mat j;
      for (int c = 0; c < D; ++c) {
        Vec xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        j.col(c) = (phi(xp) - phi(xm)) / (2.0 * h);
      }
      return j;
    };
    m.det_j = [jac = m.jacobian](const Vec& x) { return jac(x).determinant(); };
    m.psi_inverse = std::move(inverse);
    m.analytic_jacobian = false;
    return m;
  }
};

// Closed-form inverses, generic in the scalar so that manufactured solutions
// can be differentiated through them.

/// (x, y) = Psi(s, t) for s = x - y + a x^2, t = x + y.
template <typename T>
std::pair<T, T> planar_quadratic_inverse(double a, const T& s, const T& t) {
  using std::sqrt;
  const T root = sqrt(1.0 + a * (s + t)) - 1.0;
  const T x = root / a;
  const T y = (a * t - root) / a;
  return {x, y};
}

/// z = Psi_z(u) for u = 2z + b z^2.
template <typename T>
T quadratic_axis_inverse(double b, const T& u) {
  using std::sqrt;
  return (sqrt(1.0 + b * u) - 1.0) / b;
}

template <int D>
DomainMap<D> identity_map() {
  using Vec = Point<D>;
  DomainMap<D> m;
  m.name = D == 2 ? "identity2" : "identity3";
  m.phi = [](const Vec& x) { return x; };
  m.jacobian = [](const Vec&) { return Matrix<D>::Identity().eval(); };
  m.det_j = [](const Vec&) { return 1.0; };
  m.psi_inverse = [](const Vec& s) { return s; };
  return m;
}

namespace detail {
inline void require_open_unit(const char* what, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in (0,1), got " << v;
    throw std::invalid_argument(msg.str());
  }
}
}  // namespace detail

/// s = x - y + a x^2, t = x + y; det J = 2(1 + a x).
inline DomainMap<2> planar_quadratic(double a) {
  detail::require_open_unit("planar_quadratic: a", a);
  using Vec = Point<2>;
  DomainMap<2> m;
  m.name = "planar_quadratic";
  m.phi = [a](const Vec& x) { return Vec(x.x() - x.y() + a * x.x() * x.x(), x.x() + x.y()); };
  m.jacobian = [a](const Vec& x) {
    Matrix<2> j;
    j << 1.0 + 2.0 * a * x.x(), -1.0, 1.0, 1.0;
    return j;
  };
  m.det_j = [a](const Vec& x) { return 2.0 * (1.0 + a * x.x()); };
  m.psi_inverse = [a](const Vec& s) {
    const auto [x, y] = planar_quadratic_inverse(a, s.x(), s.y());
    return Vec(x, y);
  };
  return m;
}

/// The planar map extended by u = 2z + b z^2; det J = 4(1 + a x)(1 + b z).
inline DomainMap<3> ball_quadratic(double a, double b) {
  detail::require_open_unit("ball_quadratic: a", a);
  detail::require_open_unit("ball_quadratic: b", b);
  using Vec = Point<3>;
  DomainMap<3> m;
  m.name = "ball_quadratic";
  m.phi = [a, b](const Vec& x) {
    return Vec(x.x() - x.y() + a * x.x() * x.x(), x.x() + x.y(), 2.0 * x.z() + b * x.z() * x.z());
  };
  m.jacobian = [a, b](const Vec& x) {
    Matrix<3> j;
    j << 1.0 + 2.0 * a * x.x(), -1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0 + 2.0 * b * x.z();
    return j;
  };
  m.det_j = [a, b](const Vec& x) { return 4.0 * (1.0 + a * x.x()) * (1.0 + b * x.z()); };
  m.psi_inverse = [a, b](const Vec& s) {
    const auto [x, y] = planar_quadratic_inverse(a, s.x(), s.y());
    return Vec(x, y, quadratic_axis_inverse(b, s.z()));
  };
  return m;
}

/// Built-in map by name: identity2, identity3, planar_quadratic (a),
/// ball_quadratic (a, b). Parameters are read from `params` by key.
template <int D>
DomainMap<D> builtin_map(const std::string& name, const std::map<std::string, double>& params = {}) {
  auto param = [&](const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("builtin_map: " + name + " needs parameter '" + key + "'");
    return it->second;
  };
  if (D == 2 && name == "identity2") return identity_map<D>();
  if (D == 3 && name == "identity3") return identity_map<D>();
  if constexpr (D == 2) {
    if (name == "planar_quadratic") return planar_quadratic(param("a"));
  } else {
    if (name == "ball_quadratic") return ball_quadratic(param("a"), param("b"));
  }
  throw std::invalid_argument("builtin_map: unknown " + std::to_string(D) +
                              "-d map '" + name + "' (available: " +
                              (D == 2 ? "identity2, planar_quadratic" : "identity3, ball_quadratic") + ")");
}

/// Closed-form inverse of a 2x2 or 3x3 matrix given its determinant.
template <int D>
Matrix<D> inverse_with_det(const Matrix<D>& j, double det) {
  Matrix<D> k;
  if constexpr (D == 2) {
    k << j(1, 1), -j(0, 1), -j(1, 0), j(0, 0);
  } else {
    k(0, 0) = j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1);
    k(0, 1) = j(0, 2) * j(2, 1) - j(0, 1) * j(2, 2);
    k(0, 2) = j(0, 1) * j(1, 2) - j(0, 2) * j(1, 1);
    k(1, 0) = j(1, 2) * j(2, 0) - j(1, 0) * j(2, 2);
    k(1, 1) = j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0);
    k(1, 2) = j(0, 2) * j(1, 0) - j(0, 0) * j(1, 2);
    k(2, 0) = j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0);
    k(2, 1) = j(0, 1) * j(2, 0) - j(0, 0) * j(2, 1);
    k(2, 2) = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
  }
  return k / det;
}

/// Coefficients of the original problem on Omega.
template <int D>
struct ProblemCoeffs {
  std::function<Matrix<D>(const Point<D>&)> coeff_a;
  std::function<double(const Point<D>&)> gamma;
  std::function<double(const Point<D>&)> rhs_f;
};

/// Scaled coefficients of the equivalent problem on the ball at one point.
template <int D>
struct ScaledCoeffsAt {
  Matrix<D> a_tilde_scaled;
  double gamma_scaled = 0.0;
  double f_scaled = 0.0;
  double det_j = 0.0;
};

template <int D>
class TransformedCoeffs {
 public:
  using Vec = Point<D>;
  using Mat = Matrix<D>;

  TransformedCoeffs(DomainMap<D> map, ProblemCoeffs<D> problem)
      : map_(std::move(map)), problem_(std::move(problem)) {}

  /// det(J) K A(Phi) K^T, det(J) gamma(Phi), det(J) f(Phi) at x.
  [[nodiscard]] ScaledCoeffsAt<D> at(const Vec& x) const {
    const double det = map_.det_j(x);
    if (!(std::abs(det) >= 1e-12)) {
      std::ostringstream msg;
      msg << "singular Jacobian (det J = " << det << ") at x = (" << x.transpose() << ")";
      throw SingularJacobian(msg.str());
    }
    const Vec s = map_.phi(x);
    const Mat k = inverse_with_det<D>(map_.jacobian(x), det);
    Mat a = det * (k * problem_.coeff_a(s) * k.transpose());
    a = 0.5 * (a + a.transpose()).eval();
    return {a, det * problem_.gamma(s), problem_.rhs_f ? det * problem_.rhs_f(s) : 0.0, det};
  }

  [[nodiscard]] Mat a_tilde_scaled(const Vec& x) const { return at(x).a_tilde_scaled; }
  [[nodiscard]] double gamma_scaled(const Vec& x) const { return at(x).gamma_scaled; }
  [[nodiscard]] double f_scaled(const Vec& x) const { return at(x).f_scaled; }

  [[nodiscard]] const DomainMap<D>& map() const { return map_; }
  [[nodiscard]] const ProblemCoeffs<D>& problem() const { return problem_; }

 private:
  DomainMap<D> map_;
  ProblemCoeffs<D> problem_;
};

template <int D>
TransformedCoeffs<D> transformed_coeffs(const DomainMap<D>& map, const ProblemCoeffs<D>& problem) {
  return TransformedCoeffs<D>(map, problem);
}

struct EllipticityReport {
  double lambda_star = 0.0;  // min over nodes of lambda_min(K^T K)
  double c0 = 0.0;           // min over nodes of lambda_min(A(Phi(x)))
  double c0_tilde = 0.0;     // c0 * lambda_star
};

/// Discrete ellipticity certificate: inspects the rule's nodes only.
template <int D>
EllipticityReport ellipticity_report(const DomainMap<D>& map,
                                     const std::function<Matrix<D>(const Point<D>&)>& coeff_a,
                                     const BallRule<D>& rule) {
  EllipticityReport rep;
  rep.lambda_star = std::numeric_limits<double>::infinity();
  rep.c0 = std::numeric_limits<double>::infinity();
  for (const Point<D>& x : rule.nodes) {
    const Matrix<D> j = map.jacobian(x);
    const double det = j.determinant();
    if (!(std::abs(det) >= 1e-12)) {
      std::ostringstream msg;
      msg << "singular Jacobian (det J = " << det << ") at x = (" << x.transpose() << ")";
      throw SingularJacobian(msg.str());
    }
    const Eigen::SelfAdjointEigenSolver<Matrix<D>> jtj(j.transpose() * j, Eigen::EigenvaluesOnly);
    rep.lambda_star = std::min(rep.lambda_star, 1.0 / jtj.eigenvalues()[D - 1]);
    const Eigen::SelfAdjointEigenSolver<Matrix<D>> ea(coeff_a(map.phi(x)), Eigen::EigenvaluesOnly);
    rep.c0 = std::min(rep.c0, ea.eigenvalues()[0]);
  }
  rep.c0_tilde = rep.c0 * rep.lambda_star;
  return rep;
}

}  // namespace specgal
