#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "specgal/domainmap.hpp"
#include "specgal/quadrature.hpp"

namespace {

using namespace specgal;

template <int D>
ProblemCoeffs<D> unit_problem() {
  return {[](const Point<D>&) { return Matrix<D>::Identity().eval(); },
          [](const Point<D>& s) { return 1.0 + s.squaredNorm(); },
          [](const Point<D>& s) { return std::cos(s[0]) + s[D - 1]; }};
}

// det(J) K K^T for the planar map, worked by hand.
Matrix<2> planar_closed_form(double a, double x) {
  Matrix<2> m;
  m << 1.0, a * x, a * x, 2 * a * a * x * x + 2 * a * x + 1.0;
  return m / (1.0 + a * x);
}

Matrix<3> ball_closed_form(double a, double b, double x, double z) {
  Matrix<3> m = Matrix<3>::Zero();
  m.topLeftCorner<2, 2>() = 2.0 * (1.0 + b * z) * planar_closed_form(a, x);
  m(2, 2) = (1.0 + a * x) / (1.0 + b * z);
  return m;
}

TEST(IdentityMap, CoefficientsUnchanged) {
  const auto p = unit_problem<3>();
  const auto tc = transformed_coeffs(identity_map<3>(), p);
  for (const auto& x : oracle::random_ball_points<3>(20, 0.99, 1)) {
    const auto c = tc.at(x);
    EXPECT_EQ(c.det_j, 1.0);
    EXPECT_LT((c.a_tilde_scaled - Matrix<3>::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_DOUBLE_EQ(c.gamma_scaled, p.gamma(x));
    EXPECT_DOUBLE_EQ(c.f_scaled, p.rhs_f(x));
  }
}

TEST(PlanarQuadratic, ExamplesAndClosedForm) {
  const auto m = planar_quadratic(0.5);
  EXPECT_DOUBLE_EQ(m.det_j(Point<2>(0.4, -0.3)), 2.4);
  EXPECT_EQ(m.phi(Point<2>::Zero()).norm(), 0.0);
  const Point<2> s = m.phi(Point<2>(0.5, 0.25));
  EXPECT_DOUBLE_EQ(s.x(), 0.5 - 0.25 + 0.125);
  EXPECT_DOUBLE_EQ(s.y(), 0.75);

  const auto tc = transformed_coeffs(m, unit_problem<2>());
  for (const auto& x : oracle::random_ball_points<2>(100, 1.0, 2)) {
    const auto c = tc.at(x);
    EXPECT_LT((c.a_tilde_scaled - planar_closed_form(0.5, x.x())).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(c.det_j, m.jacobian(x).determinant(), 1e-13);
  }
}

TEST(BallQuadratic, ClosedForm) {
  const auto m = ball_quadratic(0.7, 0.9);
  EXPECT_DOUBLE_EQ(m.det_j(Point<3>(0.0, 0.3, 0.0)), 4.0);
  const auto tc = transformed_coeffs(m, unit_problem<3>());
  for (const auto& x : oracle::random_ball_points<3>(100, 1.0, 3)) {
    const auto c = tc.at(x);
    EXPECT_LT((c.a_tilde_scaled - ball_closed_form(0.7, 0.9, x.x(), x.z())).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(c.det_j, m.jacobian(x).determinant(), 1e-13);
    EXPECT_LT((c.a_tilde_scaled - c.a_tilde_scaled.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Maps, RoundTrip) {
  const auto m2 = planar_quadratic(0.5);
  for (const auto& x : oracle::random_ball_points<2>(100, 1.0, 4))
    EXPECT_LT(((*m2.psi_inverse)(m2.phi(x)) - x).norm(), 1e-12);
  const auto m3 = ball_quadratic(0.7, 0.9);
  for (const auto& x : oracle::random_ball_points<3>(100, 1.0, 5))
    EXPECT_LT(((*m3.psi_inverse)(m3.phi(x)) - x).norm(), 1e-12);
  // Boundary of the ball, where the inverse is most sensitive.
  for (int i = 0; i < 64; ++i) {
    const double th = 2 * std::numbers::pi * i / 64;
    const Point<2> x(std::cos(th), std::sin(th));
    EXPECT_LT(((*m2.psi_inverse)(m2.phi(x)) - x).norm(), 1e-12);
  }
}

TEST(Maps, JacobianMatchesFiniteDifferences) {
  const auto m2 = planar_quadratic(0.5);
  for (const auto& x : oracle::random_ball_points<2>(50, 0.99, 6)) {
    Matrix<2> fd;
    for (int r = 0; r < 2; ++r)
      fd.row(r) = oracle::fd_gradient<2>([&](const Point<2>& y) { return m2.phi(y)[r]; }, x).transpose();
    EXPECT_LT((fd - m2.jacobian(x)).cwiseAbs().maxCoeff(), 1e-8);
  }
  const auto m3 = ball_quadratic(0.7, 0.9);
  for (const auto& x : oracle::random_ball_points<3>(50, 0.99, 7)) {
    Matrix<3> fd;
    for (int r = 0; r < 3; ++r)
      fd.row(r) = oracle::fd_gradient<3>([&](const Point<3>& y) { return m3.phi(y)[r]; }, x).transpose();
    EXPECT_LT((fd - m3.jacobian(x)).cwiseAbs().maxCoeff(), 1e-8);
  }
  const auto rule = ball_rule(6);
  for (const auto& x : rule.nodes) EXPECT_NEAR(m3.det_j(x), m3.jacobian(x).determinant(), 1e-13);
}

TEST(Maps, FromPhiUsesFiniteDifferences) {
  const auto m = DomainMap<2>::from_phi("double", [](const Point<2>& x) { return Point<2>(2.0 * x); });
  EXPECT_FALSE(m.analytic_jacobian);
  EXPECT_FALSE(m.psi_inverse.has_value());
  EXPECT_LT((m.jacobian(Point<2>(0.1, 0.2)) - 2.0 * Matrix<2>::Identity()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(m.det_j(Point<2>(0.3, 0.0)), 4.0, 1e-8);
}

TEST(Maps, RejectBadParameters) {
  EXPECT_THROW(planar_quadratic(0.0), std::invalid_argument);
  EXPECT_THROW(planar_quadratic(1.0), std::invalid_argument);
  EXPECT_THROW(planar_quadratic(-0.2), std::invalid_argument);
  EXPECT_THROW(ball_quadratic(0.5, 1.5), std::invalid_argument);
  EXPECT_THROW(ball_quadratic(std::nan(""), 0.5), std::invalid_argument);
}

TEST(Maps, BuiltinByName) {
  EXPECT_EQ(builtin_map<2>("planar_quadratic", {{"a", 0.5}}).name, "planar_quadratic");
  EXPECT_EQ(builtin_map<3>("ball_quadratic", {{"a", 0.7}, {"b", 0.9}}).name, "ball_quadratic");
  EXPECT_NO_THROW(builtin_map<2>("identity2"));
  EXPECT_THROW(builtin_map<2>("planar_quadratic"), std::invalid_argument);
  EXPECT_THROW(builtin_map<3>("identity2"), std::invalid_argument);
  try {
    builtin_map<2>("nope");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("planar_quadratic"), std::string::npos);
  }
}

TEST(TransformedCoeffs, SingularJacobianRaises) {
  const auto flat = DomainMap<2>::from_phi("flat", [](const Point<2>& x) { return Point<2>(x.x(), 0.0); });
  const auto tc = transformed_coeffs(flat, unit_problem<2>());
  EXPECT_THROW(tc.at(Point<2>(0.1, 0.1)), SingularJacobian);
  EXPECT_THROW(ellipticity_report(flat, unit_problem<2>().coeff_a, disk_rule(3)), SingularJacobian);
}

TEST(Ellipticity, KnownMaps) {
  const auto id = ellipticity_report(identity_map<3>(), unit_problem<3>().coeff_a, ball_rule(4));
  EXPECT_NEAR(id.lambda_star, 1.0, 1e-15);
  EXPECT_NEAR(id.c0_tilde, 1.0, 1e-15);

  DomainMap<2> scale = identity_map<2>();
  scale.phi = [](const Point<2>& x) { return Point<2>(2.0 * x); };
  scale.jacobian = [](const Point<2>&) { return Matrix<2>(2.0 * Matrix<2>::Identity()); };
  scale.det_j = [](const Point<2>&) { return 4.0; };
  const auto sc = ellipticity_report(scale, unit_problem<2>().coeff_a, disk_rule(4));
  EXPECT_NEAR(sc.lambda_star, 0.25, 1e-15);
}

TEST(Ellipticity, NodewiseBoundHolds) {
  auto check = [](const auto& map, const auto& rule) {
    constexpr int D = std::remove_cvref_t<decltype(rule.nodes[0])>::RowsAtCompileTime;
    const auto p = unit_problem<D>();
    const auto rep = ellipticity_report(map, p.coeff_a, rule);
    EXPECT_GT(rep.lambda_star, 0.0);
    const auto tc = transformed_coeffs(map, p);
    for (const auto& x : rule.nodes) {
      const auto c = tc.at(x);
      const Eigen::SelfAdjointEigenSolver<Matrix<D>> es(c.a_tilde_scaled / c.det_j, Eigen::EigenvaluesOnly);
      EXPECT_GE(es.eigenvalues()[0], rep.c0_tilde - 1e-12);
    }
  };
  check(planar_quadratic(0.5), disk_rule(12));
  check(ball_quadratic(0.7, 0.9), ball_rule(8));
}

}  // namespace
