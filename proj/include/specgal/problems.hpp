#pragma once

// Manufactured-solution test problems: -Laplace(u) + gamma u = f on Omega
// with u = scale * g(s) * (1 - |Psi(s)|^2) and f computed exactly through
// hyper-dual second derivatives.

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "specgal/domainmap.hpp"
#include "specgal/galerkin.hpp"
#include "specgal/hyperdual.hpp"

namespace specgal {

enum class GammaKind { zero, one, exp_s_minus_t };
enum class FactorKind { one, cos_pi_s, sin_half_s_minus_t };

/// Declarative description of a catalog problem.
struct ProblemSpec {
  std::string name;
  std::string map = "planar_quadratic";  // identity2 | identity3 | planar_quadratic | ball_quadratic
  double a = 0.5;
  double b = 0.9;
  GammaKind gamma = GammaKind::exp_s_minus_t;
  FactorKind factor = FactorKind::cos_pi_s;
  double scale = 1.0;

  [[nodiscard]] int dim() const {
    if (map == "identity2" || map == "planar_quadratic") return 2;
    if (map == "identity3" || map == "ball_quadratic") return 3;
    throw std::invalid_argument("unknown map '" + map + "'");
  }
};

namespace detail {

template <int D, typename T>
std::array<T, D> catalog_inverse(const ProblemSpec& spec, const std::array<T, D>& s) {
  if (spec.map == "identity2" || spec.map == "identity3") return s;
  std::array<T, D> x;
  const auto [px, py] = planar_quadratic_inverse(spec.a, s[0], s[1]);
  x[0] = px;
  x[1] = py;
  if constexpr (D == 3) x[2] = quadratic_axis_inverse(spec.b, s[2]);
  return x;
}

template <int D, typename T>
T catalog_solution(const ProblemSpec& spec, const std::array<T, D>& s) {
  using std::cos;
  using std::sin;
  const std::array<T, D> x = catalog_inverse<D>(spec, s);
  T bubble = T(1.0);
  for (int i = 0; i < D; ++i) bubble = bubble - x[i] * x[i];
  T g = T(1.0);
  switch (spec.factor) {
    case FactorKind::one: break;
    case FactorKind::cos_pi_s: g = cos(std::numbers::pi * s[0]); break;
    case FactorKind::sin_half_s_minus_t: g = sin(0.5 * (s[0] - s[1])); break;
  }
  return spec.scale * g * bubble;
}

template <int D>
double catalog_gamma(GammaKind kind, const Point<D>& s) {
  switch (kind) {
    case GammaKind::zero: return 0.0;
    case GammaKind::one: return 1.0;
    case GammaKind::exp_s_minus_t: return std::exp(s[0] - s[1]);
  }
  return 0.0;
}

}  // namespace detail

/// -Laplace(u)(s) from hyper-dual evaluation of a generic solution functor.
template <int D, typename U>
double exact_laplacian(const U& u, const Point<D>& s) {
  double lap = 0.0;
  for (int i = 0; i < D; ++i) {
    std::array<HyperDual, D> arg;
    for (int c = 0; c < D; ++c) arg[c] = HyperDual(s[c]);
    arg[i] = HyperDual::variable(s[i]);
    lap += u(arg).e12;
  }
  return lap;
}

template <int D>
EllipticProblem<D> make_problem(const ProblemSpec& spec) {
  if (spec.dim() != D)
    throw std::invalid_argument("problem '" + spec.name + "' is " + std::to_string(spec.dim()) + "-dimensional");
  std::map<std::string, double> params{{"a", spec.a}, {"b", spec.b}};
  EllipticProblem<D> p;
  p.name = spec.name;
  p.map = builtin_map<D>(spec.map, params);
  p.coeff_a = [](const Point<D>&) { return Matrix<D>::Identity().eval(); };
  const GammaKind gk = spec.gamma;
  p.gamma = [gk](const Point<D>& s) { return detail::catalog_gamma<D>(gk, s); };
  auto to_array = [](const Point<D>& s) {
    std::array<double, D> a;
    for (int i = 0; i < D; ++i) a[i] = s[i];
    return a;
  };
  p.true_solution = [spec, to_array](const Point<D>& s) { return detail::catalog_solution<D>(spec, to_array(s)); };
  p.rhs_f = [spec, gk, to_array](const Point<D>& s) {
    auto u = [&spec](const auto& arg) { return detail::catalog_solution<D>(spec, arg); };
    return -exact_laplacian<D>(u, s) + detail::catalog_gamma<D>(gk, s) * u(to_array(s));
  };
  return p;
}

/// Names accepted by builtin_problem_spec.
inline const char* builtin_problem_names() { return "planar_a05, ball_a07_b09"; }

/// planar_a05: planar_quadratic(0.5), gamma = e^{s-t}, u = (1-x^2-y^2) cos(pi s).
/// ball_a07_b09: ball_quadratic(0.7, 0.9), gamma = e^{s-t},
/// u = sin((s-t)/2) (1 - |Psi(s,t,u)|^2).
inline ProblemSpec builtin_problem_spec(const std::string& name) {
  ProblemSpec spec;
  spec.name = name;
  if (name == "planar_a05") {
    spec.map = "planar_quadratic";
    spec.a = 0.5;
    spec.gamma = GammaKind::exp_s_minus_t;
    spec.factor = FactorKind::cos_pi_s;
  } else if (name == "ball_a07_b09") {
    spec.map = "ball_quadratic";
    spec.a = 0.7;
    spec.b = 0.9;
    spec.gamma = GammaKind::exp_s_minus_t;
    spec.factor = FactorKind::sin_half_s_minus_t;
  } else {
    throw std::invalid_argument("unknown problem '" + name + "' (available: " + builtin_problem_names() + ")");
  }
  return spec;
}

template <int D>
EllipticProblem<D> builtin_problem(const std::string& name) {
  return make_problem<D>(builtin_problem_spec(name));
}

/// Parses a key = value problem file. Keys: name, map, a, b, gamma
/// (zero | one | exp_s_minus_t), solution (one | cos_pi_s |
/// sin_half_s_minus_t), scale. '#' starts a comment.
inline ProblemSpec parse_problem_config(std::istream& in, const std::string& source = "<config>") {
  ProblemSpec spec;
  spec.name = source;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto number = [&]() {
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) fail("bad number '" + value + "'");
        return v;
      } catch (const std::logic_error&) {
        fail("bad number '" + value + "'");
      }
      return 0.0;
    };
    if (key == "name") {
      spec.name = value;
    } else if (key == "map") {
      if (value != "identity2" && value != "identity3" && value != "planar_quadratic" && value != "ball_quadratic")
        fail("unknown map '" + value + "'");
      spec.map = value;
    } else if (key == "a") {
      spec.a = number();
    } else if (key == "b") {
      spec.b = number();
    } else if (key == "scale") {
      spec.scale = number();
    } else if (key == "gamma") {
      if (value == "zero") spec.gamma = GammaKind::zero;
      else if (value == "one") spec.gamma = GammaKind::one;
      else if (value == "exp_s_minus_t") spec.gamma = GammaKind::exp_s_minus_t;
      else fail("unknown gamma '" + value + "' (zero, one, exp_s_minus_t)");
    } else if (key == "solution") {
      if (value == "one") spec.factor = FactorKind::one;
      else if (value == "cos_pi_s") spec.factor = FactorKind::cos_pi_s;
      else if (value == "sin_half_s_minus_t") spec.factor = FactorKind::sin_half_s_minus_t;
      else fail("unknown solution '" + value + "' (one, cos_pi_s, sin_half_s_minus_t)");
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return spec;
}

/// A built-in problem name, or a path to a problem file.
inline ProblemSpec resolve_problem(const std::string& name_or_path) {
  try {
    return builtin_problem_spec(name_or_path);
  } catch (const std::invalid_argument&) {
    std::ifstream in(name_or_path);
    if (!in) throw;
    return parse_problem_config(in, name_or_path);
  }
}

}  // namespace specgal
