#pragma once

// Spectral Galerkin discretization of -div(A grad u) + gamma u = f, u = 0 on
// the boundary, pulled back to the unit disk/ball and expanded in
// X_n = {(1 - |x|^2) p : p in Pi_n}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "specgal/ballbasis.hpp"
#include "specgal/domainmap.hpp"
#include "specgal/quadrature.hpp"

namespace specgal {

/// Raised for non-finite integrands or an orientation-reversing map.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <int D>
struct EllipticProblem {
  std::string name;
  DomainMap<D> map;
  std::function<Matrix<D>(const Point<D>&)> coeff_a;
  std::function<double(const Point<D>&)> gamma;
  std::function<double(const Point<D>&)> rhs_f;
  std::optional<std::function<double(const Point<D>&)>> true_solution;

  [[nodiscard]] ProblemCoeffs<D> coeffs() const { return {coeff_a, gamma, rhs_f}; }
};

template <int D>
struct GalerkinSystem {
  int degree = 0;
  int dimension = 0;
  int quad_q = 0;
  std::vector<BasisIndex<D>> indices;
  DomainMap<D> map;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd load;
  std::optional<Eigen::VectorXd> coeffs;
  double asymmetry = 0.0;  // max |M - M^T| / max |M| before symmetrization
  bool non_positive_definite = false;
  double residual = 0.0;  // ||M a - b||_inf / ||b||_inf after solve
};

/// Quadrature order used when none is given: max(n+2, 10) in 2-d, n+2 in 3-d.
inline int default_quad_order(int n, int d) { return d == 2 ? std::max(n + 2, 10) : n + 2; }

template <int D>
BallRule<D> make_ball_rule(int q) {
  if constexpr (D == 2)
    return disk_rule(q);
  else
    return ball_rule(q);
}

struct AssemblyOptions {
  int chunk_nodes = 256;  // nodes per block update of the matrix
  bool reverse_node_order = false;
};

/// Galerkin matrix M_{lk} = Q[sum_ij (det J A~)_ij d_j psi_k d_i psi_l
/// + det J gamma psi_k psi_l] and load b_l = Q[det J f psi_l].
/// Accumulated in node blocks as M += G^T W G with G the stacked gradient
/// and value rows of the basis table.
template <int D>
GalerkinSystem<D> assemble(const EllipticProblem<D>& problem, int n, int q, const AssemblyOptions& opts = {}) {
  if (n < 0) throw std::invalid_argument("assemble: degree must be >= 0");
  if (q < 1) throw std::invalid_argument("assemble: quadrature order must be >= 1");
  const BallRule<D> rule = make_ball_rule<D>(q);
  const BasisTable<D> table(rule, n);
  const TransformedCoeffs<D> tc = transformed_coeffs(problem.map, problem.coeffs());

  const auto nodes = static_cast<Eigen::Index>(rule.size());
  const auto count = static_cast<Eigen::Index>(table.indices.size());

  for (Eigen::Index c = 0; c < count; ++c) {
    for (Eigen::Index p = 0; p < nodes; ++p) {
      bool finite = std::isfinite(table.values(p, c));
      for (int d = 0; d < D; ++d) finite = finite && std::isfinite(table.gradients(D * p + d, c));
      if (!finite) {
        std::ostringstream msg;
        msg << "assemble: non-finite basis value for basis index " << c << " at node " << p;
        throw AssemblyError(msg.str());
      }
    }
  }

  std::vector<ScaledCoeffsAt<D>> at(static_cast<std::size_t>(nodes));
  for (Eigen::Index p = 0; p < nodes; ++p) {
    const Point<D>& x = rule.nodes[static_cast<std::size_t>(p)];
    auto& c = at[static_cast<std::size_t>(p)] = tc.at(x);
    if (c.det_j <= 0.0) {
      std::ostringstream msg;
      msg << "assemble: det J = " << c.det_j << " <= 0 at node " << p << " = (" << x.transpose() << ")";
      throw AssemblyError(msg.str());
    }
    if (!c.a_tilde_scaled.allFinite() || !std::isfinite(c.gamma_scaled) || !std::isfinite(c.f_scaled)) {
      std::ostringstream msg;
      msg << "assemble: non-finite coefficient at node " << p << " = (" << x.transpose() << ")";
      throw AssemblyError(msg.str());
    }
  }

  GalerkinSystem<D> sys;
  sys.degree = n;
  sys.dimension = static_cast<int>(count);
  sys.quad_q = q;
  sys.indices = table.indices;
  sys.map = problem.map;
  sys.matrix = Eigen::MatrixXd::Zero(count, count);
  sys.load = Eigen::VectorXd::Zero(count);

  constexpr int rows_per_node = D + 1;
  const Eigen::Index chunk = std::max(1, opts.chunk_nodes);
  Eigen::MatrixXd g, wg;
  for (Eigen::Index start = 0; start < nodes; start += chunk) {
    const Eigen::Index len = std::min(chunk, nodes - start);
    g.resize(rows_per_node * len, count);
    wg.resize(rows_per_node * len, count);
    for (Eigen::Index i = 0; i < len; ++i) {
      const Eigen::Index p = opts.reverse_node_order ? (nodes - 1 - (start + i)) : start + i;
      const double w = rule.weights[static_cast<std::size_t>(p)];
      const auto& c = at[static_cast<std::size_t>(p)];
      g.middleRows(rows_per_node * i, D) = table.gradients.middleRows(D * p, D);
      g.row(rows_per_node * i + D) = table.values.row(p);
      wg.middleRows(rows_per_node * i, D).noalias() = (w * c.a_tilde_scaled) * table.gradients.middleRows(D * p, D);
      wg.row(rows_per_node * i + D) = (w * c.gamma_scaled) * table.values.row(p);
      sys.load.noalias() += (w * c.f_scaled) * table.values.row(p).transpose();
    }
    sys.matrix.noalias() += g.transpose() * wg;
  }

  const double scale = sys.matrix.cwiseAbs().maxCoeff();
  sys.asymmetry = scale > 0.0 ? (sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  sys.matrix = (0.5 * (sys.matrix + sys.matrix.transpose())).eval();
  return sys;
}

/// Solves M a = b by Cholesky; on a non-positive pivot falls back to a
/// pivoted LDL^T and marks the system as non-PD.
template <int D>
const Eigen::VectorXd& solve(GalerkinSystem<D>& sys) {
  Eigen::LLT<Eigen::MatrixXd> llt(sys.matrix);
  Eigen::VectorXd alpha;
  if (llt.info() == Eigen::Success) {
    alpha = llt.solve(sys.load);
    sys.non_positive_definite = false;
  } else {
    alpha = Eigen::LDLT<Eigen::MatrixXd>(sys.matrix).solve(sys.load);
    sys.non_positive_definite = true;
  }
  const double bnorm = sys.load.template lpNorm<Eigen::Infinity>();
  const double rnorm = (sys.matrix * alpha - sys.load).template lpNorm<Eigen::Infinity>();
  sys.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!alpha.allFinite() || sys.residual > 1e-10) {
    std::ostringstream msg;
    msg << "solve: relative residual " << sys.residual << " exceeds 1e-10 (degree " << sys.degree << ")";
    throw std::runtime_error(msg.str());
  }
  sys.coeffs = std::move(alpha);
  return *sys.coeffs;
}

enum class Frame { ball, omega };

/// u_n(x) = sum_j a_j psi_j(x). In the omega frame points are pulled back
/// through Psi first.
template <int D>
std::vector<double> evaluate_solution(const GalerkinSystem<D>& sys, const std::vector<Point<D>>& points,
                                      Frame frame = Frame::ball) {
  if (!sys.coeffs) throw std::logic_error("evaluate_solution: system has not been solved");
  if (frame == Frame::omega && !sys.map.psi_inverse)
    throw std::invalid_argument("evaluate_solution: omega frame needs an inverse map; pre-image points instead");
  const Eigen::VectorXd& alpha = *sys.coeffs;
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point<D>& pt : points) {
    const Point<D> x = (frame == Frame::omega) ? (*sys.map.psi_inverse)(pt) : pt;
    const double r2 = x.squaredNorm();
    if (!(r2 <= 1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "evaluate_solution: point (" << pt.transpose() << ") lies outside the closed unit ball";
      throw std::out_of_range(msg.str());
    }
    const double bubble = 1.0 - r2;
    if (bubble == 0.0) {
      out.push_back(0.0);
      continue;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < sys.indices.size(); ++j)
      sum += alpha[static_cast<Eigen::Index>(j)] * basis_phi<D>(sys.indices[j], x).value;
    out.push_back(bubble * sum);
  }
  return out;
}

/// Points of the ball where the max error is sampled.
/// 2-d: radii i/10 (i = 0..10), angles j pi/10 (j = 1..20), center once: 201 points.
/// 3-d: radii i/21, polar k pi/21 (i, k = 1..20), azimuth 2 j pi/20 (j = 1..40): 16000 points.
template <int D>
std::vector<Point<D>> error_grid() {
  std::vector<Point<D>> pts;
  if constexpr (D == 2) {
    pts.emplace_back(0.0, 0.0);
    for (int i = 1; i <= 10; ++i)
      for (int j = 1; j <= 20; ++j) {
        const double r = i / 10.0, th = j * std::numbers::pi / 10.0;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
      }
  } else {
    for (int i = 1; i <= 20; ++i)
      for (int j = 1; j <= 40; ++j)
        for (int k = 1; k <= 20; ++k) {
          const double r = i / 21.0, pol = k * std::numbers::pi / 21.0, az = 2.0 * j * std::numbers::pi / 20.0;
          pts.emplace_back(r * std::sin(pol) * std::cos(az), r * std::sin(pol) * std::sin(az), r * std::cos(pol));
        }
  }
  return pts;
}

/// max over the error grid of |u(Phi(x)) - u_n(x)|.
template <int D>
double max_grid_error(const GalerkinSystem<D>& sys, const EllipticProblem<D>& problem) {
  if (!problem.true_solution) throw std::invalid_argument("max_grid_error: problem has no true solution");
  const auto grid = error_grid<D>();
  const auto approx = evaluate_solution(sys, grid, Frame::ball);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = (*problem.true_solution)(problem.map.phi(grid[i]));
    worst = std::max(worst, std::abs(exact - approx[i]));
  }
  return worst;
}

/// 2-norm condition number sigma_max / sigma_min.
inline double condition_number(const Eigen::MatrixXd& m) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s[0] / s[s.size() - 1];
}

template <int D>
double condition_number(const GalerkinSystem<D>& sys) {
  return condition_number(sys.matrix);
}

}  // namespace specgal
