// specgal: spectral Galerkin solver for Dirichlet problems on images of the
// unit disk and ball.
//
//   specgal solve --problem <name|file> --degree <n> [--quad <q>] [--eval-grid]
//   specgal study --problem <name|file> --degrees <lo>..<hi> [--quad auto|<q>] --out <path> [--no-cond]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "specgal/galerkin.hpp"
#include "specgal/problems.hpp"
#include "specgal/study.hpp"

namespace {

using namespace specgal;

std::optional<int> parse_quad(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  std::size_t used = 0;
  const int q = std::stoi(text, &used);
  if (used != text.size() || q < 1) throw std::invalid_argument("--quad must be 'auto' or a positive integer");
  return q;
}

template <int D>
int run_solve(const ProblemSpec& spec, int degree, std::optional<int> quad, bool eval_grid) {
  const EllipticProblem<D> problem = make_problem<D>(spec);
  const int q = quad.value_or(default_quad_order(degree, D));
  GalerkinSystem<D> sys = assemble(problem, degree, q);
  solve(sys);
  const double err = max_grid_error(sys, problem);
  const double cond = condition_number(sys);

  if (eval_grid) {
    const auto grid = error_grid<D>();
    const auto un = evaluate_solution(sys, grid, Frame::ball);
    // Ball point, its image in Omega, then the approximate and exact solutions.
    std::cout << (D == 2 ? "x1,x2,s1,s2,u_n,u_exact,error\n" : "x1,x2,x3,s1,s2,s3,u_n,u_exact,error\n");
    char buf[96];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point<D> s = problem.map.phi(grid[i]);
      const double exact = (*problem.true_solution)(s);
      for (int c = 0; c < D; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g,", grid[i][c]);
        std::cout << buf;
      }
      for (int c = 0; c < D; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g,", s[c]);
        std::cout << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", un[i], exact, un[i] - exact);
      std::cout << buf;
    }
    return 0;
  }

  std::printf("problem: %s\n", spec.name.c_str());
  std::printf("dimension: %d\n", D);
  std::printf("degree: %d\n", degree);
  std::printf("N_n: %d\n", sys.dimension);
  std::printf("quad_q: %d\n", q);
  std::printf("max_error: %.3E\n", err);
  std::printf("condition_number: %.4g\n", cond);
  std::printf("residual: %.3E\n", sys.residual);
  std::printf("asymmetry: %.3E\n", sys.asymmetry);
  if (sys.non_positive_definite) std::printf("warning: matrix is numerically not positive definite\n");
  return 0;
}

int run_study_command(const std::string& problem, const std::string& degrees, const std::string& quad,
                      const std::string& out, bool no_cond) {
  static const std::regex range(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(degrees, m, range)) throw std::invalid_argument("--degrees must look like <lo>..<hi>");
  StudyConfig cfg;
  cfg.problem = problem;
  cfg.degree_lo = std::stoi(m[1]);
  cfg.degree_hi = std::stoi(m[2]);
  cfg.quad_q = parse_quad(quad);
  cfg.output = out;
  cfg.emit_condition = !no_cond;

  const auto rows = run_study(cfg);
  std::ofstream csv(cfg.output);
  if (!csv) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
  write_study_csv(csv, rows);
  std::ofstream raw(raw_output_path(cfg.output));
  if (!raw) throw std::runtime_error("cannot open output file '" + raw_output_path(cfg.output) + "'");
  write_study_raw_csv(raw, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin solver for elliptic Dirichlet problems on images of the unit disk/ball"};
  app.require_subcommand(1);

  std::string problem;
  int degree = 0;
  std::string quad = "auto";
  bool eval_grid = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem at one degree");
  solve_cmd->add_option("--problem", problem, "Built-in problem name or problem file")->required();
  solve_cmd->add_option("--degree", degree, "Polynomial degree n")->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--quad", quad, "Quadrature order q, or 'auto'");
  solve_cmd->add_flag("--eval-grid", eval_grid, "Print the solution on the error grid as CSV");

  std::string study_problem;
  std::string degrees;
  std::string study_quad = "auto";
  std::string out;
  bool no_cond = false;
  auto* study_cmd = app.add_subcommand("study", "Convergence study over a range of degrees");
  study_cmd->add_option("--problem", study_problem, "Built-in problem name or problem file")->required();
  study_cmd->add_option("--degrees", degrees, "Degree range <lo>..<hi>")->required();
  study_cmd->add_option("--quad", study_quad, "Quadrature order q, or 'auto'");
  study_cmd->add_option("--out", out, "Output CSV path")->required();
  study_cmd->add_flag("--no-cond", no_cond, "Skip condition numbers");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const ProblemSpec spec = resolve_problem(problem);
      const auto q = parse_quad(quad);
      return spec.dim() == 2 ? run_solve<2>(spec, degree, q, eval_grid) : run_solve<3>(spec, degree, q, eval_grid);
    }
    return run_study_command(study_problem, degrees, study_quad, out, no_cond);
  } catch (const std::exception& e) {
    std::cerr << "specgal: error: " << e.what() << '\n';
    return 1;
  }
}
