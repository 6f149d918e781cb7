// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance                       all criteria
//   acceptance --criterion 4         one criterion
//   acceptance --criterion 2 --full  include degrees 11..14 for the ball table
//   --cli PATH                       specgal binary used by criterion 10

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "checks.hpp"
#include "oracles.hpp"
#include "specgal/domainmap.hpp"
#include "specgal/galerkin.hpp"
#include "specgal/problems.hpp"
#include "specgal/quadrature.hpp"
#include "specgal/study.hpp"

namespace {

using namespace specgal;

struct Reference {
  int n;
  int dimension;
  double error;
  double cond;
};

// Published planar results, degrees 2..25.
const std::vector<Reference> planar_reference = {
    {2, 6, 4.41e-1, 3.42},      {3, 10, 4.21e-1, 4.99},     {4, 15, 1.70e-1, 9.27},     {5, 21, 9.63e-2, 13.6},
    {6, 28, 4.73e-2, 20.7},     {7, 36, 1.88e-2, 28.5},     {8, 45, 7.24e-3, 39.0},     {9, 55, 2.79e-3, 50.5},
    {10, 66, 9.58e-4, 64.7},    {11, 78, 3.20e-4, 80.4},    {12, 91, 9.67e-5, 98.6},    {13, 105, 3.01e-5, 118.7},
    {14, 120, 9.95e-6, 141.2},  {15, 136, 3.03e-6, 165.8},  {16, 153, 8.31e-7, 192.8},  {17, 171, 2.09e-7, 222.1},
    {18, 190, 5.21e-8, 253.8},  {19, 210, 1.42e-8, 287.9},  {20, 231, 3.53e-9, 324.4},  {21, 253, 7.58e-10, 363.4},
    {22, 276, 1.46e-10, 404.9}, {23, 300, 3.36e-11, 448.9}, {24, 325, 7.16e-12, 495.4}, {25, 351, 1.44e-12, 544.4},
};

// Published ball results, degrees 1..14.
const std::vector<Reference> ball_reference = {
    {1, 4, 4.98e-1, 1.5},     {2, 10, 1.99e-1, 3.6},    {3, 20, 1.78e-1, 5.7},    {4, 35, 8.22e-2, 11.0},
    {5, 56, 2.18e-2, 17.1},   {6, 84, 1.34e-2, 27.1},   {7, 120, 5.95e-3, 39.4},  {8, 165, 1.60e-3, 55.9},
    {9, 220, 4.85e-4, 75.8},  {10, 286, 2.56e-4, 100.2}, {11, 364, 1.44e-4, 128.9}, {12, 455, 7.85e-5, 162.4},
    {13, 560, 4.19e-5, 200.6}, {14, 680, 2.33e-5, 244.0},
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within_factor(double got, double want, double factor) { return got <= factor * want && got >= want / factor; }

// Simple linear regression y = c0 + c1 x; returns {slope, r^2}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double ss_res = syy - slope * sxy;
  return {slope, 1.0 - ss_res / syy};
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <int D>
std::vector<StudyRow> sweep(const std::string& problem, int lo, int hi, bool with_cond) {
  StudyConfig cfg;
  cfg.problem = problem;
  cfg.degree_lo = lo;
  cfg.degree_hi = hi;
  cfg.emit_condition = with_cond;
  return run_study(builtin_problem<D>(problem), cfg);
}

const std::vector<StudyRow>& planar_rows() {
  static const std::vector<StudyRow> rows = sweep<2>("planar_a05", 2, 25, true);
  return rows;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& rows = planar_rows();
  const double elapsed = seconds_since(t0);
  int bad = 0;
  std::ostringstream d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& ref = planar_reference[i];
    const bool ok = r.dimension == ref.dimension &&
                    (r.n <= 20 ? within_factor(r.max_error, ref.error, 5.0) : r.max_error <= 1e-9);
    if (!ok) {
      ++bad;
      d << " n=" << r.n << ":" << format_sci3(r.max_error) << " vs " << format_sci3(ref.error);
    }
  }
  o.pass = bad == 0 && elapsed <= 120.0;
  o.detail = "24 degrees, " + std::to_string(bad) + " outside tolerance, n=10 " + format_sci3(rows[8].max_error) +
             ", n=20 " + format_sci3(rows[18].max_error) + ", " + fmt("%.1f s", elapsed) + d.str();
  return o;
}

Outcome criterion2(bool full) {
  Outcome o;
  const int hi = full ? 14 : 10;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = sweep<3>("ball_a07_b09", 1, 10, true);
  const double elapsed = seconds_since(t0);
  auto all = rows;
  if (full) {
    const auto extra = sweep<3>("ball_a07_b09", 11, hi, true);
    all.insert(all.end(), extra.begin(), extra.end());
  }
  int bad = 0;
  std::ostringstream d;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& r = all[i];
    const auto& ref = ball_reference[i];
    const bool ok = r.dimension == ref.dimension && within_factor(r.max_error, ref.error, 5.0);
    if (!ok) ++bad;
    d << " n=" << r.n << ":" << format_sci3(r.max_error) << (ok ? "" : "*") << "/" << format_sci3(ref.error);
  }
  o.pass = bad == 0 && elapsed <= 600.0;
  o.detail = "degrees 1.." + std::to_string(hi) + ", " + std::to_string(bad) + " outside factor 5, " +
             fmt("%.1f s", elapsed) + ";" + d.str();
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto& rows = planar_rows();
  std::vector<double> n, logerr;
  for (const auto& r : rows)
    if (r.n >= 4 && r.n <= 20) {
      n.push_back(r.n);
      logerr.push_back(std::log(r.max_error));
    }
  const auto [slope, r2] = linear_fit(n, logerr);
  const double ratio = rows[18].max_error / rows[8].max_error;
  o.pass = slope < 0.0 && r2 >= 0.98 && ratio <= 1e-4;
  o.detail = "slope " + fmt("%.4f", slope) + ", R^2 " + fmt("%.5f", r2) + ", err(20)/err(10) " + fmt("%.3g", ratio);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto& rows = planar_rows();
  int bad = 0;
  std::vector<double> dim, cond;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!within_factor(*rows[i].condition, planar_reference[i].cond, 3.0)) ++bad;
    if (rows[i].n >= 10) {
      dim.push_back(rows[i].dimension);
      cond.push_back(*rows[i].condition);
    }
  }
  const auto [slope, r2] = linear_fit(dim, cond);
  o.pass = bad == 0 && r2 >= 0.99;
  o.detail = std::to_string(bad) + " outside factor 3, n=25 cond " + fmt("%.1f", *rows.back().condition) +
             ", cond ~ " + fmt("%.3f", slope) + " N_n with R^2 " + fmt("%.5f", r2);
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst_disk = 0.0, worst_ball = 0.0;
  for (int q : {2, 4, 8}) {
    const auto rule = disk_rule(q);
    for (int i = 0; i <= 2 * q; ++i)
      for (int j = 0; i + j <= 2 * q; ++j) {
        const double got = integrate(rule, [&](const Point<2>& x) { return std::pow(x.x(), i) * std::pow(x.y(), j); });
        const double m = oracle::disk_moment(i, j);
        worst_disk = std::max(worst_disk, m == 0.0 ? std::abs(got) : std::abs(got - m) / m);
      }
  }
  for (int q : {2, 4, 6}) {
    const auto rule = ball_rule(q);
    for (int a = 0; a <= 2 * q - 1; ++a)
      for (int b = 0; a + b <= 2 * q - 1; ++b)
        for (int c = 0; a + b + c <= 2 * q - 1; ++c) {
          const double got = integrate(rule, [&](const Point<3>& x) {
            return std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
          });
          worst_ball = std::max(worst_ball, std::abs(got - oracle::ball_moment(a, b, c)));
        }
  }
  o.pass = worst_disk <= 1e-13 && worst_ball <= 1e-12;
  o.detail = "disk max rel err " + fmt("%.2e", worst_disk) + ", ball max err " + fmt("%.2e", worst_ball);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst2 = 0.0, worst3 = 0.0;
  for (int n = 0; n <= 10; ++n) worst2 = std::max(worst2, check::gram_max_error<2>(n, n + 1));
  for (int m = 0; m <= 6; ++m) worst3 = std::max(worst3, check::gram_max_error<3>(m, m + 1));
  o.pass = worst2 <= 1e-11 && worst3 <= 1e-11;
  o.detail = "disk max |G-I| " + fmt("%.2e", worst2) + ", ball max |G-I| " + fmt("%.2e", worst3);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst2 = 0.0, worst3 = 0.0;
  for (int n = 0; n <= 8; ++n) {
    worst2 = std::max(worst2, check::laplacian_excess_component<2>(n));
    worst3 = std::max(worst3, check::laplacian_excess_component<3>(n));
  }
  o.pass = worst2 < 1e-5 && worst3 < 1e-5;
  o.detail = "max component d=2 " + fmt("%.2e", worst2) + ", d=3 " + fmt("%.2e", worst3);
  return o;
}

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

template <int D>
ProblemCoeffs<D> laplace_coeffs() {
  return {[](const Point<D>&) { return Matrix<D>::Identity().eval(); }, [](const Point<D>&) { return 0.0; }, {}};
}

Outcome criterion8() {
  Outcome o;
  const auto m2 = planar_quadratic(0.5);
  const auto m3 = ball_quadratic(0.7, 0.9);
  double trip = 0.0, pull = 0.0;
  for (const auto& x : oracle::random_ball_points<2>(100, 1.0, 101)) {
    trip = std::max(trip, ((*m2.psi_inverse)(m2.phi(x)) - x).norm());
    const auto c = transformed_coeffs(m2, laplace_coeffs<2>()).at(x);
    pull = std::max(pull, (c.a_tilde_scaled - planar_closed_form(0.5, x.x())).cwiseAbs().maxCoeff());
  }
  for (const auto& x : oracle::random_ball_points<3>(100, 1.0, 102)) {
    trip = std::max(trip, ((*m3.psi_inverse)(m3.phi(x)) - x).norm());
    const auto c = transformed_coeffs(m3, laplace_coeffs<3>()).at(x);
    pull = std::max(pull, (c.a_tilde_scaled - ball_closed_form(0.7, 0.9, x.x(), x.z())).cwiseAbs().maxCoeff());
  }
  const auto e2 = ellipticity_report(m2, laplace_coeffs<2>().coeff_a, disk_rule(27));
  const auto e3 = ellipticity_report(m3, laplace_coeffs<3>().coeff_a, ball_rule(12));
  o.pass = trip <= 1e-12 && pull <= 1e-13 && e2.lambda_star > 0.0 && e3.lambda_star > 0.0;
  o.detail = "round trip " + fmt("%.2e", trip) + ", pullback " + fmt("%.2e", pull) + ", lambda* " +
             fmt("%.4f", e2.lambda_star) + " / " + fmt("%.4f", e3.lambda_star);
  return o;
}

template <int D>
double poisson_error(int n) {
  EllipticProblem<D> p;
  p.name = "poisson";
  p.map = identity_map<D>();
  p.coeff_a = [](const Point<D>&) { return Matrix<D>::Identity().eval(); };
  p.gamma = [](const Point<D>&) { return 0.0; };
  p.rhs_f = [](const Point<D>&) { return 1.0; };
  p.true_solution = [](const Point<D>& x) { return (1.0 - x.squaredNorm()) / (2.0 * D); };
  auto sys = assemble(p, n, default_quad_order(n, D));
  solve(sys);
  return max_grid_error(sys, p);
}

Outcome criterion9() {
  Outcome o;
  double worst2 = 0.0, worst3 = 0.0;
  for (int n = 0; n <= 12; ++n) worst2 = std::max(worst2, poisson_error<2>(n));
  for (int n = 0; n <= 8; ++n) worst3 = std::max(worst3, poisson_error<3>(n));
  o.pass = worst2 <= 1e-12 && worst3 <= 1e-12;
  o.detail = "d=2 n=0..12 max " + fmt("%.2e", worst2) + ", d=3 n=0..8 max " + fmt("%.2e", worst3);
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  if (cli.empty()) return {false, "no --cli binary given"};
  const std::vector<std::pair<std::string, std::string>> runs = {{"planar_a05", "2..25"}, {"ball_a07_b09", "1..6"}};
  std::ostringstream d;
  for (const auto& [problem, degrees] : runs) {
    std::array<std::string, 2> csv;
    for (int k = 0; k < 2; ++k) {
      const std::string out = "determinism_" + problem + "_" + std::to_string(k) + ".csv";
      std::remove(out.c_str());
      const std::string cmd = "\"" + cli + "\" study --problem " + problem + " --degrees " + degrees + " --out " + out;
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
      csv[static_cast<std::size_t>(k)] = slurp(out);
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    o.pass = o.pass && same;
    d << problem << " " << (same ? "identical" : "DIFFERENT") << " (" << csv[0].size() << " bytes) ";
  }
  o.detail = d.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"specgal acceptance suite"};
  int only = 0;
  bool full = false;
  std::string cli;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_flag("--full", full, "Criterion 2: also run degrees 11..14");
  app.add_option("--cli", cli, "Path to the specgal binary (criterion 10)");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"planar table errors", criterion1}},
      {2, {"ball table errors", [&] { return criterion2(full); }}},
      {3, {"exponential convergence", criterion3}},
      {4, {"condition-number scaling", criterion4}},
      {5, {"quadrature exactness", criterion5}},
      {6, {"basis orthonormality", criterion6}},
      {7, {"Laplacian degree property", criterion7}},
      {8, {"transformation certificates", criterion8}},
      {9, {"Galerkin exactness", criterion9}},
      {10, {"study determinism", [&] { return criterion10(cli); }}},
  };

  bool all_pass = true;
  for (const auto& [id, entry] : criteria) {
    if (only != 0 && id != only) continue;
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << entry.first << "): " << o.detail
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
