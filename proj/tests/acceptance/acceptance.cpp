// Acceptance gate: one PASS/FAIL line per criterion.

#include "oracles.hpp"
#include "properties.hpp"
#include "study.hpp"

#include "smectic/assembly.hpp"
#include "smectic/norms.hpp"
#include "smectic/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace smectic;
using study::StudyConfig;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[x] ";
    }
    detail << what << "; ";
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Eigen::Vector2d director() { return {0.6, 0.8}; }

StudyConfig desk(Method method, int degree) {
  StudyConfig c;
  c.method = method;
  c.degree = degree;
  c.q = 10.0;
  c.B = "qinv4";
  c.m = 10.0;
  c.levels = {8, 16, 32, 64};
  return c;
}

void criterion1(Outcome& out) {
  const std::vector<std::pair<Method, int>> cases = {
      {Method::Argyris, 5}, {Method::C0IP, 2},  {Method::C0IP, 3}, {Method::C0IP, 4},
      {Method::Mixed, 1},   {Method::Mixed, 2}, {Method::Mixed, 3}};
  const auto& table = oracle::dof_table();
  auto expected = [&](std::size_t row, Method m, int k) {
    if (m == Method::Argyris) return table[row].argyris;
    return m == Method::C0IP ? table[row].c0ip[k - 2] : table[row].mixed[k - 1];
  };
  int mismatches = 0;
  for (const auto& [method, k] : cases) {
    StudyConfig c = desk(method, k);
    c.count_only = true;
    c.levels = {64, 128, 256, 512};
    const auto report = study::run_study(c);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (report.levels[i].dofs != expected(i, method, k)) {
        ++mismatches;
        out.require(false, std::string(to_string(method)) + " k=" + std::to_string(k) +
                               " n=" + std::to_string(table[i].n) + ": " +
                               std::to_string(report.levels[i].dofs));
      }
    }
  }
  out.require(mismatches == 0, "count-only dimensions, 28 entries, " +
                                   std::to_string(mismatches) + " mismatches");

  // The assembled systems at n = 64 have the same dimensions.
  const Mesh mesh = build_structured_mesh(64);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const Coefficients coeffs{1e-4, 10.0, 10.0};
  const auto ms = plane_wave(coeffs, director());
  int assembled_mismatches = 0;
  for (const auto& [method, k] : cases) {
    const auto sys = assemble(method, mesh, part, {coeffs, k, 0}, ms, {true, true, true, false});
    if (sys.dimension() != expected(0, method, k)) ++assembled_mismatches;
  }
  out.require(assembled_mismatches == 0,
              "assembled n=64 dimensions, " + std::to_string(assembled_mismatches) + " mismatches");
}

void criterion2(Outcome& out) {
  const auto points = oracle::random_points(1000, 2024, 0.0);
  for (const Coefficients c : {Coefficients{1.0, 40.0, 10.0},
                               Coefficients{std::pow(40.0, -4), 40.0, 10.0},
                               Coefficients{std::pow(10.0, -4), 10.0, 10.0}}) {
    const auto ms = plane_wave(c, director());
    const double factor = c.B * std::pow(c.q, 4) + c.m;
    double worst = 0.0, worst_mass = 0.0;
    for (const auto& x : points) {
      const double u = ms.u(x);
      if (std::abs(u) < 1e-8) continue;
      const double f = forcing(ms, x);
      worst = std::max(worst, std::abs(f - factor * u) / std::abs(factor * u));
      worst_mass = std::max(worst_mass, std::abs(f - c.m * u) / std::abs(factor * u));
    }
    out.require(worst <= 1e-9, "B=" + num(c.B) + " q=" + num(c.q) + ": max rel |f-(Bq^4+m)u| " +
                                   num(worst, 3) + " (|f-m u| " + num(worst_mass, 3) + ")");
  }
}

void check_order(Outcome& out, const study::StudyReport& r, const std::string& label,
                 const std::string& norm, double target, bool at_least = false) {
  const auto s = r.slope(norm);
  if (!s) {
    out.require(false, label + " " + norm + ": no slope (" + r.slope_error + ")");
    return;
  }
  const bool ok = at_least ? s->order >= target - 0.25 : std::abs(s->order - target) <= 0.25;
  out.require(ok, label + " " + norm + " " + num(s->order) + (at_least ? " >= " : " ~ ") +
                      num(target, 2));
}

void criterion3(Outcome& out) {
  const auto arg = study::run_study(desk(Method::Argyris, 5), &std::cerr);
  check_order(out, arg, "argyris", "triple", 4.0);
  check_order(out, arg, "argyris", "l2", 4.0, true);
  const auto c3 = study::run_study(desk(Method::C0IP, 3), &std::cerr);
  check_order(out, c3, "c0ip k=3", "triple", 2.0);
  check_order(out, c3, "c0ip k=3", "l2", 2.0);
  const auto c4 = study::run_study(desk(Method::C0IP, 4), &std::cerr);
  check_order(out, c4, "c0ip k=4", "triple", 3.0);
  const auto mx = study::run_study(desk(Method::Mixed, 1), &std::cerr);
  check_order(out, mx, "mixed k=1", "l2", 2.0);
  check_order(out, mx, "mixed k=1", "v_h1q", 2.0);
  check_order(out, mx, "mixed k=1", "alpha_l2q", 1.0);
  check_order(out, mx, "mixed k=1", "alpha_divq", 2.0);
  for (const auto* r : {&arg, &c3, &c4, &mx}) {
    out.require(r->all_ok(), std::string(to_string(r->config.method)) + " levels solved");
  }
}

void within(Outcome& out, const ErrorReport& r, const std::string& label, const std::string& norm,
            double paper) {
  if (!r.ok) {
    out.require(false, label + " failed: " + r.message);
    return;
  }
  const double v = r.get(norm);
  out.require(std::abs(v - paper) <= 0.25 * paper,
              label + " " + norm + " " + num(v) + " vs " + num(paper) + " (ratio " +
                  num(v / paper, 3) + ")");
}

void criterion4(Outcome& out) {
  StudyConfig c = desk(Method::Argyris, 5);
  c.q = 40.0;
  c.B = "1";
  c.levels = {64};
  const ErrorReport arg = study::run_level(c, 64, 40.0, &std::cerr);
  within(out, arg, "argyris", "l2", 5.0377428450523854e-08);
  within(out, arg, "argyris", "h2q", 5.958162520111303e-06);
  c.method = Method::Mixed;
  c.degree = 1;
  const ErrorReport mx = study::run_level(c, 64, 40.0, &std::cerr);
  within(out, mx, "mixed k=1", "l2", 4.1487e-03);
  within(out, mx, "mixed k=1", "alpha_divq", 2.4509);
}

void criterion5(Outcome& out) {
  StudyConfig c = desk(Method::Mixed, 2);
  c.B = "1";
  c.solution = "bump";
  c.levels = {64};
  c.sweep_q = {8.0, 16.0, 32.0};
  const auto report = study::sweep_q(c, &std::cerr);
  out.require(report.all_ok(), "all q solved");
  if (!report.all_ok()) return;
  for (const std::string norm : {"l2", "v_h1q", "product"}) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : report.levels) {
      lo = std::min(lo, r.get(norm));
      hi = std::max(hi, r.get(norm));
    }
    out.require(hi / lo < 2.0, norm + " max/min over q " + num(hi / lo, 4));
  }
}

void criterion6(Outcome& out) {
  for (const auto& [name, check] : property::run_all()) {
    out.require(check.pass, name + ": " + check.detail);
  }
}

void criterion7(Outcome& out) {
  const Coefficients c{1e-4, 10.0, 10.0};
  const auto ms = plane_wave(c, director());
  const auto zero = polynomial_solution(c, {}, director() * director().transpose());
  const Mesh mesh = build_structured_mesh(16);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const double eps = 1e-4;
  for (const auto& [method, k] : std::vector<std::pair<Method, int>>{
           {Method::Argyris, 5}, {Method::C0IP, 3}, {Method::Mixed, 1}}) {
    const std::string label = std::string(to_string(method)) + " k=" + std::to_string(k);
    const auto sys = assemble(method, mesh, part, {c, k, 0}, ms);
    AssemblyOptions shifted;
    shifted.g0_shift = eps;
    const auto sys_eps = assemble(method, mesh, part, {c, k, 0}, ms, shifted);
    try {
      const auto stages = elimination_stages(sys);
      const SolveResult x = solve_direct(sys.matrix, sys.rhs, kResidualTolerance, stages);
      const SolveResult y = solve_direct(sys_eps.matrix, sys_eps.rhs, kResidualTolerance, stages);
      const double res = relative_residual(sys.matrix, x.x, sys.rhs);
      out.require(res <= kResidualTolerance, label + " discrete residual " + num(res, 3));
      const double norm_uh = compute_errors(sys, x.x, zero, part).get("l2");
      const double change = compute_errors(sys, y.x - x.x, zero, part).get("l2");
      const double ratio = change / (eps * norm_uh);
      out.require(ratio >= 0.1 && ratio <= 10.0,
                  label + " |u_eps - u_h| / (eps |u_h|) = " + num(ratio, 3));
    } catch (const SolverError& e) {
      out.require(false, label + ": " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> criteria;
  app.add_option("--criterion", criteria, "criterion numbers 1..7 (default: all)")
      ->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7};

  const std::vector<std::function<void(Outcome&)>> runners = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
  bool all = true;
  for (int id : criteria) {
    Outcome out;
    try {
      runners[id - 1](out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << id << ": " << (out.pass ? "PASS" : "FAIL") << " - "
              << out.detail.str() << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
