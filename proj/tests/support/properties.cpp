#include "properties.hpp"

#include "oracles.hpp"

#include "smectic/quadrature.hpp"
#include "smectic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace property {

using namespace smectic;

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Coefficients desk_coefficients() { return {1e-4, 10.0, 10.0}; }

Eigen::Vector2d director() { return {0.6, 0.8}; }

}  // namespace

Check quadrature_exactness() {
  double worst = 0.0, worst_sum = 0.0;
  for (int d = 1; d <= kMaxQuadratureDegree; ++d) {
    const QuadratureRule rule = triangle_quadrature(d);
    double s = 0.0;
    for (double w : rule.weights) s += w;
    worst_sum = std::max(worst_sum, std::abs(s - 0.5));
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double v = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
          v += rule.weights[i] * std::pow(rule.points[i].x(), a) * std::pow(rule.points[i].y(), b);
        }
        const double exact = oracle::monomial_integral(a, b);
        worst = std::max(worst, std::abs(v - exact) / exact);
      }
    }
  }
  return {worst <= 1e-12 && worst_sum <= 1e-14,
          fmt("max relative monomial error %.2e, max |sum w - 1/2| %.2e", worst, worst_sum)};
}

Check partition_of_unity() {
  const Mesh mesh = build_structured_mesh(3);
  const QuadratureRule rule = triangle_quadrature(10);
  double worst_value = 0.0, worst_grad = 0.0;
  for (int k = 1; k <= 5; ++k) {
    for (bool disc : {false, true}) {
      const FunctionSpace space = disc ? FunctionSpace::dg(mesh, k) : FunctionSpace::cg(mesh, k);
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const BasisValues bv = space.evaluate(c, rule.points, 1);
        const Eigen::VectorXd s = bv(0, deriv::V).rowwise().sum();
        worst_value = std::max(worst_value, (s.array() - 1.0).abs().maxCoeff());
        worst_grad = std::max(worst_grad, bv(0, deriv::X).rowwise().sum().cwiseAbs().maxCoeff() * mesh.h);
        worst_grad = std::max(worst_grad, bv(0, deriv::Y).rowwise().sum().cwiseAbs().maxCoeff() * mesh.h);
      }
    }
  }
  return {worst_value <= 1e-12 && worst_grad <= 1e-11,
          fmt("max |sum phi - 1| %.2e, max h |sum grad phi| %.2e", worst_value, worst_grad)};
}

Check argyris_quintic_reproduction() {
  const Mesh mesh = build_structured_mesh(3);
  const FunctionSpace space = FunctionSpace::argyris(mesh);
  const QuadratureRule rule = triangle_quadrature(12);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  // The 21 monomials, then one random quintic.
  std::vector<std::vector<double>> polys;
  for (int j = 0; j < monomial_count(5); ++j) {
    std::vector<double> p(monomial_count(5), 0.0);
    p[j] = 1.0;
    polys.push_back(p);
  }
  std::vector<double> mixed(monomial_count(5));
  for (double& c : mixed) c = coef(rng);
  polys.push_back(mixed);

  double worst = 0.0;
  for (const auto& p : polys) {
    auto eval = [&p](const Point& x) {
      Eigen::MatrixXd d(derivative_count(2), monomial_count(5));
      monomial_derivatives(x, 5, 2, d);
      const Eigen::VectorXd v = d * Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
      ScalarJet2 j;
      j.value = v(deriv::V);
      j.grad = {v(deriv::X), v(deriv::Y)};
      j.hess << v(deriv::XX), v(deriv::XY), v(deriv::XY), v(deriv::YY);
      return j;
    };
    const Eigen::VectorXd coeffs = space.interpolate_jet(eval);
    double scale = 0.0, err = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const CellGeometry g = CellGeometry::of(mesh, c);
      const BasisValues bv = space.evaluate(c, rule.points, 0);
      const auto dofs = space.cell_dofs(c);
      for (int q = 0; q < rule.size(); ++q) {
        double uh = 0.0;
        for (std::size_t i = 0; i < dofs.size(); ++i) uh += coeffs(dofs[i]) * bv(0, 0)(q, i);
        const double exact = eval(g.to_physical(rule.points[q])).value;
        scale = std::max(scale, std::abs(exact));
        err = std::max(err, std::abs(uh - exact));
      }
    }
    worst = std::max(worst, err / scale);
  }
  return {worst <= 1e-9, fmt("max relative reproduction error %.2e over 22 quintics", worst)};
}

Check rt_normal_continuity() {
  const Mesh mesh = build_structured_mesh(2);
  const std::vector<double> params = {0.2, 0.5, 0.8};
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const FunctionSpace space = FunctionSpace::rt(mesh, k);
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (mesh.is_boundary_edge(e)) continue;
      const Point a = mesh.vertices[mesh.edges[e][0]], b = mesh.vertices[mesh.edges[e][1]];
      const Eigen::Vector2d nrm = mesh.edge_normal(e);
      std::vector<Point> xs;
      for (double s : params) xs.push_back(a + s * (b - a));
      // Normal components of every global basis function from each side.
      std::vector<Eigen::MatrixXd> side(2, Eigen::MatrixXd::Zero(xs.size(), space.num_dofs()));
      for (int s = 0; s < 2; ++s) {
        const int c = mesh.edge_cells[e][s];
        const CellGeometry g = CellGeometry::of(mesh, c);
        std::vector<Point> ref;
        for (const auto& x : xs) ref.push_back(g.to_reference(x));
        const BasisValues bv = space.evaluate(c, ref, 0);
        const auto dofs = space.cell_dofs(c);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
          side[s].col(dofs[i]) = nrm.x() * bv(0, 0).col(i) + nrm.y() * bv(1, 0).col(i);
        }
      }
      worst = std::max(worst, (side[0] - side[1]).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12, fmt("max |[beta . n]| %.2e for k = 1..3 on n = 2", worst)};
}

Check full_neumann_symmetry(int n) {
  const Mesh mesh = build_structured_mesh(n);
  const BoundaryPartition part = assign_boundary(mesh, BoundarySpec::uniform(BoundaryLabel::G32));
  const Coefficients c{1.0, 10.0, 10.0};
  const ManufacturedSolution ms = plane_wave(c, director());
  const AssembledSystem sys = assemble_conforming(mesh, part, {c, 5, 0}, ms);
  const CsrMatrix& a = sys.matrix;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      worst = std::max(worst, std::abs(a.values[p] - a.coeff(a.col_idx[p], i)));
      scale = std::max(scale, std::abs(a.values[p]));
    }
  }
  return {worst <= 1e-12 * scale,
          fmt("n = %.0f: max |A - A^T| / max |A| = %.2e", n, worst / scale)};
}

Check mixed_block_symmetry(int k) {
  const Mesh mesh = build_structured_mesh(4);
  const BoundaryPartition part = assign_boundary(mesh, BoundarySpec::defaults());
  const Coefficients c = desk_coefficients();
  const ManufacturedSolution ms = plane_wave(c, director());
  const AssembledSystem sys = assemble_mixed(mesh, part, {c, k, 0}, ms);
  const CsrMatrix& a = sys.matrix;
  const int alpha = sys.block_offsets[3];
  long long asym = 0, badj = 0, zero_block = 0;
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.col_idx[p];
      const bool equal = a.values[p] == a.coeff(j, i);
      if (i < alpha && j < alpha) {
        asym += equal ? 0 : 1;
      } else if (i >= alpha && j >= alpha) {
        zero_block += (i != j && a.values[p] != 0.0) ? 1 : 0;
      } else {
        badj += equal ? 0 : 1;
      }
    }
  }
  std::ostringstream os;
  os << "k = " << k << ": " << asym << " asymmetric (u,v) entries, " << badj
     << " coupling entries differing from the transpose, " << zero_block
     << " off-diagonal alpha-alpha entries";
  return {asym == 0 && badj == 0 && zero_block == 0, os.str()};
}

Check positivity(Method method, int degree) {
  const Mesh mesh = build_structured_mesh(8);
  const BoundaryPartition part = assign_boundary(mesh, BoundarySpec::defaults());
  const Coefficients c = desk_coefficients();
  const ManufacturedSolution ms = plane_wave(c, director());
  const AssembledSystem sys = assemble(method, mesh, part, {c, degree, 0}, ms);
  std::mt19937 rng(11);
  double smallest = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd v = oracle::random_vector(sys.dimension(), rng);
    smallest = std::min(smallest, v.dot(sys.matrix.multiply(v)) / v.squaredNorm());
  }
  std::ostringstream os;
  os << to_string(method) << " k = " << degree << ": min v^T A v / |v|^2 = " << smallest;
  return {smallest > 0.0, os.str()};
}

Check solver_residual_on_assembled() {
  const Mesh mesh = build_structured_mesh(8);
  const BoundaryPartition part = assign_boundary(mesh, BoundarySpec::defaults());
  const Coefficients c = desk_coefficients();
  const ManufacturedSolution ms = plane_wave(c, director());
  const std::vector<std::pair<Method, int>> cases = {{Method::Argyris, 5}, {Method::C0IP, 2},
                                                     {Method::C0IP, 3},    {Method::C0IP, 4},
                                                     {Method::Mixed, 1},   {Method::Mixed, 2},
                                                     {Method::Mixed, 3}};
  double worst = 0.0;
  bool ok = true;
  std::ostringstream os;
  for (const auto& [method, k] : cases) {
    const AssembledSystem sys = assemble(method, mesh, part, {c, k, 0}, ms);
    try {
      const SolveResult r = solve_direct(sys.matrix, sys.rhs, kResidualTolerance,
                                         elimination_stages(sys));
      const double res = relative_residual(sys.matrix, r.x, sys.rhs);
      worst = std::max(worst, res);
      ok = ok && res <= kResidualTolerance;
    } catch (const SolverError& e) {
      ok = false;
      os << to_string(method) << " k = " << k << ": " << e.what() << "; ";
    }
  }
  os << "max relative residual " << worst << " over 7 systems at n = 8";
  return {ok, os.str()};
}

Check mms_finite_differences(const std::string& family) {
  const Coefficients c{1.0, 40.0, 10.0};
  const ManufacturedSolution ms =
      family == "planewave" ? plane_wave(c, director()) : bump_polynomial(c, director());
  const double step = 1e-5;
  const auto points = oracle::random_points(100, 3);

  // Order r quantities as flat lists: the analytic values and their
  // derivative pairs (component of order r - 1, direction).
  auto order_values = [&ms](int r, const Point& x) -> std::vector<double> {
    const Jet j = ms.jet(x);
    switch (r) {
      case 0: return {j.value};
      case 1: return {j.grad.x(), j.grad.y()};
      case 2: return {j.hess(0, 0), j.hess(0, 1), j.hess(1, 1)};
      case 3: return {j.third.begin(), j.third.end()};
      default: return {j.fourth.begin(), j.fourth.end()};
    }
  };
  // (lower-order component, direction) producing each component.
  const std::vector<std::vector<std::pair<int, int>>> source = {
      {},
      {{0, 0}, {0, 1}},
      {{0, 0}, {0, 1}, {1, 1}},
      {{0, 0}, {0, 1}, {2, 0}, {2, 1}},
      {{0, 0}, {0, 1}, {1, 1}, {2, 1}, {3, 1}}};

  std::ostringstream os;
  bool ok = true;
  for (int r = 1; r <= 4; ++r) {
    double global = 0.0;
    for (const auto& x : points) {
      for (double v : order_values(r, x)) global = std::max(global, std::abs(v));
    }
    double worst = 0.0;
    for (const auto& x : points) {
      const std::vector<double> exact = order_values(r, x);
      double scale = 1e-3 * global;
      for (double v : exact) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < exact.size(); ++i) {
        const auto [comp, dir] = source[r][i];
        const double fd = oracle::central_difference(
            [&](const Eigen::Vector2d& y) { return order_values(r - 1, y)[comp]; }, x, dir, step);
        worst = std::max(worst, std::abs(fd - exact[i]) / scale);
      }
    }
    ok = ok && worst <= 1e-5;
    os << "order " << r << ": " << worst << "  ";
  }
  return {ok, family + " max relative FD mismatch " + os.str()};
}

std::vector<NamedCheck> run_all() {
  std::vector<NamedCheck> out;
  out.push_back({"quadrature exactness", quadrature_exactness()});
  out.push_back({"partition of unity", partition_of_unity()});
  out.push_back({"argyris quintic reproduction", argyris_quintic_reproduction()});
  out.push_back({"rt normal continuity", rt_normal_continuity()});
  for (int n : {4, 8, 16}) out.push_back({"full-neumann symmetry", full_neumann_symmetry(n)});
  for (int k = 1; k <= 3; ++k) out.push_back({"mixed block symmetry", mixed_block_symmetry(k)});
  out.push_back({"positivity argyris", positivity(Method::Argyris, 5)});
  for (int k = 2; k <= 4; ++k) out.push_back({"positivity c0ip", positivity(Method::C0IP, k)});
  out.push_back({"solver residual", solver_residual_on_assembled()});
  out.push_back({"mms planewave", mms_finite_differences("planewave")});
  out.push_back({"mms bump", mms_finite_differences("bump")});
  return out;
}

}  // namespace property
