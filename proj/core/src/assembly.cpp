#include "smectic/assembly.hpp"

#include "smectic/element.hpp"
#include "smectic/quadrature.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smectic {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Argyris: return "argyris";
    case Method::C0IP: return "c0ip";
    case Method::Mixed: return "mixed";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "argyris") return Method::Argyris;
  if (s == "c0ip") return Method::C0IP;
  if (s == "mixed") return Method::Mixed;
  throw std::invalid_argument("unknown method '" + std::string(s) +
                              "' (expected argyris, c0ip or mixed)");
}

int trial_degree(Method method, int degree) {
  switch (method) {
    case Method::Argyris: return 5;
    case Method::C0IP: return degree;
    case Method::Mixed: return degree + 2;
  }
  return degree;
}

std::vector<int> elimination_stages(const AssembledSystem& sys) {
  if (sys.method != Method::Mixed) return {};
  std::vector<int> stages(sys.dimension(), 1);
  std::fill(stages.begin() + sys.block_offsets[0], stages.begin() + sys.block_offsets[1], 0);
  return stages;
}

int default_quadrature_degree(Method method, int degree) {
  return std::min(2 * trial_degree(method, degree) + 4, kMaxQuadratureDegree);
}

long long system_dimension(Method method, int degree, long long n) {
  const long long v = (n + 1) * (n + 1), c = 2 * n * n, e = v + c - 1;
  switch (method) {
    case Method::Argyris: return FunctionSpace::count(Family::Argyris, 5, v, e, c);
    case Method::C0IP: return FunctionSpace::count(Family::CG, degree, v, e, c);
    case Method::Mixed:
      return FunctionSpace::count(Family::DG, degree, v, e, c) +
             2 * FunctionSpace::count(Family::CG, degree + 2, v, e, c) +
             FunctionSpace::count(Family::RT, degree, v, e, c);
  }
  return 0;
}

namespace {

void validate(const ProblemParams& p, const ManufacturedSolution& ms) {
  const auto& c = p.coeffs;
  if (!(c.q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (!(c.B > 0.0 && c.B <= 1.0)) throw std::invalid_argument("B must lie in (0, 1]");
  if (!(c.m > 0.0)) throw std::invalid_argument("m must be positive");
  if (c.B != ms.coeffs.B || c.q != ms.coeffs.q || c.m != ms.coeffs.m) {
    throw std::invalid_argument("problem coefficients differ from the manufactured solution's");
  }
}

int quadrature_degree(const ProblemParams& p, Method method, int degree) {
  const int d = p.quad_degree > 0 ? p.quad_degree : default_quadrature_degree(method, degree);
  if (d > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature degree " + std::to_string(d) +
                                " exceeds the supported maximum of " +
                                std::to_string(kMaxQuadratureDegree));
  }
  return d;
}

struct EdgePoints {
  std::vector<Point> x;
  std::vector<double> w;  // includes the edge length
  std::vector<double> sigma;
};

// Points along edge e parametrized from the lower to the higher vertex.
EdgePoints edge_points(const Mesh& mesh, int e, const LineRule& rule) {
  const Point& a = mesh.vertices[mesh.edges[e][0]];
  const Point& b = mesh.vertices[mesh.edges[e][1]];
  const double len = (b - a).norm();
  EdgePoints ep;
  for (int q = 0; q < rule.size(); ++q) {
    ep.x.push_back(a + rule.points[q] * (b - a));
    ep.w.push_back(rule.weights[q] * len);
    ep.sigma.push_back(rule.points[q]);
  }
  return ep;
}

std::vector<Point> to_reference(const CellGeometry& g, const std::vector<Point>& x) {
  std::vector<Point> out;
  out.reserve(x.size());
  for (const auto& p : x) out.push_back(g.to_reference(p));
  return out;
}

std::vector<Point> to_physical(const CellGeometry& g, const std::vector<Point>& xi) {
  std::vector<Point> out;
  out.reserve(xi.size());
  for (const auto& p : xi) out.push_back(g.to_physical(p));
  return out;
}

// X^T diag(w) Y
Eigen::MatrixXd weighted(const Eigen::MatrixXd& x, const Eigen::VectorXd& w,
                         const Eigen::MatrixXd& y) {
  return x.transpose() * w.asDiagonal() * y;
}

// X^T diag(w) X, symmetric to the last bit.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd g = weighted(x, w, x);
  return 0.5 * (g + g.transpose());
}

// Global matrix and right-hand side with symmetric elimination of strongly
// imposed DOFs: constrained rows become identity rows and their columns are
// moved to the right-hand side.
class GlobalSystem {
 public:
  GlobalSystem(int n, const DofConstraints& constraints)
      : n_(n), builder_(n, n), cons_(constraints) {}

  void couple(std::span<const int> rows, std::span<const int> cols) {
    std::vector<int> free_cols;
    free_cols.reserve(cols.size());
    for (int j : cols) {
      if (!cons_.is_fixed(j)) free_cols.push_back(j);
    }
    for (int i : rows) {
      if (cons_.is_fixed(i)) continue;
      for (int j : free_cols) builder_.insert(i, j);
    }
  }

  void build_pattern() {
    for (int i = 0; i < n_; ++i) {
      if (cons_.is_fixed(i)) builder_.insert(i, i);
    }
    matrix = builder_.build();
    rhs = Eigen::VectorXd::Zero(n_);
  }

  void add(std::span<const int> rows, std::span<const int> cols, const Eigen::MatrixXd& local) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const int i = rows[a];
      if (cons_.is_fixed(i)) continue;
      for (std::size_t b = 0; b < cols.size(); ++b) {
        const double v = local(a, b);
        if (v == 0.0) continue;
        const int j = cols[b];
        if (cons_.is_fixed(j)) {
          rhs(i) -= v * cons_.value(j);
        } else {
          matrix.add(i, j, v);
        }
      }
    }
  }

  void add_rhs(std::span<const int> rows, const Eigen::VectorXd& local) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (!cons_.is_fixed(rows[a])) rhs(rows[a]) += local(a);
    }
  }

  void finalize() {
    for (int i = 0; i < n_; ++i) {
      if (cons_.is_fixed(i)) {
        matrix.add(i, i, 1.0);
        rhs(i) = cons_.value(i);
      }
    }
  }

  CsrMatrix matrix;
  Eigen::VectorXd rhs;

 private:
  int n_;
  SparsityBuilder builder_;
  const DofConstraints& cons_;
};

// H(phi) = grad grad phi + q^2 T phi and, when third derivatives are
// present, div H(phi) = grad lap phi + q^2 (T grad phi + (div T) phi).
struct ScalarFluxes {
  Eigen::MatrixXd hxx, hxy, hyy;
  Eigen::MatrixXd divx, divy;
};

ScalarFluxes scalar_fluxes(const BasisValues& bv, const std::vector<Point>& x,
                           const ManufacturedSolution& ms) {
  const double q2 = ms.coeffs.q * ms.coeffs.q;
  ScalarFluxes f;
  f.hxx = bv(0, deriv::XX);
  f.hxy = bv(0, deriv::XY);
  f.hyy = bv(0, deriv::YY);
  const bool third = bv.order >= 3;
  if (third) {
    f.divx = bv(0, deriv::XXX) + bv(0, deriv::XYY);
    f.divy = bv(0, deriv::XXY) + bv(0, deriv::YYY);
  }
  for (int p = 0; p < bv.npoints; ++p) {
    const Eigen::Matrix2d t = q2 * ms.tensor.value(x[p]);
    const auto phi = bv(0, deriv::V).row(p);
    f.hxx.row(p) += t(0, 0) * phi;
    f.hxy.row(p) += t(0, 1) * phi;
    f.hyy.row(p) += t(1, 1) * phi;
    if (third) {
      const Eigen::Vector2d dt = q2 * ms.tensor.divergence(x[p]);
      const auto px = bv(0, deriv::X).row(p);
      const auto py = bv(0, deriv::Y).row(p);
      f.divx.row(p) += t(0, 0) * px + t(0, 1) * py + dt(0) * phi;
      f.divy.row(p) += t(1, 0) * px + t(1, 1) * py + dt(1) * phi;
    }
  }
  return f;
}

// Volume part of a(u, phi) = B int H(u):H(phi) + m int u phi on one cell.
Eigen::MatrixXd hessian_form(const BasisValues& bv, const std::vector<Point>& x,
                             const Eigen::VectorXd& w, const ManufacturedSolution& ms) {
  const ScalarFluxes f = scalar_fluxes(bv, x, ms);
  const double B = ms.coeffs.B, m = ms.coeffs.m;
  const Eigen::MatrixXd& phi = bv(0, deriv::V);
  return B * (gram(f.hxx, w) + 2.0 * gram(f.hxy, w) + gram(f.hyy, w)) + m * gram(phi, w);
}

Eigen::VectorXd load_vector(const BasisValues& bv, const std::vector<Point>& x,
                            const Eigen::VectorXd& w, const ManufacturedSolution& ms) {
  Eigen::VectorXd fw(bv.npoints);
  for (int p = 0; p < bv.npoints; ++p) fw(p) = w(p) * forcing(ms, x[p]);
  return bv(0, deriv::V).transpose() * fw;
}

struct CellQuadrature {
  std::vector<Point> ref;
  std::vector<Point> x;
  Eigen::VectorXd w;
};

CellQuadrature cell_quadrature(const QuadratureRule& rule, const CellGeometry& g) {
  CellQuadrature cq;
  cq.ref = rule.points;
  cq.x = to_physical(g, rule.points);
  cq.w.resize(rule.size());
  for (int i = 0; i < rule.size(); ++i) cq.w(i) = rule.weights[i] * std::abs(g.det);
  return cq;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

AssembledSystem assemble_conforming(const Mesh& mesh, const BoundaryPartition& partition,
                                    const ProblemParams& params, const ManufacturedSolution& ms,
                                    const AssemblyOptions& options) {
  validate(params, ms);
  const int qdeg = quadrature_degree(params, Method::Argyris, 5);
  const QuadratureRule rule = triangle_quadrature(qdeg);
  const LineRule line = line_quadrature(qdeg);
  const auto [B, q, m] = params.coeffs;
  const double h = mesh.h;
  const double pen0 = 1.0 / (q * h * h * h);
  const double pen1 = 1.0 / (q * q * q * h);
  const BoundaryData data = boundary_data(ms);

  AssembledSystem sys;
  sys.method = Method::Argyris;
  sys.degree = 5;
  sys.spaces.push_back(FunctionSpace::argyris(mesh));
  const FunctionSpace& space = sys.spaces[0];
  const int n = space.num_dofs();
  sys.block_offsets = {0, n};
  sys.block_names = {"u"};
  sys.constraints = DofConstraints(n);

  GlobalSystem gs(n, sys.constraints);
  for (int c = 0; c < mesh.num_cells(); ++c) gs.couple(space.cell_dofs(c), space.cell_dofs(c));
  gs.build_pattern();

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, c);
    const CellQuadrature cq = cell_quadrature(rule, g);
    const BasisValues bv = space.evaluate(c, cq.ref, 2);
    const auto dofs = space.cell_dofs(c);
    if (options.volume) gs.add(dofs, dofs, hessian_form(bv, cq.x, cq.w, ms));
    if (options.rhs) gs.add_rhs(dofs, load_vector(bv, cq.x, cq.w, ms));
  }

  for (int e : mesh.boundary_edges) {
    const BoundaryLabel label = partition.label(e);
    const bool on0 = contains(BoundaryUnion::Gamma0, label);
    const bool on1 = contains(BoundaryUnion::Gamma1, label);
    const bool on2 = contains(BoundaryUnion::Gamma2, label);
    const bool on3 = contains(BoundaryUnion::Gamma3, label);
    const int c = mesh.edge_cells[e][0];
    const CellGeometry g = CellGeometry::of(mesh, c);
    const EdgePoints ep = edge_points(mesh, e, line);
    const BasisValues bv = space.evaluate(c, to_reference(g, ep.x), 3);
    const ScalarFluxes f = scalar_fluxes(bv, ep.x, ms);
    const Eigen::Vector2d nrm = mesh.edge_normal(e);
    const Eigen::MatrixXd& phi = bv(0, deriv::V);
    const Eigen::MatrixXd& px = bv(0, deriv::X);
    const Eigen::MatrixXd& py = bv(0, deriv::Y);
    // (div H(phi)) . n and H(phi) n
    const Eigen::MatrixXd dhn = nrm.x() * f.divx + nrm.y() * f.divy;
    const Eigen::MatrixXd hnx = nrm.x() * f.hxx + nrm.y() * f.hxy;
    const Eigen::MatrixXd hny = nrm.x() * f.hxy + nrm.y() * f.hyy;
    const Eigen::VectorXd w = as_vector(ep.w);
    const auto dofs = space.cell_dofs(c);
    const int nd = bv.ndofs;

    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(nd);
    if (on0) {
      if (options.consistency) {
        // rows: test, columns: trial
        local += B * weighted(phi, w, dhn) - B * weighted(dhn, w, phi);
      }
      if (options.penalty) local += pen0 * weighted(phi, w, phi);
      Eigen::VectorXd g0(ep.x.size());
      for (std::size_t p = 0; p < ep.x.size(); ++p) g0(p) = data.g0(ep.x[p]) + options.g0_shift;
      const Eigen::VectorXd wg0 = w.cwiseProduct(g0);
      if (options.consistency) load -= B * dhn.transpose() * wg0;
      if (options.penalty) load += pen0 * phi.transpose() * wg0;
    }
    if (on1) {
      if (options.consistency) {
        const Eigen::MatrixXd grad_hn = weighted(px, w, hnx) + weighted(py, w, hny);
        local += -B * grad_hn + B * grad_hn.transpose();
      }
      if (options.penalty) local += pen1 * (weighted(px, w, px) + weighted(py, w, py));
      Eigen::VectorXd g1x(ep.x.size()), g1y(ep.x.size());
      for (std::size_t p = 0; p < ep.x.size(); ++p) {
        const Eigen::Vector2d g1 = data.g1(ep.x[p]);
        g1x(p) = w(p) * g1.x();
        g1y(p) = w(p) * g1.y();
      }
      if (options.consistency) load += B * (hnx.transpose() * g1x + hny.transpose() * g1y);
      if (options.penalty) load += pen1 * (px.transpose() * g1x + py.transpose() * g1y);
    }
    if (on2) {
      Eigen::VectorXd gx(ep.x.size()), gy(ep.x.size());
      for (std::size_t p = 0; p < ep.x.size(); ++p) {
        const Eigen::Vector2d g2 = data.G2(ep.x[p], nrm);
        gx(p) = w(p) * g2.x();
        gy(p) = w(p) * g2.y();
      }
      load += B * (px.transpose() * gx + py.transpose() * gy);
    }
    if (on3) {
      Eigen::VectorXd g3(ep.x.size());
      for (std::size_t p = 0; p < ep.x.size(); ++p) g3(p) = w(p) * data.G3(ep.x[p], nrm);
      load -= B * phi.transpose() * g3;
    }
    gs.add(dofs, dofs, local);
    if (options.rhs) gs.add_rhs(dofs, load);
  }

  gs.finalize();
  sys.matrix = std::move(gs.matrix);
  sys.rhs = std::move(gs.rhs);
  return sys;
}

AssembledSystem assemble_c0ip(const Mesh& mesh, const BoundaryPartition& partition,
                              const ProblemParams& params, const ManufacturedSolution& ms,
                              const AssemblyOptions& options) {
  validate(params, ms);
  const int k = params.degree;
  if (k < 2 || k > 4) throw std::invalid_argument("c0ip: degree must be in 2..4");
  const int qdeg = quadrature_degree(params, Method::C0IP, k);
  const QuadratureRule rule = triangle_quadrature(qdeg);
  const LineRule line = line_quadrature(qdeg);
  const auto [B, q, m] = params.coeffs;
  const double pen = 1.0 / (q * q * q * mesh.h);
  const BoundaryData data = boundary_data(ms);

  AssembledSystem sys;
  sys.method = Method::C0IP;
  sys.degree = k;
  sys.spaces.push_back(FunctionSpace::cg(mesh, k));
  const FunctionSpace& space = sys.spaces[0];
  const int n = space.num_dofs();
  sys.block_offsets = {0, n};
  sys.block_names = {"u"};
  sys.constraints = DofConstraints(n);
  {
    std::vector<int> dofs;
    std::vector<Point> pts;
    for (int e : partition.edges_in(BoundaryUnion::Gamma0)) {
      space.edge_closure_dofs(e, dofs, pts);
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        sys.constraints.set(dofs[i], data.g0(pts[i]) + options.g0_shift);
      }
    }
  }

  // Facets carrying jump/average terms: interior edges and Gamma1 edges.
  std::vector<int> facets;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e) || partition.in(BoundaryUnion::Gamma1, e)) facets.push_back(e);
  }

  GlobalSystem gs(n, sys.constraints);
  for (int c = 0; c < mesh.num_cells(); ++c) gs.couple(space.cell_dofs(c), space.cell_dofs(c));
  auto facet_dofs = [&](int e) {
    std::vector<int> d;
    for (int side = 0; side < 2; ++side) {
      const int c = mesh.edge_cells[e][side];
      if (c < 0) continue;
      const auto cd = space.cell_dofs(c);
      d.insert(d.end(), cd.begin(), cd.end());
    }
    return d;
  };
  for (int e : facets) {
    const std::vector<int> d = facet_dofs(e);
    gs.couple(d, d);
  }
  gs.build_pattern();

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, c);
    const CellQuadrature cq = cell_quadrature(rule, g);
    const BasisValues bv = space.evaluate(c, cq.ref, 2);
    const auto dofs = space.cell_dofs(c);
    if (options.volume) gs.add(dofs, dofs, hessian_form(bv, cq.x, cq.w, ms));
    if (options.rhs) gs.add_rhs(dofs, load_vector(bv, cq.x, cq.w, ms));
  }

  const int nd = space.dofs_per_cell();
  for (int e : facets) {
    const bool interior = !mesh.is_boundary_edge(e);
    const EdgePoints ep = edge_points(mesh, e, line);
    const Eigen::VectorXd w = as_vector(ep.w);
    const Eigen::Vector2d nrm = mesh.edge_normal(e);
    const int nsides = interior ? 2 : 1;
    const int np = static_cast<int>(ep.x.size());
    // Columns: DOFs of the lower cell, then of the upper cell.
    Eigen::MatrixXd jump(np, nsides * nd), avg(np, nsides * nd);
    for (int side = 0; side < nsides; ++side) {
      const int c = mesh.edge_cells[e][side];
      const CellGeometry g = CellGeometry::of(mesh, c);
      const BasisValues bv = space.evaluate(c, to_reference(g, ep.x), 2);
      const ScalarFluxes f = scalar_fluxes(bv, ep.x, ms);
      const double s = side == 0 ? 1.0 : -1.0;
      const double half = interior ? 0.5 : 1.0;
      jump.middleCols(side * nd, nd) = s * (nrm.x() * bv(0, deriv::X) + nrm.y() * bv(0, deriv::Y));
      avg.middleCols(side * nd, nd) =
          half * (nrm.x() * nrm.x() * f.hxx + 2.0 * nrm.x() * nrm.y() * f.hxy +
                  nrm.y() * nrm.y() * f.hyy);
    }
    const std::vector<int> dofs = facet_dofs(e);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nsides * nd, nsides * nd);
    if (options.consistency) {
      const Eigen::MatrixXd ja = weighted(jump, w, avg);  // (test jump, trial average)
      local += -B * ja + B * ja.transpose();
    }
    if (options.penalty) local += pen * weighted(jump, w, jump);
    gs.add(dofs, dofs, local);

    if (!interior && options.rhs) {
      // Gamma1 data: the trial jump is replaced by g1 . n.
      Eigen::VectorXd g1n(np);
      for (int p = 0; p < np; ++p) g1n(p) = w(p) * data.g1(ep.x[p]).dot(nrm);
      Eigen::VectorXd load = Eigen::VectorXd::Zero(nd);
      if (options.consistency) load += B * avg.transpose() * g1n;
      if (options.penalty) load += pen * jump.transpose() * g1n;
      gs.add_rhs(dofs, load);
    }
  }

  if (options.rhs) {
    for (int e : mesh.boundary_edges) {
      const BoundaryLabel label = partition.label(e);
      const bool on2 = contains(BoundaryUnion::Gamma2, label);
      const bool on3 = contains(BoundaryUnion::Gamma3, label);
      if (!on2 && !on3) continue;
      const int c = mesh.edge_cells[e][0];
      const CellGeometry g = CellGeometry::of(mesh, c);
      const EdgePoints ep = edge_points(mesh, e, line);
      const BasisValues bv = space.evaluate(c, to_reference(g, ep.x), 1);
      const Eigen::Vector2d nrm = mesh.edge_normal(e);
      Eigen::VectorXd load = Eigen::VectorXd::Zero(nd);
      for (std::size_t p = 0; p < ep.x.size(); ++p) {
        if (on2) {
          const Eigen::Vector2d g2 = data.G2(ep.x[p], nrm);
          load += B * ep.w[p] *
                  (g2.x() * bv(0, deriv::X).row(p) + g2.y() * bv(0, deriv::Y).row(p)).transpose();
        }
        if (on3) {
          load -= B * ep.w[p] * data.G3(ep.x[p], nrm) * bv(0, deriv::V).row(p).transpose();
        }
      }
      gs.add_rhs(space.cell_dofs(c), load);
    }
  }

  gs.finalize();
  sys.matrix = std::move(gs.matrix);
  sys.rhs = std::move(gs.rhs);
  return sys;
}

AssembledSystem assemble_mixed(const Mesh& mesh, const BoundaryPartition& partition,
                               const ProblemParams& params, const ManufacturedSolution& ms,
                               const AssemblyOptions& options) {
  validate(params, ms);
  const int k = params.degree;
  if (k < 1 || k > 3) throw std::invalid_argument("mixed: degree must be in 1..3");
  if (partition.spec().all_sides(BoundaryLabel::G31)) {
    throw std::invalid_argument("mixed: the whole boundary cannot carry the 31 label");
  }
  const int qdeg = quadrature_degree(params, Method::Mixed, k);
  const QuadratureRule rule = triangle_quadrature(qdeg);
  const LineRule line = line_quadrature(qdeg);
  const auto [B, q, m] = params.coeffs;
  const double q2 = q * q;
  const BoundaryData data = boundary_data(ms);

  AssembledSystem sys;
  sys.method = Method::Mixed;
  sys.degree = k;
  sys.spaces.push_back(FunctionSpace::dg(mesh, k));
  sys.spaces.push_back(FunctionSpace::cg(mesh, k + 2));
  sys.spaces.push_back(FunctionSpace::rt(mesh, k));
  const FunctionSpace& us = sys.spaces[0];
  const FunctionSpace& vs = sys.spaces[1];
  const FunctionSpace& as = sys.spaces[2];
  const int nu = us.num_dofs(), nv = vs.num_dofs(), na = as.num_dofs();
  const int off_vx = nu, off_vy = nu + nv, off_a = nu + 2 * nv;
  const int n = off_a + na;
  sys.block_offsets = {0, off_vx, off_vy, off_a, n};
  sys.block_names = {"u", "v_x", "v_y", "alpha"};
  sys.constraints = DofConstraints(n);

  // v: tangential component on Gamma02, then both components on Gamma1.
  {
    std::vector<int> dofs;
    std::vector<Point> pts;
    for (int e : partition.edges_with(BoundaryLabel::G02)) {
      const Side side = partition.side(e);
      const bool horizontal = side == Side::South || side == Side::North;
      vs.edge_closure_dofs(e, dofs, pts);
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        const Eigen::Vector2d g1 = data.g1(pts[i]);
        if (horizontal) {
          sys.constraints.set(off_vx + dofs[i], g1.x());
        } else {
          sys.constraints.set(off_vy + dofs[i], g1.y());
        }
      }
    }
    for (int e : partition.edges_in(BoundaryUnion::Gamma1)) {
      vs.edge_closure_dofs(e, dofs, pts);
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        const Eigen::Vector2d g1 = data.g1(pts[i]);
        sys.constraints.set(off_vx + dofs[i], g1.x());
        sys.constraints.set(off_vy + dofs[i], g1.y());
      }
    }
    // alpha . n = B G3 on Gamma3, imposed through the edge flux moments.
    for (int e : partition.edges_in(BoundaryUnion::Gamma3)) {
      const EdgePoints ep = edge_points(mesh, e, line);
      const Eigen::Vector2d nrm = mesh.edge_normal(e);
      for (int j = 0; j <= k; ++j) {
        double moment = 0.0;
        for (std::size_t p = 0; p < ep.x.size(); ++p) {
          moment += ep.w[p] * B * data.G3(ep.x[p], nrm) * shifted_legendre(j, ep.sigma[p]);
        }
        sys.constraints.set(off_a + e * (k + 1) + j, moment);
      }
    }
  }

  auto shifted = [](std::span<const int> d, int off) {
    std::vector<int> out(d.begin(), d.end());
    for (int& x : out) x += off;
    return out;
  };

  GlobalSystem gs(n, sys.constraints);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const std::vector<int> du = shifted(us.cell_dofs(c), 0);
    const std::vector<int> dvx = shifted(vs.cell_dofs(c), off_vx);
    const std::vector<int> dvy = shifted(vs.cell_dofs(c), off_vy);
    const std::vector<int> da = shifted(as.cell_dofs(c), off_a);
    gs.couple(du, du);
    for (const auto* dv : {&dvx, &dvy}) {
      gs.couple(*dv, *dv);
      gs.couple(du, *dv);
      gs.couple(*dv, du);
      gs.couple(*dv, da);
      gs.couple(da, *dv);
    }
    gs.couple(du, da);
    gs.couple(da, du);
  }
  gs.build_pattern();

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, c);
    const CellQuadrature cq = cell_quadrature(rule, g);
    const BasisValues bu = us.evaluate(c, cq.ref, 0);
    const BasisValues bv = vs.evaluate(c, cq.ref, 1);
    const BasisValues ba = as.evaluate(c, cq.ref, 0);
    const std::vector<int> du = shifted(us.cell_dofs(c), 0);
    const std::vector<int> dvx = shifted(vs.cell_dofs(c), off_vx);
    const std::vector<int> dvy = shifted(vs.cell_dofs(c), off_vy);
    const std::vector<int> da = shifted(as.cell_dofs(c), off_a);
    const Eigen::MatrixXd& phi = bu(0, 0);
    const Eigen::MatrixXd& psi = bv(0, 0);
    const Eigen::MatrixXd& psix = bv(0, deriv::X);
    const Eigen::MatrixXd& psiy = bv(0, deriv::Y);
    const Eigen::VectorXd& w = cq.w;

    if (options.volume) {
      // (B q^4 T:T + m) u phi
      Eigen::VectorXd wr(w.size());
      // B q^2 (T grad psi)_a weights for the u-v_a coupling
      Eigen::MatrixXd tgx(psix.rows(), psix.cols()), tgy(psix.rows(), psix.cols());
      for (int p = 0; p < w.size(); ++p) {
        const Eigen::Matrix2d t = ms.tensor.value(cq.x[p]);
        wr(p) = w(p) * (B * q2 * q2 * t.squaredNorm() + m);
        tgx.row(p) = t(0, 0) * psix.row(p) + t(0, 1) * psiy.row(p);
        tgy.row(p) = t(1, 0) * psix.row(p) + t(1, 1) * psiy.row(p);
      }
      gs.add(du, du, gram(phi, wr));
      const Eigen::MatrixXd lap = B * (gram(psix, w) + gram(psiy, w));
      gs.add(dvx, dvx, lap);
      gs.add(dvy, dvy, lap);
      const Eigen::MatrixXd uvx = B * q2 * weighted(phi, w, tgx);
      const Eigen::MatrixXd uvy = B * q2 * weighted(phi, w, tgy);
      gs.add(du, dvx, uvx);
      gs.add(dvx, du, uvx.transpose());
      gs.add(du, dvy, uvy);
      gs.add(dvy, du, uvy.transpose());

      // b(alpha, (phi, psi)) = int alpha . psi + int phi div alpha, and its transpose.
      const Eigen::MatrixXd bu_a = weighted(phi, w, ba.divergence);
      const Eigen::MatrixXd bvx_a = weighted(psi, w, ba(0, 0));
      const Eigen::MatrixXd bvy_a = weighted(psi, w, ba(1, 0));
      gs.add(du, da, bu_a);
      gs.add(da, du, bu_a.transpose());
      gs.add(dvx, da, bvx_a);
      gs.add(da, dvx, bvx_a.transpose());
      gs.add(dvy, da, bvy_a);
      gs.add(da, dvy, bvy_a.transpose());
    }
    if (options.rhs) gs.add_rhs(du, load_vector(bu, cq.x, cq.w, ms));
  }

  if (options.rhs) {
    for (int e : mesh.boundary_edges) {
      const BoundaryLabel label = partition.label(e);
      const bool on0 = contains(BoundaryUnion::Gamma0, label);
      const bool on2 = contains(BoundaryUnion::Gamma2, label);
      if (!on0 && !on2) continue;
      const int c = mesh.edge_cells[e][0];
      const CellGeometry g = CellGeometry::of(mesh, c);
      const EdgePoints ep = edge_points(mesh, e, line);
      const std::vector<Point> ref = to_reference(g, ep.x);
      const Eigen::Vector2d nrm = mesh.edge_normal(e);
      if (on2) {
        const BasisValues bv = vs.evaluate(c, ref, 0);
        Eigen::VectorXd gx(ep.x.size()), gy(ep.x.size());
        for (std::size_t p = 0; p < ep.x.size(); ++p) {
          const Eigen::Vector2d g2 = data.G2(ep.x[p], nrm);
          gx(p) = ep.w[p] * g2.x();
          gy(p) = ep.w[p] * g2.y();
        }
        gs.add_rhs(shifted(vs.cell_dofs(c), off_vx), B * bv(0, 0).transpose() * gx);
        gs.add_rhs(shifted(vs.cell_dofs(c), off_vy), B * bv(0, 0).transpose() * gy);
      }
      if (on0) {
        // int u beta . n with u = g0 on Gamma0
        const BasisValues ba = as.evaluate(c, ref, 0);
        const Eigen::MatrixXd bn = nrm.x() * ba(0, 0) + nrm.y() * ba(1, 0);
        Eigen::VectorXd g0(ep.x.size());
        for (std::size_t p = 0; p < ep.x.size(); ++p) {
          g0(p) = ep.w[p] * (data.g0(ep.x[p]) + options.g0_shift);
        }
        gs.add_rhs(shifted(as.cell_dofs(c), off_a), bn.transpose() * g0);
      }
    }
  }

  gs.finalize();
  sys.matrix = std::move(gs.matrix);
  sys.rhs = std::move(gs.rhs);
  return sys;
}

AssembledSystem assemble(Method method, const Mesh& mesh, const BoundaryPartition& partition,
                         const ProblemParams& params, const ManufacturedSolution& ms,
                         const AssemblyOptions& options) {
  switch (method) {
    case Method::Argyris: return assemble_conforming(mesh, partition, params, ms, options);
    case Method::C0IP: return assemble_c0ip(mesh, partition, params, ms, options);
    case Method::Mixed: return assemble_mixed(mesh, partition, params, ms, options);
  }
  throw std::invalid_argument("assemble: unknown method");
}

Eigen::VectorXd interpolate_exact(const AssembledSystem& sys, const ManufacturedSolution& ms) {
  switch (sys.method) {
    case Method::Argyris:
      return sys.spaces[0].interpolate_jet([&ms](const Point& x) { return ms.jet(x).truncate(); });
    case Method::C0IP: return sys.spaces[0].interpolate([&ms](const Point& x) { return ms.u(x); });
    case Method::Mixed: {
      Eigen::VectorXd out(sys.block_offsets.back());
      const int nu = sys.block_offsets[1], nv = sys.block_offsets[2] - sys.block_offsets[1];
      // DG block: cellwise L2 projection.
      const FunctionSpace& us = sys.spaces[0];
      const QuadratureRule rule = triangle_quadrature(kMaxQuadratureDegree);
      for (int c = 0; c < us.mesh().num_cells(); ++c) {
        const CellQuadrature cq = cell_quadrature(rule, CellGeometry::of(us.mesh(), c));
        const BasisValues bu = us.evaluate(c, cq.ref, 0);
        const Eigen::MatrixXd& phi = bu(0, 0);
        Eigen::VectorXd fw(cq.w.size());
        for (int p = 0; p < cq.w.size(); ++p) fw(p) = cq.w(p) * ms.u(cq.x[p]);
        const Eigen::VectorXd local = gram(phi, cq.w).llt().solve(phi.transpose() * fw);
        const auto dofs = us.cell_dofs(c);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
          out(dofs[i]) = local(static_cast<Eigen::Index>(i));
        }
      }
      out.segment(nu, nv) =
          sys.spaces[1].interpolate([&ms](const Point& x) { return ms.jet(x).grad.x(); });
      out.segment(nu + nv, nv) =
          sys.spaces[1].interpolate([&ms](const Point& x) { return ms.jet(x).grad.y(); });
      const double B = ms.coeffs.B;
      out.tail(out.size() - nu - 2 * nv) = sys.spaces[2].interpolate_vector(
          [&ms, B](const Point& x) { return (B * ms.divergence_flux(x)).eval(); });
      return out;
    }
  }
  throw std::invalid_argument("interpolate_exact: unknown method");
}

}  // namespace smectic
