#include "smectic/norms.hpp"

#include "smectic/element.hpp"
#include "smectic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smectic {

double ErrorReport::get(const std::string& name) const {
  for (const auto& [k, v] : errors) {
    if (k == name) return v;
  }
  throw std::out_of_range("ErrorReport: no norm named '" + name + "'");
}

bool ErrorReport::has(const std::string& name) const {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.first == name; });
}

std::vector<std::string> norm_names(Method method) {
  switch (method) {
    case Method::Argyris:
    case Method::C0IP: return {"l2", "h2q", "triple"};
    case Method::Mixed: return {"l2", "v_h1q", "product", "alpha_l2q", "alpha_divq"};
  }
  return {};
}

int error_quadrature_degree(Method method, int degree) {
  return std::min(std::max(14, 2 * trial_degree(method, degree) + 4), kMaxQuadratureDegree);
}

namespace {

// Discrete scalar field derivatives at points, by slot.
Eigen::MatrixXd field_slots(const BasisValues& bv, const Eigen::VectorXd& coeffs) {
  const int nslot = derivative_count(bv.order);
  Eigen::MatrixXd out(bv.npoints, nslot);
  for (int d = 0; d < nslot; ++d) out.col(d) = bv(0, d) * coeffs;
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& x, std::span<const int> dofs, int offset) {
  Eigen::VectorXd c(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) c(i) = x(offset + dofs[i]);
  return c;
}

std::vector<Point> map_points(const CellGeometry& g, const std::vector<Point>& ref) {
  std::vector<Point> out;
  for (const auto& p : ref) out.push_back(g.to_physical(p));
  return out;
}

struct EdgeSamples {
  std::vector<Point> x;
  std::vector<double> w;
};

EdgeSamples edge_samples(const Mesh& mesh, int e, const LineRule& rule) {
  const Point& a = mesh.vertices[mesh.edges[e][0]];
  const Point& b = mesh.vertices[mesh.edges[e][1]];
  const double len = (b - a).norm();
  EdgeSamples s;
  for (int q = 0; q < rule.size(); ++q) {
    s.x.push_back(a + rule.points[q] * (b - a));
    s.w.push_back(rule.weights[q] * len);
  }
  return s;
}

std::vector<Point> to_ref(const CellGeometry& g, const std::vector<Point>& x) {
  std::vector<Point> out;
  for (const auto& p : x) out.push_back(g.to_reference(p));
  return out;
}

// H(w) and div H(w) of a field from its slot values at one point.
struct FluxAt {
  Eigen::Matrix2d h;
  Eigen::Vector2d div;
};

FluxAt discrete_flux(const Eigen::RowVectorXd& s, const Point& x, const ManufacturedSolution& ms) {
  const double q2 = ms.coeffs.q * ms.coeffs.q;
  const Eigen::Matrix2d t = ms.tensor.value(x);
  FluxAt f;
  f.h << s(deriv::XX), s(deriv::XY), s(deriv::XY), s(deriv::YY);
  f.h += q2 * t * s(deriv::V);
  if (s.size() > deriv::YYY) {
    const Eigen::Vector2d grad(s(deriv::X), s(deriv::Y));
    f.div = Eigen::Vector2d(s(deriv::XXX) + s(deriv::XYY), s(deriv::XXY) + s(deriv::YYY)) +
            q2 * (t * grad + ms.tensor.divergence(x) * s(deriv::V));
  } else {
    f.div.setZero();
  }
  return f;
}

double exact_div_alpha(const ManufacturedSolution& ms, const Point& x) {
  const Jet j = ms.jet(x);
  const double q2 = ms.coeffs.q * ms.coeffs.q;
  const Eigen::Matrix2d t = ms.tensor.value(x);
  const double t_hess = (t.array() * j.hess.array()).sum();
  return ms.coeffs.B * (j.bilaplacian() + q2 * (t_hess + 2.0 * ms.tensor.divergence(x).dot(j.grad) +
                                                ms.tensor.divdiv(x) * j.value));
}

struct ScalarVolume {
  double l2 = 0.0, grad = 0.0, hess = 0.0;
};

ScalarVolume scalar_volume_errors(const FunctionSpace& space, const Eigen::VectorXd& x,
                                  const ManufacturedSolution& ms, const QuadratureRule& rule) {
  ScalarVolume v;
  const Mesh& mesh = space.mesh();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, c);
    const BasisValues bv = space.evaluate(c, rule.points, 2);
    const Eigen::MatrixXd s = field_slots(bv, gather(x, space.cell_dofs(c), 0));
    const std::vector<Point> pts = map_points(g, rule.points);
    for (int p = 0; p < rule.size(); ++p) {
      const Jet j = ms.jet(pts[p]);
      const double w = rule.weights[p] * std::abs(g.det);
      const double e = j.value - s(p, deriv::V);
      const double ex = j.grad.x() - s(p, deriv::X), ey = j.grad.y() - s(p, deriv::Y);
      const double exx = j.hess(0, 0) - s(p, deriv::XX);
      const double exy = j.hess(0, 1) - s(p, deriv::XY);
      const double eyy = j.hess(1, 1) - s(p, deriv::YY);
      v.l2 += w * e * e;
      v.grad += w * (ex * ex + ey * ey);
      v.hess += w * (exx * exx + 2.0 * exy * exy + eyy * eyy);
    }
  }
  return v;
}

void argyris_errors(ErrorReport& r, const AssembledSystem& sys, const Eigen::VectorXd& x,
                    const ManufacturedSolution& ms, const BoundaryPartition& partition, int qdeg) {
  const FunctionSpace& space = sys.spaces[0];
  const Mesh& mesh = space.mesh();
  const double q = ms.coeffs.q, h = mesh.h;
  const ScalarVolume vol = scalar_volume_errors(space, x, ms, triangle_quadrature(qdeg));
  const double q4 = std::pow(q, 4);
  const double h2q_sq = (vol.hess + vol.grad) / q4 + vol.l2;

  const LineRule line = line_quadrature(qdeg);
  double g0_val = 0.0, g0_div = 0.0, g1_grad = 0.0, g1_hn = 0.0;
  for (int e : mesh.boundary_edges) {
    const bool on0 = partition.in(BoundaryUnion::Gamma0, e);
    const bool on1 = partition.in(BoundaryUnion::Gamma1, e);
    if (!on0 && !on1) continue;
    const int c = mesh.edge_cells[e][0];
    const CellGeometry g = CellGeometry::of(mesh, c);
    const EdgeSamples es = edge_samples(mesh, e, line);
    const BasisValues bv = space.evaluate(c, to_ref(g, es.x), 3);
    const Eigen::MatrixXd s = field_slots(bv, gather(x, space.cell_dofs(c), 0));
    const Eigen::Vector2d nrm = mesh.edge_normal(e);
    for (std::size_t p = 0; p < es.x.size(); ++p) {
      const Jet j = ms.jet(es.x[p]);
      const FluxAt fh = discrete_flux(s.row(p), es.x[p], ms);
      const double w = es.w[p];
      if (on0) {
        const double ev = j.value - s(p, deriv::V);
        const double ed = (ms.divergence_flux(es.x[p]) - fh.div).dot(nrm);
        g0_val += w * ev * ev;
        g0_div += w * ed * ed;
      }
      if (on1) {
        const Eigen::Vector2d eg = j.grad - Eigen::Vector2d(s(p, deriv::X), s(p, deriv::Y));
        const Eigen::Vector2d ehn = (ms.hessian_flux(es.x[p]) - fh.h) * nrm;
        g1_grad += w * eg.squaredNorm();
        g1_hn += w * ehn.squaredNorm();
      }
    }
  }
  const double triple_sq = h2q_sq + g0_val / (q * h * h * h) + std::pow(h, 3) / std::pow(q, 7) * g0_div +
                           g1_grad / (q * q * q * h) + h / std::pow(q, 5) * g1_hn;
  r.errors = {{"l2", std::sqrt(vol.l2)}, {"h2q", std::sqrt(h2q_sq)}, {"triple", std::sqrt(triple_sq)}};
}

void c0ip_errors(ErrorReport& r, const AssembledSystem& sys, const Eigen::VectorXd& x,
                 const ManufacturedSolution& ms, const BoundaryPartition& partition, int qdeg) {
  const FunctionSpace& space = sys.spaces[0];
  const Mesh& mesh = space.mesh();
  const double q = ms.coeffs.q, h = mesh.h;
  const ScalarVolume vol = scalar_volume_errors(space, x, ms, triangle_quadrature(qdeg));
  const double h2q_sq = (vol.hess + vol.grad) / std::pow(q, 4) + vol.l2;

  const LineRule line = line_quadrature(qdeg);
  double avg_sq = 0.0, jump_sq = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const bool interior = !mesh.is_boundary_edge(e);
    if (!interior && !partition.in(BoundaryUnion::Gamma1, e)) continue;
    const EdgeSamples es = edge_samples(mesh, e, line);
    const Eigen::Vector2d nrm = mesh.edge_normal(e);
    const int np = static_cast<int>(es.x.size());
    Eigen::VectorXd avg_h = Eigen::VectorXd::Zero(np), jump_h = Eigen::VectorXd::Zero(np);
    const int nsides = interior ? 2 : 1;
    for (int side = 0; side < nsides; ++side) {
      const int c = mesh.edge_cells[e][side];
      const CellGeometry g = CellGeometry::of(mesh, c);
      const BasisValues bv = space.evaluate(c, to_ref(g, es.x), 2);
      const Eigen::MatrixXd s = field_slots(bv, gather(x, space.cell_dofs(c), 0));
      const double sgn = side == 0 ? 1.0 : -1.0;
      const double half = interior ? 0.5 : 1.0;
      for (int p = 0; p < np; ++p) {
        const FluxAt fh = discrete_flux(s.row(p), es.x[p], ms);
        avg_h(p) += half * nrm.dot(fh.h * nrm);
        jump_h(p) += sgn * (s(p, deriv::X) * nrm.x() + s(p, deriv::Y) * nrm.y());
      }
    }
    for (int p = 0; p < np; ++p) {
      const double exact_avg = nrm.dot(ms.hessian_flux(es.x[p]) * nrm);
      // The exact solution has no interior jump; on the boundary the jump is
      // the one-sided normal derivative.
      const double exact_jump = interior ? 0.0 : ms.jet(es.x[p]).grad.dot(nrm);
      const double ea = exact_avg - avg_h(p);
      const double ej = exact_jump - jump_h(p);
      avg_sq += es.w[p] * ea * ea;
      jump_sq += es.w[p] * ej * ej;
    }
  }
  const double triple_sq = h2q_sq + h / std::pow(q, 5) * avg_sq + jump_sq / (q * q * q * h);
  r.errors = {{"l2", std::sqrt(vol.l2)}, {"h2q", std::sqrt(h2q_sq)}, {"triple", std::sqrt(triple_sq)}};
}

struct MixedVolume {
  double u_l2 = 0.0, v_l2 = 0.0, v_grad = 0.0, a_l2 = 0.0, a_div = 0.0, product_direct = 0.0;
};

MixedVolume mixed_volume_errors(const AssembledSystem& sys, const Eigen::VectorXd& x,
                                const ManufacturedSolution& ms, int qdeg) {
  const FunctionSpace& us = sys.spaces[0];
  const FunctionSpace& vs = sys.spaces[1];
  const FunctionSpace& as = sys.spaces[2];
  const Mesh& mesh = us.mesh();
  const QuadratureRule rule = triangle_quadrature(qdeg);
  const int off_vx = sys.block_offsets[1], off_vy = sys.block_offsets[2],
            off_a = sys.block_offsets[3];
  const double B = ms.coeffs.B, q4 = std::pow(ms.coeffs.q, 4);
  MixedVolume mv;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(mesh, c);
    const std::vector<Point> pts = map_points(g, rule.points);
    const BasisValues bu = us.evaluate(c, rule.points, 0);
    const BasisValues bv = vs.evaluate(c, rule.points, 1);
    const BasisValues ba = as.evaluate(c, rule.points, 0);
    const Eigen::VectorXd uh = bu(0, 0) * gather(x, us.cell_dofs(c), 0);
    const Eigen::MatrixXd vx = field_slots(bv, gather(x, vs.cell_dofs(c), off_vx));
    const Eigen::MatrixXd vy = field_slots(bv, gather(x, vs.cell_dofs(c), off_vy));
    const Eigen::VectorXd ac = gather(x, as.cell_dofs(c), off_a);
    const Eigen::VectorXd ax = ba(0, 0) * ac, ay = ba(1, 0) * ac, adiv = ba.divergence * ac;
    for (int p = 0; p < rule.size(); ++p) {
      const Point& xp = pts[p];
      const Jet j = ms.jet(xp);
      const double w = rule.weights[p] * std::abs(g.det);
      const double eu = j.value - uh(p);
      const Eigen::Vector2d ev(j.grad.x() - vx(p, 0), j.grad.y() - vy(p, 0));
      const double gxx = j.hess(0, 0) - vx(p, deriv::X), gxy = j.hess(0, 1) - vx(p, deriv::Y);
      const double gyx = j.hess(1, 0) - vy(p, deriv::X), gyy = j.hess(1, 1) - vy(p, deriv::Y);
      const double egrad = gxx * gxx + gxy * gxy + gyx * gyx + gyy * gyy;
      const Eigen::Vector2d ea = B * ms.divergence_flux(xp) - Eigen::Vector2d(ax(p), ay(p));
      const double ed = exact_div_alpha(ms, xp) - adiv(p);
      mv.u_l2 += w * eu * eu;
      mv.v_l2 += w * ev.squaredNorm();
      mv.v_grad += w * egrad;
      mv.a_l2 += w * ea.squaredNorm();
      mv.a_div += w * ed * ed;
      mv.product_direct += w * (eu * eu + (ev.squaredNorm() + egrad) / q4);
    }
  }
  return mv;
}

}  // namespace

ErrorReport compute_errors(const AssembledSystem& sys, const Eigen::VectorXd& x,
                           const ManufacturedSolution& ms, const BoundaryPartition& partition,
                           int quad_degree) {
  if (x.size() != sys.block_offsets.back()) {
    throw std::invalid_argument("compute_errors: solution size does not match the system");
  }
  const int qdeg = quad_degree > 0 ? quad_degree : error_quadrature_degree(sys.method, sys.degree);
  ErrorReport r;
  r.method = sys.method;
  r.degree = sys.degree;
  const Mesh& mesh = sys.spaces[0].mesh();
  r.n = mesh.n;
  r.h = mesh.h;
  r.dofs = sys.dimension();
  switch (sys.method) {
    case Method::Argyris: argyris_errors(r, sys, x, ms, partition, qdeg); break;
    case Method::C0IP: c0ip_errors(r, sys, x, ms, partition, qdeg); break;
    case Method::Mixed: {
      const MixedVolume mv = mixed_volume_errors(sys, x, ms, qdeg);
      const double q2 = ms.coeffs.q * ms.coeffs.q;
      const double v_h1 = std::sqrt(mv.v_l2 + mv.v_grad);
      r.errors = {{"l2", std::sqrt(mv.u_l2)},
                  {"v_h1q", v_h1 / q2},
                  {"product", std::sqrt(mv.u_l2 + (mv.v_l2 + mv.v_grad) / (q2 * q2))},
                  {"alpha_l2q", std::sqrt(mv.a_l2) / q2},
                  {"alpha_divq", std::sqrt(mv.a_div) / q2}};
      break;
    }
  }
  return r;
}

double mixed_product_norm_direct(const AssembledSystem& sys, const Eigen::VectorXd& x,
                                 const ManufacturedSolution& ms, int quad_degree) {
  if (sys.method != Method::Mixed) {
    throw std::invalid_argument("mixed_product_norm_direct: system is not mixed");
  }
  const int qdeg = quad_degree > 0 ? quad_degree : error_quadrature_degree(sys.method, sys.degree);
  return std::sqrt(mixed_volume_errors(sys, x, ms, qdeg).product_direct);
}

std::vector<Slope> estimate_rates(const std::vector<ErrorReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("estimate_rates: need at least two levels");
  const ErrorReport& prev = reports[reports.size() - 2];
  const ErrorReport& last = reports.back();
  if (!(last.n > prev.n)) throw std::invalid_argument("estimate_rates: levels must refine");
  std::vector<Slope> out;
  for (const auto& [name, e_last] : last.errors) {
    const double e_prev = prev.get(name);
    if (!(e_last > 0.0) || !(e_prev > 0.0)) {
      throw std::invalid_argument("estimate_rates: zero error for '" + name +
                                  "', slope undefined");
    }
    const double order = std::log(e_last / e_prev) / std::log(last.h / prev.h);
    out.push_back({name, -order, order});
  }
  return out;
}

double estimate_q_slope(const std::vector<double>& q, const std::vector<double>& e) {
  if (q.size() < 2 || q.size() != e.size()) {
    throw std::invalid_argument("estimate_q_slope: need at least two q values");
  }
  const std::size_t n = q.size();
  if (!(e[n - 1] > 0.0) || !(e[n - 2] > 0.0)) {
    throw std::invalid_argument("estimate_q_slope: zero error, slope undefined");
  }
  return std::log(e[n - 1] / e[n - 2]) / std::log(q[n - 1] / q[n - 2]);
}

}  // namespace smectic
