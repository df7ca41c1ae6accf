#include "smectic/element.hpp"

#include "smectic/quadrature.hpp"

#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace smectic {

std::string to_string(Family f) {
  switch (f) {
    case Family::CG: return "CG";
    case Family::DG: return "DG";
    case Family::Argyris: return "Argyris";
    case Family::RT: return "RT";
  }
  return "?";
}

const std::array<Point, 3>& reference_vertices() {
  static const std::array<Point, 3> v{Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};
  return v;
}

CellGeometry CellGeometry::of(const Mesh& mesh, int cell) {
  const auto& cv = mesh.cells[cell];
  CellGeometry g;
  g.origin = mesh.vertices[cv[0]];
  g.jacobian.col(0) = mesh.vertices[cv[1]] - g.origin;
  g.jacobian.col(1) = mesh.vertices[cv[2]] - g.origin;
  g.det = g.jacobian.determinant();
  g.inverse = g.jacobian.inverse();
  return g;
}

double shifted_legendre(int j, double s) {
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  if (j == 0) return p0;
  for (int n = 1; n < j; ++n) {
    const double p2 = ((2.0 * n + 1.0) * t * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

Eigen::MatrixXd monomial_table(const std::vector<Point>& points, int degree, int order,
                               bool orthogonal = false) {
  const int nslot = derivative_count(order);
  const int nmon = monomial_count(degree);
  Eigen::MatrixXd table(points.size() * nslot, nmon);
  Eigen::MatrixXd buf(nslot, nmon);
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (orthogonal) {
      dubiner_derivatives(points[p], degree, order, buf);
    } else {
      monomial_derivatives(points[p], degree, order, buf);
    }
    for (int d = 0; d < nslot; ++d) table.row(d * points.size() + p) = buf.row(d);
  }
  return table;
}

// Reference edge endpoints and outward normal scaled by edge length.
struct RefEdge {
  Point a, b, normal;
};

RefEdge reference_edge(int e) {
  const auto& v = reference_vertices();
  RefEdge r{v[(e + 1) % 3], v[(e + 2) % 3], Point::Zero()};
  const Point t = r.b - r.a;
  r.normal = Point(t.y(), -t.x());
  return r;
}

std::vector<Point> lagrange_nodes(int k) {
  std::vector<Point> nodes;
  const auto& v = reference_vertices();
  for (const auto& p : v) nodes.push_back(p);
  for (int e = 0; e < 3; ++e) {
    const RefEdge re = reference_edge(e);
    for (int i = 1; i < k; ++i) {
      nodes.push_back(re.a + (static_cast<double>(i) / k) * (re.b - re.a));
    }
  }
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i + j < k; ++i) {
      nodes.emplace_back(static_cast<double>(i) / k, static_cast<double>(j) / k);
    }
  }
  return nodes;
}

}  // namespace

ReferenceElement ReferenceElement::lagrange(int k, bool discontinuous) {
  if (k < 1 || k > 6) throw std::invalid_argument("lagrange: degree must be in 1..6");
  ReferenceElement el;
  el.family_ = discontinuous ? Family::DG : Family::CG;
  el.degree_ = k;
  el.poly_degree_ = k;
  el.nodes_ = lagrange_nodes(k);
  const int n = monomial_count(k);
  el.entity_dofs_ = discontinuous ? std::array<int, 3>{0, 0, n}
                                  : std::array<int, 3>{1, k - 1, (k - 1) * (k - 2) / 2};
  Eigen::MatrixXd vand(n, n);
  Eigen::MatrixXd buf(1, n);
  for (int i = 0; i < n; ++i) {
    monomial_derivatives(el.nodes_[i], k, 0, buf);
    vand.row(i) = buf.row(0);
  }
  // Columns of vand^{-1} are the basis coefficients.
  el.coeffs_ = {vand.inverse().transpose()};
  el.moment_points_ = el.nodes_;
  el.moment_weights_ = Eigen::MatrixXd::Identity(n, n);
  return el;
}

ReferenceElement ReferenceElement::argyris() {
  ReferenceElement el;
  el.family_ = Family::Argyris;
  el.degree_ = 5;
  el.poly_degree_ = 5;
  el.entity_dofs_ = {6, 1, 0};
  const int n = monomial_count(5);
  Eigen::MatrixXd dofs(n, n);
  Eigen::MatrixXd buf(derivative_count(2), n);
  const auto& v = reference_vertices();
  for (int i = 0; i < 3; ++i) {
    monomial_derivatives(v[i], 5, 2, buf);
    dofs.middleRows(6 * i, 6) = buf;
  }
  for (int e = 0; e < 3; ++e) {
    const RefEdge re = reference_edge(e);
    monomial_derivatives(0.5 * (re.a + re.b), 5, 1, buf.topRows(3));
    const Point nu = re.normal.normalized();
    dofs.row(18 + e) = nu.x() * buf.row(deriv::X) + nu.y() * buf.row(deriv::Y);
  }
  el.coeffs_ = {dofs.inverse().transpose()};
  return el;
}

ReferenceElement ReferenceElement::raviart_thomas(int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("raviart_thomas: degree must be in 0..4");
  ReferenceElement el;
  el.family_ = Family::RT;
  el.degree_ = k;
  el.poly_degree_ = k + 1;
  el.entity_dofs_ = {0, k + 1, k * (k + 1)};
  const int nmon = monomial_count(k + 1);
  const int ndofs = (k + 1) * (k + 3);

  // Spanning set P_k^2 + x * (top-degree part of P_k) in the orthogonal
  // triangle polynomials; monomial coefficients grow too large from k = 3 on.
  el.orthogonal_ = true;
  Eigen::MatrixXd span_x = Eigen::MatrixXd::Zero(nmon, ndofs);
  Eigen::MatrixXd span_y = Eigen::MatrixXd::Zero(nmon, ndofs);
  int col = 0;
  for (int j = 0; j < monomial_count(k); ++j) span_x(j, col++) = 1.0;
  for (int j = 0; j < monomial_count(k); ++j) span_y(j, col++) = 1.0;
  {
    // x P_{a,b} for a + b = k, expanded by orthogonal projection.
    const QuadratureRule rule = triangle_quadrature(2 * k + 2);
    const Eigen::MatrixXd basis = monomial_table(rule.points, k + 1, 0, true);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
    Eigen::VectorXd xs(rule.size()), ys(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      xs(q) = rule.points[q].x();
      ys(q) = rule.points[q].y();
    }
    for (int b = 0; b <= k; ++b, ++col) {
      const Eigen::VectorXd top = basis.col(monomial_index(k - b, b));
      for (int j = 0; j < nmon; ++j) {
        const Eigen::VectorXd wj = w.cwiseProduct(basis.col(j));
        const double norm = wj.dot(basis.col(j));
        span_x(j, col) = wj.dot(xs.cwiseProduct(top)) / norm;
        span_y(j, col) = wj.dot(ys.cwiseProduct(top)) / norm;
      }
    }
  }

  // DOF functionals as weights on point values of both components.
  const LineRule line = line_quadrature(2 * k + 6);
  const QuadratureRule tri = triangle_quadrature(std::min(2 * k + 6, kMaxQuadratureDegree));
  std::vector<Point> pts;
  for (int e = 0; e < 3; ++e) {
    const RefEdge re = reference_edge(e);
    for (double s : line.points) pts.push_back(re.a + s * (re.b - re.a));
  }
  const int nedge_pts = static_cast<int>(pts.size());
  for (const auto& p : tri.points) pts.push_back(p);
  const int npts = static_cast<int>(pts.size());
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(ndofs, 2 * npts);
  int row = 0;
  for (int e = 0; e < 3; ++e) {
    const RefEdge re = reference_edge(e);
    for (int j = 0; j <= k; ++j, ++row) {
      for (int q = 0; q < line.size(); ++q) {
        const int p = e * line.size() + q;
        const double w = line.weights[q] * shifted_legendre(j, line.points[q]);
        weights(row, p) = w * re.normal.x();
        weights(row, npts + p) = w * re.normal.y();
      }
    }
  }
  // Interior moments against the orthogonal polynomials of degree k - 1 keep the
  // interior basis functions of moderate size.
  for (int c = 0; c < 2; ++c) {
    for (int m = 0; m < monomial_count(k - 1); ++m, ++row) {
      for (int q = 0; q < tri.size(); ++q) {
        Eigen::MatrixXd buf(1, monomial_count(k - 1));
        dubiner_derivatives(tri.points[q], k - 1, 0, buf);
        weights(row, c * npts + nedge_pts + q) = tri.weights[q] * buf(0, m);
      }
    }
  }

  const Eigen::MatrixXd mono = monomial_table(pts, k + 1, 0, true);
  Eigen::MatrixXd values(2 * npts, ndofs);
  values.topRows(npts) = mono * span_x;
  values.bottomRows(npts) = mono * span_y;
  const Eigen::MatrixXd dual = weights * values;
  const Eigen::MatrixXd c = dual.inverse();
  el.coeffs_ = {(span_x * c).transpose(), (span_y * c).transpose()};
  el.moment_points_ = std::move(pts);
  el.moment_weights_ = std::move(weights);
  return el;
}

BasisValues ReferenceElement::tabulate(const std::vector<Point>& points, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("tabulate: order must be in 0..3");
  const int inner = value_size() == 2 ? std::max(order, 1) : order;
  const int nslot = derivative_count(order);
  const Eigen::MatrixXd mono = monomial_table(points, poly_degree_, inner, orthogonal_);
  const int np = static_cast<int>(points.size());
  BasisValues out;
  out.ndofs = ndofs();
  out.npoints = np;
  out.value_size = value_size();
  out.order = order;
  out.data.resize(value_size() * nslot);
  for (int c = 0; c < value_size(); ++c) {
    for (int d = 0; d < nslot; ++d) {
      out(c, d) = mono.middleRows(d * np, np) * coeffs_[c].transpose();
    }
  }
  if (value_size() == 2) {
    out.divergence = mono.middleRows(deriv::X * np, np) * coeffs_[0].transpose() +
                     mono.middleRows(deriv::Y * np, np) * coeffs_[1].transpose();
  }
  return out;
}

Eigen::MatrixXd argyris_transformation(const ReferenceElement& element, const Mesh& mesh,
                                       int cell) {
  const CellGeometry g = CellGeometry::of(mesh, cell);
  std::vector<Point> pts(reference_vertices().begin(), reference_vertices().end());
  for (int e = 0; e < 3; ++e) {
    const RefEdge re = reference_edge(e);
    pts.push_back(0.5 * (re.a + re.b));
  }
  const BasisValues ref = element.tabulate(pts, 2);
  const Eigen::MatrixXd r1 = derivative_transform(g.inverse, 1);
  const Eigen::MatrixXd r2 = derivative_transform(g.inverse, 2);
  const double h = mesh.h;
  const int n = element.ndofs();
  Eigen::MatrixXd dofs(n, n);
  for (int v = 0; v < 3; ++v) {
    for (int j = 0; j < n; ++j) {
      const double dx = ref(0, deriv::X)(v, j), dy = ref(0, deriv::Y)(v, j);
      const Eigen::Vector3d d2(ref(0, deriv::XX)(v, j), ref(0, deriv::XY)(v, j),
                               ref(0, deriv::YY)(v, j));
      const Eigen::Vector2d g1 = r1 * Eigen::Vector2d(dx, dy);
      const Eigen::Vector3d g2 = r2 * d2;
      dofs(6 * v, j) = ref(0, deriv::V)(v, j);
      dofs(6 * v + 1, j) = h * g1(0);
      dofs(6 * v + 2, j) = h * g1(1);
      dofs(6 * v + 3, j) = h * h * g2(0);
      dofs(6 * v + 4, j) = h * h * g2(1);
      dofs(6 * v + 5, j) = h * h * g2(2);
    }
  }
  for (int le = 0; le < 3; ++le) {
    const Point nu = mesh.edge_normal(mesh.cell_edges[cell][le]);
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d g1 =
          r1 * Eigen::Vector2d(ref(0, deriv::X)(3 + le, j), ref(0, deriv::Y)(3 + le, j));
      dofs(18 + le, j) = h * nu.dot(g1);
    }
  }
  return dofs.transpose().inverse();
}

std::vector<double> rt_dof_signs(const ReferenceElement& element, const Mesh& mesh, int cell) {
  std::vector<double> signs(element.ndofs(), 1.0);
  const int per_edge = element.dofs_per_edge();
  for (int le = 0; le < 3; ++le) {
    const int e = mesh.cell_edges[cell][le];
    const double normal_sign = mesh.edge_cells[e][0] == cell ? 1.0 : -1.0;
    const bool reversed = mesh.cell_edge_signs[cell][le] < 0;
    for (int j = 0; j < per_edge; ++j) {
      signs[le * per_edge + j] = normal_sign * ((reversed && j % 2 == 1) ? -1.0 : 1.0);
    }
  }
  return signs;
}

BasisValues tabulate_physical(const ReferenceElement& element, const Mesh& mesh, int cell,
                              const std::vector<Point>& ref_points, int order) {
  const CellGeometry g = CellGeometry::of(mesh, cell);
  if (element.family() == Family::RT) {
    if (order != 0) throw std::invalid_argument("tabulate_physical: RT supports order 0 only");
    BasisValues ref = element.tabulate(ref_points, 0);
    BasisValues out = ref;
    const std::vector<double> signs = rt_dof_signs(element, mesh, cell);
    const Eigen::Map<const Eigen::VectorXd> s(signs.data(), static_cast<Eigen::Index>(signs.size()));
    for (int c = 0; c < 2; ++c) {
      out(c, 0) = ((g.jacobian(c, 0) * ref(0, 0) + g.jacobian(c, 1) * ref(1, 0)) / g.det) *
                  s.asDiagonal();
    }
    out.divergence = (ref.divergence / g.det) * s.asDiagonal();
    return out;
  }

  BasisValues ref = element.tabulate(ref_points, order);
  BasisValues out = ref;
  for (int r = 1; r <= order; ++r) {
    const Eigen::MatrixXd rr = derivative_transform(g.inverse, r);
    const int base = monomial_index(r, 0);
    for (int dy = 0; dy <= r; ++dy) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ref.npoints, ref.ndofs);
      for (int k = 0; k <= r; ++k) {
        if (rr(dy, k) != 0.0) acc += rr(dy, k) * ref(0, base + k);
      }
      out(0, base + dy) = std::move(acc);
    }
  }
  if (element.family() == Family::Argyris) {
    const Eigen::MatrixXd mt = argyris_transformation(element, mesh, cell).transpose();
    for (auto& table : out.data) table = table * mt;
  }
  return out;
}

}  // namespace smectic
