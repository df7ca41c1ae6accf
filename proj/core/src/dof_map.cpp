#include "smectic/dof_map.hpp"

#include <stdexcept>
#include <string>

namespace smectic {

FunctionSpace::FunctionSpace(const Mesh& mesh, ReferenceElement element)
    : mesh_(&mesh), element_(std::move(element)) {}

long long FunctionSpace::count(Family family, int k, long long vertices, long long edges,
                               long long cells) {
  switch (family) {
    case Family::CG:
      return vertices + (k - 1) * edges + static_cast<long long>((k - 1) * (k - 2) / 2) * cells;
    case Family::DG: return static_cast<long long>((k + 1) * (k + 2) / 2) * cells;
    case Family::Argyris: return 6 * vertices + edges;
    case Family::RT: return (k + 1) * edges + static_cast<long long>(k * (k + 1)) * cells;
  }
  throw std::invalid_argument("FunctionSpace::count: unknown family");
}

FunctionSpace FunctionSpace::cg(const Mesh& mesh, int k) {
  if (k < 1) throw std::invalid_argument("FunctionSpace::cg: degree must be >= 1");
  FunctionSpace s(mesh, ReferenceElement::lagrange(k));
  const int nv = mesh.num_vertices(), ne = mesh.num_edges(), nc = mesh.num_cells();
  const int per_edge = k - 1, per_cell = (k - 1) * (k - 2) / 2;
  s.ndofs_ = nv + per_edge * ne + per_cell * nc;
  const int nd = s.element_.ndofs();
  s.cell_dofs_.resize(static_cast<std::size_t>(nd) * nc);
  for (int c = 0; c < nc; ++c) {
    int* out = s.cell_dofs_.data() + static_cast<std::size_t>(c) * nd;
    int pos = 0;
    for (int v = 0; v < 3; ++v) out[pos++] = mesh.cells[c][v];
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.cell_edges[c][le];
      const bool forward = mesh.cell_edge_signs[c][le] > 0;
      for (int i = 0; i < per_edge; ++i) {
        out[pos++] = nv + e * per_edge + (forward ? i : per_edge - 1 - i);
      }
    }
    for (int i = 0; i < per_cell; ++i) out[pos++] = nv + per_edge * ne + c * per_cell + i;
  }
  return s;
}

FunctionSpace FunctionSpace::dg(const Mesh& mesh, int k) {
  if (k < 1) throw std::invalid_argument("FunctionSpace::dg: degree must be >= 1");
  FunctionSpace s(mesh, ReferenceElement::lagrange(k, true));
  const int nd = s.element_.ndofs();
  s.ndofs_ = nd * mesh.num_cells();
  s.cell_dofs_.resize(s.ndofs_);
  for (int i = 0; i < s.ndofs_; ++i) s.cell_dofs_[i] = i;
  return s;
}

FunctionSpace FunctionSpace::argyris(const Mesh& mesh) {
  FunctionSpace s(mesh, ReferenceElement::argyris());
  const int nv = mesh.num_vertices(), nc = mesh.num_cells();
  s.ndofs_ = 6 * nv + mesh.num_edges();
  s.cell_dofs_.resize(21 * static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    int* out = s.cell_dofs_.data() + static_cast<std::size_t>(c) * 21;
    for (int v = 0; v < 3; ++v) {
      for (int j = 0; j < 6; ++j) out[6 * v + j] = 6 * mesh.cells[c][v] + j;
    }
    for (int le = 0; le < 3; ++le) out[18 + le] = 6 * nv + mesh.cell_edges[c][le];
  }
  return s;
}

FunctionSpace FunctionSpace::rt(const Mesh& mesh, int k) {
  FunctionSpace s(mesh, ReferenceElement::raviart_thomas(k));
  const int ne = mesh.num_edges(), nc = mesh.num_cells();
  const int per_edge = k + 1, per_cell = k * (k + 1);
  s.ndofs_ = per_edge * ne + per_cell * nc;
  const int nd = s.element_.ndofs();
  s.cell_dofs_.resize(static_cast<std::size_t>(nd) * nc);
  for (int c = 0; c < nc; ++c) {
    int* out = s.cell_dofs_.data() + static_cast<std::size_t>(c) * nd;
    int pos = 0;
    for (int le = 0; le < 3; ++le) {
      for (int j = 0; j < per_edge; ++j) out[pos++] = mesh.cell_edges[c][le] * per_edge + j;
    }
    for (int i = 0; i < per_cell; ++i) out[pos++] = per_edge * ne + c * per_cell + i;
  }
  return s;
}

void FunctionSpace::edge_closure_dofs(int e, std::vector<int>& dofs,
                                      std::vector<Point>& points) const {
  if (family() != Family::CG) {
    throw std::invalid_argument("edge_closure_dofs: only defined for CG spaces");
  }
  const Mesh& m = *mesh_;
  const int k = element_.degree();
  const auto [lo, hi] = m.edges[e];
  dofs = {lo, hi};
  points = {m.vertices[lo], m.vertices[hi]};
  for (int i = 0; i < k - 1; ++i) {
    dofs.push_back(m.num_vertices() + e * (k - 1) + i);
    const double t = static_cast<double>(i + 1) / k;
    points.push_back(m.vertices[lo] + t * (m.vertices[hi] - m.vertices[lo]));
  }
}

Eigen::VectorXd FunctionSpace::interpolate(const std::function<double(const Point&)>& f) const {
  if (family() == Family::Argyris) {
    throw std::invalid_argument("interpolate: Argyris needs derivative data, use interpolate_jet");
  }
  if (family() == Family::RT) {
    throw std::invalid_argument("interpolate: RT is vector valued, use interpolate_vector");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ndofs_);
  const auto& nodes = element_.nodes();
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(*mesh_, c);
    const auto dofs = cell_dofs(c);
    for (std::size_t i = 0; i < nodes.size(); ++i) out(dofs[i]) = f(g.to_physical(nodes[i]));
  }
  return out;
}

Eigen::VectorXd FunctionSpace::interpolate_jet(
    const std::function<ScalarJet2(const Point&)>& f) const {
  if (family() != Family::Argyris) {
    return interpolate([&f](const Point& x) { return f(x).value; });
  }
  const Mesh& m = *mesh_;
  const double h = m.h;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ndofs_);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const ScalarJet2 j = f(m.vertices[v]);
    out(6 * v) = j.value;
    out(6 * v + 1) = h * j.grad.x();
    out(6 * v + 2) = h * j.grad.y();
    out(6 * v + 3) = h * h * j.hess(0, 0);
    out(6 * v + 4) = h * h * j.hess(0, 1);
    out(6 * v + 5) = h * h * j.hess(1, 1);
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    const ScalarJet2 j = f(m.edge_midpoint(e));
    out(6 * m.num_vertices() + e) = h * m.edge_normal(e).dot(j.grad);
  }
  return out;
}

Eigen::VectorXd FunctionSpace::interpolate_vector(
    const std::function<Eigen::Vector2d(const Point&)>& f) const {
  if (family() != Family::RT) {
    throw std::invalid_argument("interpolate_vector: only defined for RT spaces");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ndofs_);
  const auto& pts = element_.moment_points();
  const int np = static_cast<int>(pts.size());
  Eigen::VectorXd pulled(2 * np);
  for (int c = 0; c < mesh_->num_cells(); ++c) {
    const CellGeometry g = CellGeometry::of(*mesh_, c);
    for (int p = 0; p < np; ++p) {
      // Contravariant Piola pullback: det(J) J^{-1} f(F(xi)).
      const Eigen::Vector2d v = g.det * (g.inverse * f(g.to_physical(pts[p])));
      pulled(p) = v.x();
      pulled(np + p) = v.y();
    }
    const Eigen::VectorXd local = element_.moment_weights() * pulled;
    const std::vector<double> signs = rt_dof_signs(element_, *mesh_, c);
    const auto dofs = cell_dofs(c);
    for (int i = 0; i < element_.ndofs(); ++i) out(dofs[i]) = signs[i] * local(i);
  }
  return out;
}

int DofConstraints::count() const {
  int n = 0;
  for (char f : fixed_) n += f;
  return n;
}

std::vector<int> DofConstraints::fixed_dofs() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (fixed_[i]) out.push_back(i);
  }
  return out;
}

}  // namespace smectic
