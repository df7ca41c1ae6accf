#include "smectic/mesh.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace smectic {

Point Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices[edges[e][0]] + vertices[edges[e][1]]);
}

double Mesh::edge_length(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).norm();
}

Point Mesh::edge_tangent(int e) const {
  return (vertices[edges[e][1]] - vertices[edges[e][0]]).normalized();
}

Point Mesh::edge_normal(int e) const {
  const int c = edge_cells[e][0];
  const int le = local_edge_index(c, e);
  const auto& cv = cells[c];
  const Point& a = vertices[cv[(le + 1) % 3]];
  const Point& b = vertices[cv[(le + 2) % 3]];
  // Counter-clockwise cell: the outward normal is the tangent rotated clockwise.
  const Point t = (b - a).normalized();
  return {t.y(), -t.x()};
}

int Mesh::local_edge_index(int c, int e) const {
  for (int le = 0; le < 3; ++le) {
    if (cell_edges[c][le] == e) return le;
  }
  throw std::invalid_argument("edge " + std::to_string(e) + " is not incident to cell " +
                              std::to_string(c));
}

double Mesh::signed_area(int c) const {
  const Point& a = vertices[cells[c][0]];
  const Point& b = vertices[cells[c][1]];
  const Point& d = vertices[cells[c][2]];
  return 0.5 * ((b.x() - a.x()) * (d.y() - a.y()) - (d.x() - a.x()) * (b.y() - a.y()));
}

Mesh build_structured_mesh(int n) {
  if (n < 1) {
    throw std::invalid_argument("build_structured_mesh: n must be >= 1, got " + std::to_string(n));
  }
  Mesh mesh;
  mesh.n = n;
  mesh.h = 1.0 / static_cast<double>(n);

  const int nv = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(nv) * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) {
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }

  auto vid = [nv](int i, int j) { return j * nv + i; };
  mesh.cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.cells.push_back({v00, v10, v11});
      mesh.cells.push_back({v00, v11, v01});
    }
  }

  const int nc = mesh.num_cells();
  mesh.cell_edges.resize(nc);
  mesh.cell_edge_signs.resize(nc);

  std::unordered_map<std::int64_t, int> edge_lookup;
  edge_lookup.reserve(3 * static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    for (int le = 0; le < 3; ++le) {
      const int a = mesh.cells[c][(le + 1) % 3];
      const int b = mesh.cells[c][(le + 2) % 3];
      const int lo = std::min(a, b), hi = std::max(a, b);
      const std::int64_t key = static_cast<std::int64_t>(lo) * mesh.num_vertices() + hi;
      auto [it, inserted] = edge_lookup.try_emplace(key, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back({lo, hi});
        mesh.edge_cells.push_back({c, -1});
      } else {
        mesh.edge_cells[it->second][1] = c;
      }
      mesh.cell_edges[c][le] = it->second;
      mesh.cell_edge_signs[c][le] = static_cast<std::int8_t>(a < b ? 1 : -1);
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_cells[e][1] < 0) mesh.boundary_edges.push_back(e);
  }
  return mesh;
}

void write_mesh_listing(std::ostream& os, const Mesh& mesh) {
  os << "# structured mesh n=" << mesh.n << " h=" << std::setprecision(17) << mesh.h << '\n';
  os << "vertices " << mesh.num_vertices() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    os << v << ' ' << mesh.vertices[v].x() << ' ' << mesh.vertices[v].y() << '\n';
  }
  os << "cells " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    const auto& ce = mesh.cell_edges[c];
    os << c << ' ' << cv[0] << ' ' << cv[1] << ' ' << cv[2] << " edges " << ce[0] << ' ' << ce[1]
       << ' ' << ce[2] << '\n';
  }
  os << "edges " << mesh.num_edges() << '\n';
  for (int e = 0; e < mesh.num_edges(); ++e) {
    os << e << ' ' << mesh.edges[e][0] << ' ' << mesh.edges[e][1] << " cells "
       << mesh.edge_cells[e][0] << ' ' << mesh.edge_cells[e][1] << '\n';
  }
}

}  // namespace smectic
