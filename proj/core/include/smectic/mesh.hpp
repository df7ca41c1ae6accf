#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace smectic {

using Point = Eigen::Vector2d;

/// Structured triangulation of the unit square.
///
/// Every one of the n x n sub-squares is cut along its bottom-left to
/// top-right diagonal. Vertices are numbered lexicographically (x fastest),
/// cells row-major with the lower triangle of each square first. Cells are
/// counter-clockwise. Local edge `e` of a cell is opposite local vertex `e`
/// and runs from local vertex (e+1)%3 to (e+2)%3.
///
/// Global edges are oriented from the lower to the higher vertex index.
/// The edge normal points out of the lower-indexed incident cell, which is
/// the outward normal on the boundary.
struct Mesh {
  int n = 0;
  double h = 0.0;

  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;  // lower vertex first

  std::vector<std::array<int, 3>> cell_edges;
  /// +1 when the local edge direction agrees with the global orientation.
  std::vector<std::array<std::int8_t, 3>> cell_edge_signs;
  /// Incident cells, lower index first; second entry is -1 on the boundary.
  std::vector<std::array<int, 2>> edge_cells;
  std::vector<int> boundary_edges;

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices.size()); }
  [[nodiscard]] int num_cells() const { return static_cast<int>(cells.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges.size()); }

  [[nodiscard]] bool is_boundary_edge(int e) const { return edge_cells[e][1] < 0; }
  [[nodiscard]] Point edge_midpoint(int e) const;
  [[nodiscard]] double edge_length(int e) const;
  /// Unit tangent from the lower to the higher vertex.
  [[nodiscard]] Point edge_tangent(int e) const;
  /// Unit normal out of edge_cells[e][0].
  [[nodiscard]] Point edge_normal(int e) const;
  /// Local index of edge `e` inside cell `c`; throws if not incident.
  [[nodiscard]] int local_edge_index(int c, int e) const;
  [[nodiscard]] double signed_area(int c) const;
};

/// Throws std::invalid_argument for n < 1.
[[nodiscard]] Mesh build_structured_mesh(int n);

/// Plain-text listing of vertices, cells and edges for debugging.
void write_mesh_listing(std::ostream& os, const Mesh& mesh);

}  // namespace smectic
