#include "smectic/mesh.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

using smectic::build_structured_mesh;

TEST(Mesh, SingleSquare) {
  const auto m = build_structured_mesh(1);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_cells(), 2);
  EXPECT_EQ(m.num_edges(), 5);
}

TEST(Mesh, TwoByTwo) {
  const auto m = build_structured_mesh(2);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_cells(), 8);
  EXPECT_EQ(m.num_edges(), 16);
}

TEST(Mesh, SixtyFour) {
  const auto m = build_structured_mesh(64);
  EXPECT_EQ(m.num_vertices(), 4225);
  EXPECT_EQ(m.num_cells(), 8192);
  EXPECT_EQ(m.num_edges(), 12416);
  EXPECT_EQ(6 * m.num_vertices() + m.num_edges(), 37766);
}

TEST(Mesh, RejectsZero) {
  EXPECT_THROW((void)build_structured_mesh(0), std::invalid_argument);
  EXPECT_THROW((void)build_structured_mesh(-3), std::invalid_argument);
}

TEST(Mesh, InvariantsUpTo32) {
  for (int n = 1; n <= 32; ++n) {
    const auto m = build_structured_mesh(n);
    const int v = m.num_vertices(), e = m.num_edges(), c = m.num_cells();
    ASSERT_EQ(v - e + (c + 1), 2) << n;
    ASSERT_EQ(v, (n + 1) * (n + 1));
    ASSERT_EQ(c, 2 * n * n);
    ASSERT_EQ(static_cast<int>(m.boundary_edges.size()), 4 * n);
    for (int k = 0; k < c; ++k) {
      ASSERT_NEAR(m.signed_area(k), m.h * m.h / 2, 1e-15) << n << " cell " << k;
    }
    int boundary = 0;
    for (int k = 0; k < e; ++k) {
      ASSERT_LT(m.edges[k][0], m.edges[k][1]);
      ASSERT_GE(m.edge_cells[k][0], 0);
      if (m.is_boundary_edge(k)) {
        ++boundary;
      } else {
        ASSERT_LT(m.edge_cells[k][0], m.edge_cells[k][1]);
      }
    }
    ASSERT_EQ(boundary, 4 * n);
    ASSERT_EQ(e - boundary, e - 4 * n);
  }
}

TEST(Mesh, EdgeIncidenceMatchesCells) {
  const auto m = build_structured_mesh(5);
  std::vector<int> count(m.num_edges(), 0);
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int l = 0; l < 3; ++l) {
      const int e = m.cell_edges[c][l];
      ++count[e];
      EXPECT_EQ(m.local_edge_index(c, e), l);
      const int a = m.cells[c][(l + 1) % 3], b = m.cells[c][(l + 2) % 3];
      const int sign = m.edges[e][0] == a && m.edges[e][1] == b ? 1 : -1;
      EXPECT_EQ(m.cell_edge_signs[c][l], sign);
    }
  }
  for (int e = 0; e < m.num_edges(); ++e) EXPECT_EQ(count[e], m.is_boundary_edge(e) ? 1 : 2);
}

TEST(Mesh, DiagonalRunsBottomLeftToTopRight) {
  const auto m = build_structured_mesh(4);
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto d = m.vertices[m.edges[e][1]] - m.vertices[m.edges[e][0]];
    if (std::abs(d.x()) > 0 && std::abs(d.y()) > 0) {
      EXPECT_GT(d.x() * d.y(), 0.0);
    }
  }
}

TEST(Mesh, BoundaryNormalsPointOutward) {
  const auto m = build_structured_mesh(6);
  for (int e : m.boundary_edges) {
    const auto mid = m.edge_midpoint(e);
    const auto nrm = m.edge_normal(e);
    EXPECT_GT((mid - smectic::Point(0.5, 0.5)).dot(nrm), 0.0);
    EXPECT_NEAR(m.edge_length(e), m.h, 1e-15);
  }
}

TEST(Mesh, ExactCoordinates) {
  const auto m = build_structured_mesh(7);
  for (int j = 0; j <= 7; ++j) {
    for (int i = 0; i <= 7; ++i) {
      const auto& p = m.vertices[j * 8 + i];
      EXPECT_EQ(p.x(), static_cast<double>(i) / 7);
      EXPECT_EQ(p.y(), static_cast<double>(j) / 7);
    }
  }
}

TEST(Mesh, Deterministic) {
  const auto a = build_structured_mesh(9), b = build_structured_mesh(9);
  EXPECT_EQ(a.vertices, b.vertices);
  EXPECT_EQ(a.cells, b.cells);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.cell_edges, b.cell_edges);
  EXPECT_EQ(a.edge_cells, b.edge_cells);
  std::ostringstream sa, sb;
  write_mesh_listing(sa, a);
  write_mesh_listing(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}
