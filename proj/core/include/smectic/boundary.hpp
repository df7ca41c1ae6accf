#pragma once

#include "smectic/mesh.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smectic {

enum class Side : std::uint8_t { South = 0, East = 1, North = 2, West = 3 };

/// The four disjoint boundary pieces, named by the orders of the two
/// conditions imposed there (0: u, 1: grad u, 2: Hessian flux, 3: third-order flux).
enum class BoundaryLabel : std::uint8_t { G02 = 0, G01 = 1, G32 = 2, G31 = 3 };

/// Unions of the labelled pieces.
enum class BoundaryUnion : std::uint8_t { Gamma0, Gamma1, Gamma2, Gamma3 };

[[nodiscard]] bool contains(BoundaryUnion u, BoundaryLabel l);
[[nodiscard]] std::string_view to_string(BoundaryLabel l);
[[nodiscard]] std::string_view to_string(Side s);

/// Side -> label assignment for the unit square.
struct BoundarySpec {
  std::array<BoundaryLabel, 4> side_label{BoundaryLabel::G02, BoundaryLabel::G32,
                                          BoundaryLabel::G01, BoundaryLabel::G31};

  /// South = G02, North = G01, East = G32, West = G31.
  [[nodiscard]] static BoundarySpec defaults() { return {}; }
  [[nodiscard]] static BoundarySpec uniform(BoundaryLabel l) { return {{l, l, l, l}}; }

  /// Parses "S=02,N=01,E=32,W=31". Every side must appear exactly once.
  [[nodiscard]] static BoundarySpec parse(std::string_view text);

  [[nodiscard]] BoundaryLabel operator[](Side s) const {
    return side_label[static_cast<std::size_t>(s)];
  }
  [[nodiscard]] bool all_sides(BoundaryLabel l) const;
  [[nodiscard]] std::string to_string() const;
};

/// Label of every boundary edge of a structured unit-square mesh.
class BoundaryPartition {
 public:
  BoundaryPartition() = default;

  [[nodiscard]] const BoundarySpec& spec() const { return spec_; }
  [[nodiscard]] bool is_boundary(int edge) const { return label_[edge] >= 0; }
  [[nodiscard]] BoundaryLabel label(int edge) const;
  [[nodiscard]] Side side(int edge) const;
  [[nodiscard]] bool in(BoundaryUnion u, int edge) const {
    return is_boundary(edge) && contains(u, label(edge));
  }
  [[nodiscard]] std::vector<int> edges_with(BoundaryLabel l) const;
  [[nodiscard]] std::vector<int> edges_in(BoundaryUnion u) const;

 private:
  friend BoundaryPartition assign_boundary(const Mesh& mesh, const BoundarySpec& spec);

  BoundarySpec spec_;
  std::vector<std::int8_t> label_;  // -1 for interior edges
  std::vector<std::int8_t> side_;
  std::vector<int> boundary_edges_;
};

/// Tags each boundary edge by the side containing its midpoint.
[[nodiscard]] BoundaryPartition assign_boundary(const Mesh& mesh, const BoundarySpec& spec);

}  // namespace smectic
