#include "smectic/boundary.hpp"

#include <optional>
#include <stdexcept>

namespace smectic {

bool contains(BoundaryUnion u, BoundaryLabel l) {
  switch (u) {
    case BoundaryUnion::Gamma0: return l == BoundaryLabel::G02 || l == BoundaryLabel::G01;
    case BoundaryUnion::Gamma1: return l == BoundaryLabel::G01 || l == BoundaryLabel::G31;
    case BoundaryUnion::Gamma2: return l == BoundaryLabel::G02 || l == BoundaryLabel::G32;
    case BoundaryUnion::Gamma3: return l == BoundaryLabel::G32 || l == BoundaryLabel::G31;
  }
  return false;
}

std::string_view to_string(BoundaryLabel l) {
  switch (l) {
    case BoundaryLabel::G02: return "02";
    case BoundaryLabel::G01: return "01";
    case BoundaryLabel::G32: return "32";
    case BoundaryLabel::G31: return "31";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::South: return "S";
    case Side::East: return "E";
    case Side::North: return "N";
    case Side::West: return "W";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Side parse_side(std::string_view s) {
  if (s == "S" || s == "s") return Side::South;
  if (s == "E" || s == "e") return Side::East;
  if (s == "N" || s == "n") return Side::North;
  if (s == "W" || s == "w") return Side::West;
  throw std::invalid_argument("unknown side '" + std::string(s) + "' (expected S, E, N or W)");
}

BoundaryLabel parse_label(std::string_view s) {
  if (s == "02") return BoundaryLabel::G02;
  if (s == "01") return BoundaryLabel::G01;
  if (s == "32") return BoundaryLabel::G32;
  if (s == "31") return BoundaryLabel::G31;
  throw std::invalid_argument("unknown boundary label '" + std::string(s) +
                              "' (expected 02, 01, 32 or 31)");
}

}  // namespace

BoundarySpec BoundarySpec::parse(std::string_view text) {
  std::array<std::optional<BoundaryLabel>, 4> seen;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("boundary item '" + std::string(item) + "' is not SIDE=LABEL");
    }
    const Side side = parse_side(trim(item.substr(0, eq)));
    auto& slot = seen[static_cast<std::size_t>(side)];
    if (slot) {
      throw std::invalid_argument("side " + std::string(smectic::to_string(side)) +
                                  " assigned twice");
    }
    slot = parse_label(trim(item.substr(eq + 1)));
  }
  BoundarySpec spec;
  for (std::size_t s = 0; s < 4; ++s) {
    if (!seen[s]) {
      throw std::invalid_argument("boundary spec does not label side " +
                                  std::string(smectic::to_string(static_cast<Side>(s))));
    }
    spec.side_label[s] = *seen[s];
  }
  return spec;
}

bool BoundarySpec::all_sides(BoundaryLabel l) const {
  for (auto s : side_label) {
    if (s != l) return false;
  }
  return true;
}

std::string BoundarySpec::to_string() const {
  std::string out;
  for (Side s : {Side::South, Side::North, Side::East, Side::West}) {
    if (!out.empty()) out += ',';
    out += smectic::to_string(s);
    out += '=';
    out += smectic::to_string((*this)[s]);
  }
  return out;
}

BoundaryLabel BoundaryPartition::label(int edge) const {
  if (label_[edge] < 0) throw std::invalid_argument("edge is not on the boundary");
  return static_cast<BoundaryLabel>(label_[edge]);
}

Side BoundaryPartition::side(int edge) const {
  if (side_[edge] < 0) throw std::invalid_argument("edge is not on the boundary");
  return static_cast<Side>(side_[edge]);
}

std::vector<int> BoundaryPartition::edges_with(BoundaryLabel l) const {
  std::vector<int> out;
  for (int e : boundary_edges_) {
    if (label(e) == l) out.push_back(e);
  }
  return out;
}

std::vector<int> BoundaryPartition::edges_in(BoundaryUnion u) const {
  std::vector<int> out;
  for (int e : boundary_edges_) {
    if (contains(u, label(e))) out.push_back(e);
  }
  return out;
}

BoundaryPartition assign_boundary(const Mesh& mesh, const BoundarySpec& spec) {
  BoundaryPartition part;
  part.spec_ = spec;
  part.label_.assign(mesh.num_edges(), -1);
  part.side_.assign(mesh.num_edges(), -1);
  part.boundary_edges_ = mesh.boundary_edges;
  for (int e : mesh.boundary_edges) {
    const Point mid = mesh.edge_midpoint(e);
    Side s;
    if (mid.y() == 0.0) {
      s = Side::South;
    } else if (mid.x() == 1.0) {
      s = Side::East;
    } else if (mid.y() == 1.0) {
      s = Side::North;
    } else if (mid.x() == 0.0) {
      s = Side::West;
    } else {
      throw std::invalid_argument("assign_boundary: mesh is not a unit-square structured mesh");
    }
    part.side_[e] = static_cast<std::int8_t>(s);
    part.label_[e] = static_cast<std::int8_t>(spec[s]);
  }
  return part;
}

}  // namespace smectic
