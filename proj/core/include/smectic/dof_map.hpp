#pragma once

#include "smectic/element.hpp"
#include "smectic/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

namespace smectic {

/// Value, gradient and Hessian of a scalar function at a point.
struct ScalarJet2 {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

/// A finite-element space on a mesh: reference element plus global DOF map.
///
/// Global numbering is vertex DOFs, then edge DOFs (edge by edge), then
/// interior DOFs (cell by cell). Argyris vertex DOFs are value, h*dx, h*dy,
/// h^2*dxx, h^2*dxy, h^2*dyy; its edge DOF is h times the derivative along
/// the global edge normal at the midpoint. RT edge DOFs are flux moments
/// along the global normal with the Legendre parameter running from the
/// lower to the higher vertex. The mesh must outlive the space.
class FunctionSpace {
 public:
  [[nodiscard]] static FunctionSpace cg(const Mesh& mesh, int k);
  [[nodiscard]] static FunctionSpace dg(const Mesh& mesh, int k);
  [[nodiscard]] static FunctionSpace argyris(const Mesh& mesh);
  /// RT space with divergence onto DG_k.
  [[nodiscard]] static FunctionSpace rt(const Mesh& mesh, int k);

  /// DOF count from entity counts only, without building the map.
  [[nodiscard]] static long long count(Family family, int k, long long vertices, long long edges,
                                       long long cells);

  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const ReferenceElement& element() const { return element_; }
  [[nodiscard]] Family family() const { return element_.family(); }
  [[nodiscard]] int num_dofs() const { return ndofs_; }
  [[nodiscard]] int dofs_per_cell() const { return element_.ndofs(); }
  [[nodiscard]] std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * element_.ndofs(),
            static_cast<std::size_t>(element_.ndofs())};
  }

  /// Physical basis on `cell` at reference points, columns in cell_dofs order.
  [[nodiscard]] BasisValues evaluate(int cell, const std::vector<Point>& ref_points,
                                     int order) const {
    return tabulate_physical(element_, *mesh_, cell, ref_points, order);
  }

  /// CG only: global DOFs on the closed edge `e` and their coordinates.
  void edge_closure_dofs(int e, std::vector<int>& dofs, std::vector<Point>& points) const;

  /// Interpolants. Lagrange: nodal values. Argyris: DOF functionals applied
  /// to the jet. RT: moments of the Piola pullback.
  [[nodiscard]] Eigen::VectorXd interpolate(const std::function<double(const Point&)>& f) const;
  [[nodiscard]] Eigen::VectorXd interpolate_jet(
      const std::function<ScalarJet2(const Point&)>& f) const;
  [[nodiscard]] Eigen::VectorXd interpolate_vector(
      const std::function<Eigen::Vector2d(const Point&)>& f) const;

 private:
  FunctionSpace(const Mesh& mesh, ReferenceElement element);

  const Mesh* mesh_ = nullptr;
  ReferenceElement element_;
  int ndofs_ = 0;
  std::vector<int> cell_dofs_;
};

/// Strongly imposed DOF values, indexed by global DOF.
class DofConstraints {
 public:
  DofConstraints() = default;
  explicit DofConstraints(int ndofs) : fixed_(ndofs, 0), values_(ndofs, 0.0) {}

  void set(int dof, double value) {
    fixed_[dof] = 1;
    values_[dof] = value;
  }
  [[nodiscard]] bool is_fixed(int dof) const { return fixed_[dof] != 0; }
  [[nodiscard]] double value(int dof) const { return values_[dof]; }
  [[nodiscard]] int size() const { return static_cast<int>(fixed_.size()); }
  [[nodiscard]] int count() const;
  [[nodiscard]] std::vector<int> fixed_dofs() const;

 private:
  std::vector<char> fixed_;
  std::vector<double> values_;
};

}  // namespace smectic
