#pragma once

#include "smectic/mesh.hpp"
#include "smectic/polynomial.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace smectic {

enum class Family { CG, DG, Argyris, RT };

[[nodiscard]] std::string to_string(Family f);

/// Affine map from the reference triangle {(0,0), (1,0), (0,1)} to a mesh cell.
struct CellGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;  // K = J^{-1}
  double det = 0.0;

  [[nodiscard]] static CellGeometry of(const Mesh& mesh, int cell);
  [[nodiscard]] Point to_physical(const Point& xi) const { return origin + jacobian * xi; }
  [[nodiscard]] Point to_reference(const Point& x) const { return inverse * (x - origin); }
};

/// Basis values at a set of points. `table(c, d)` is (points x dofs) for
/// value component c and derivative slot d (see polynomial.hpp).
struct BasisValues {
  int ndofs = 0;
  int npoints = 0;
  int value_size = 1;
  int order = 0;
  std::vector<Eigen::MatrixXd> data;
  Eigen::MatrixXd divergence;  // vector-valued families only

  [[nodiscard]] const Eigen::MatrixXd& operator()(int comp, int slot) const {
    return data[comp * derivative_count(order) + slot];
  }
  [[nodiscard]] Eigen::MatrixXd& operator()(int comp, int slot) {
    return data[comp * derivative_count(order) + slot];
  }
};

/// A finite element on the reference triangle, stored as monomial
/// coefficients. Local DOFs are ordered vertices, then edges, then interior;
/// local edge e is opposite vertex e and runs from vertex (e+1)%3 to (e+2)%3.
class ReferenceElement {
 public:
  /// Equispaced Lagrange element of degree k >= 1. With `discontinuous` all
  /// DOFs are owned by the cell interior.
  [[nodiscard]] static ReferenceElement lagrange(int k, bool discontinuous = false);
  /// Quintic Argyris: per vertex value, dx, dy, dxx, dxy, dyy; per edge the
  /// outward normal derivative at the midpoint.
  [[nodiscard]] static ReferenceElement argyris();
  /// Raviart-Thomas space P_k^2 + x P_k whose divergence is onto P_k.
  /// Edge DOFs are flux moments against shifted Legendre polynomials in the
  /// local edge parameter; interior DOFs are moments against e_c x^a y^b,
  /// a + b <= k - 1.
  [[nodiscard]] static ReferenceElement raviart_thomas(int k);

  [[nodiscard]] Family family() const { return family_; }
  /// Degree label: Lagrange degree, 5 for Argyris, divergence degree for RT.
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int polynomial_degree() const { return poly_degree_; }
  [[nodiscard]] int value_size() const { return static_cast<int>(coeffs_.size()); }
  [[nodiscard]] int ndofs() const { return static_cast<int>(coeffs_[0].rows()); }
  [[nodiscard]] int dofs_per_vertex() const { return entity_dofs_[0]; }
  [[nodiscard]] int dofs_per_edge() const { return entity_dofs_[1]; }
  [[nodiscard]] int dofs_per_interior() const { return entity_dofs_[2]; }
  /// Lagrange only: interpolation nodes in local DOF order.
  [[nodiscard]] const std::vector<Point>& nodes() const { return nodes_; }
  /// Coefficients of component c, (ndofs x monomials), in monomials or, when
  /// `orthogonal_basis()`, in the orthogonal triangle polynomials.
  [[nodiscard]] const Eigen::MatrixXd& coefficients(int comp) const { return coeffs_[comp]; }
  [[nodiscard]] bool orthogonal_basis() const { return orthogonal_; }

  /// Reference-coordinate tabulation through derivative order 0..3.
  [[nodiscard]] BasisValues tabulate(const std::vector<Point>& points, int order) const;

  /// Applies the local DOF functionals to a reference-coordinate function
  /// given by its tabulation at `dof_points()` (Lagrange and RT only).
  [[nodiscard]] const std::vector<Point>& moment_points() const { return moment_points_; }
  /// Rows: DOFs, columns: (component, moment point) pairs, component-major.
  [[nodiscard]] const Eigen::MatrixXd& moment_weights() const { return moment_weights_; }

 private:
  Family family_ = Family::CG;
  int degree_ = 0;
  int poly_degree_ = 0;
  std::array<int, 3> entity_dofs_{};
  std::vector<Eigen::MatrixXd> coeffs_;
  bool orthogonal_ = false;  // coefficients refer to the orthogonal polynomials
  std::vector<Point> nodes_;
  std::vector<Point> moment_points_;
  Eigen::MatrixXd moment_weights_;
};

/// Shifted Legendre polynomial P_j(2s - 1) on [0, 1].
[[nodiscard]] double shifted_legendre(int j, double s);

/// Reference-triangle vertices.
[[nodiscard]] const std::array<Point, 3>& reference_vertices();

/// Physical tabulation on `cell` at reference points. Lagrange bases are
/// composed with the inverse map, Argyris bases additionally transformed so
/// that their DOFs are the global ones (derivatives scaled by h, edge DOF
/// along the global edge normal), and RT bases Piola mapped and signed to
/// the global edge orientation. Orders above 3 are rejected; RT supports
/// order 0 only (values and divergence).
[[nodiscard]] BasisValues tabulate_physical(const ReferenceElement& element, const Mesh& mesh,
                                            int cell, const std::vector<Point>& ref_points,
                                            int order);

/// Argyris: M with physical basis_i = sum_j M(i, j) (reference basis_j o F^{-1}).
[[nodiscard]] Eigen::MatrixXd argyris_transformation(const ReferenceElement& element,
                                                     const Mesh& mesh, int cell);

/// RT: sign relating local to global DOFs on `cell` (+1 for interior DOFs).
[[nodiscard]] std::vector<double> rt_dof_signs(const ReferenceElement& element, const Mesh& mesh,
                                               int cell);

}  // namespace smectic
