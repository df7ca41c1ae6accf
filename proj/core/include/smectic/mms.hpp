#pragma once

#include "smectic/dof_map.hpp"
#include "smectic/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

namespace smectic {

/// Derivatives of a scalar field through order four at one point.
/// third = (xxx, xxy, xyy, yyy), fourth = (xxxx, xxxy, xxyy, xyyy, yyyy).
struct Jet {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
  std::array<double, 4> third{};
  std::array<double, 5> fourth{};

  [[nodiscard]] double laplacian() const { return hess(0, 0) + hess(1, 1); }
  /// grad(laplacian u).
  [[nodiscard]] Eigen::Vector2d grad_laplacian() const {
    return {third[0] + third[2], third[1] + third[3]};
  }
  [[nodiscard]] double bilaplacian() const { return fourth[0] + 2.0 * fourth[2] + fourth[4]; }
  [[nodiscard]] ScalarJet2 truncate() const { return {value, grad, hess}; }
};

/// Symmetric 2x2 coefficient field with the derivative pieces the forcing needs.
struct TensorField {
  std::function<Eigen::Matrix2d(const Point&)> value;
  /// (div T)_i = sum_j d_j T_ij
  std::function<Eigen::Vector2d(const Point&)> divergence;
  /// sum_ij d_i d_j T_ij
  std::function<double(const Point&)> divdiv;
  double mu1 = 0.0;  // bound on T:T
  double mu2 = 0.0;  // bound on grad T : grad T

  [[nodiscard]] static TensorField constant(const Eigen::Matrix2d& t);
};

/// Coefficients of the operator: B (Hessian weight), q (wavenumber), m.
struct Coefficients {
  double B = 1.0;
  double q = 1.0;
  double m = 1.0;
};

struct ManufacturedSolution {
  std::string name;
  Coefficients coeffs;
  TensorField tensor;
  std::function<Jet(const Point&)> jet;

  [[nodiscard]] double u(const Point& x) const { return jet(x).value; }
  /// H(u) = grad grad u + q^2 T u.
  [[nodiscard]] Eigen::Matrix2d hessian_flux(const Point& x) const;
  /// div H(u) = grad lap u + q^2 (T grad u + (div T) u).
  [[nodiscard]] Eigen::Vector2d divergence_flux(const Point& x) const;
};

/// u = sin(q nu . x) with T = nu (x) nu. Rejects |nu| != 1 beyond 1e-14.
[[nodiscard]] ManufacturedSolution plane_wave(const Coefficients& c, const Eigen::Vector2d& nu);

/// u = 100 sin(2 pi x + 3 pi y) (x y (1-x)(1-y))^3 with T = nu (x) nu.
[[nodiscard]] ManufacturedSolution bump_polynomial(
    const Coefficients& c, const Eigen::Vector2d& nu = Eigen::Vector2d(0.6, 0.8));

/// u = sum c x^a y^b over (a, b, c) terms, with a constant symmetric T.
[[nodiscard]] ManufacturedSolution polynomial_solution(
    const Coefficients& c, std::vector<std::tuple<int, int, double>> terms,
    const Eigen::Matrix2d& tensor);

/// Right-hand side of the strong form
/// B div div H(u) + B q^2 T:grad grad u + (B q^4 T:T + m) u.
[[nodiscard]] double forcing(const ManufacturedSolution& ms, const Point& x);

/// Boundary data of the manufactured solution. The outward unit normal is
/// passed explicitly.
struct BoundaryData {
  std::function<double(const Point&)> g0;                                    // u
  std::function<Eigen::Vector2d(const Point&)> g1;                           // grad u
  std::function<Eigen::Vector2d(const Point&, const Eigen::Vector2d&)> G2;  // H n
  std::function<double(const Point&, const Eigen::Vector2d&)> G3;           // (div H) . n
};

[[nodiscard]] BoundaryData boundary_data(const ManufacturedSolution& ms);

}  // namespace smectic
