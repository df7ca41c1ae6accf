#pragma once

#include "smectic/mesh.hpp"

#include <vector>

namespace smectic {

/// Rule on the reference triangle {(0,0), (1,0), (0,1)}.
struct QuadratureRule {
  int degree = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
};

/// Rule on the unit interval [0, 1].
struct LineRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;

  [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Exact for polynomials of total degree <= `degree` (1..20).
/// Degrees 1 and 2 use the centroid and the 3-point edge-interior rule;
/// higher degrees use a collapsed Gauss-Jacobi x Gauss-Legendre product.
[[nodiscard]] QuadratureRule triangle_quadrature(int degree);

/// Gauss-Legendre rule exact to `degree` on [0, 1].
[[nodiscard]] LineRule line_quadrature(int degree);

/// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1-x)^a (1+x)^b,
/// computed by the Golub-Welsch eigenvalue method.
void gauss_jacobi(int npoints, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace smectic
