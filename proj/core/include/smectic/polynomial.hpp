#pragma once

#include "smectic/mesh.hpp"

#include <Eigen/Core>

namespace smectic {

/// Monomials x^a y^b ordered by total degree r = a + b, then by b.
[[nodiscard]] constexpr int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }
[[nodiscard]] constexpr int monomial_index(int px, int py) {
  const int r = px + py;
  return r * (r + 1) / 2 + py;
}

/// Derivative slots use the same ordering: 0 value, 1 dx, 2 dy, 3 dxx, 4 dxy,
/// 5 dyy, 6 dxxx, 7 dxxy, 8 dxyy, 9 dyyy.
namespace deriv {
inline constexpr int V = 0, X = 1, Y = 2, XX = 3, XY = 4, YY = 5, XXX = 6, XXY = 7, XYY = 8,
                     YYY = 9;
}
[[nodiscard]] constexpr int derivative_count(int order) { return monomial_count(order); }
[[nodiscard]] constexpr int derivative_order(int slot) {
  int r = 0;
  while (monomial_count(r) <= slot) ++r;
  return r;
}

/// out(d, j) = derivative slot d of monomial j at p, for slots up to `order`
/// and monomials up to `degree`.
void monomial_derivatives(const Point& p, int degree, int order, Eigen::Ref<Eigen::MatrixXd> out);

/// Same layout for the orthogonal (Dubiner) polynomials P_{a,b} on the
/// reference triangle, a well conditioned basis of the same space.
void dubiner_derivatives(const Point& p, int degree, int order, Eigen::Ref<Eigen::MatrixXd> out);

/// For an affine map x = x0 + J xi with K = J^{-1}, the (r+1) x (r+1) matrix
/// taking reference derivatives of order r to physical ones of the same order.
[[nodiscard]] Eigen::MatrixXd derivative_transform(const Eigen::Matrix2d& K, int order);

}  // namespace smectic
