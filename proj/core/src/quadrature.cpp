#include "smectic/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace smectic {

void gauss_jacobi(int npoints, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi: need at least one point");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int i = 0; i < npoints; ++i) {
    const double k = i;
    const double s = 2.0 * k + a + b;
    // Diagonal of the Jacobi matrix; the k = 0 term is written separately to
    // avoid 0/0 when a + b = 0.
    jac(i, i) = i == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (i + 1 < npoints) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + a + b;
      const double num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
      const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
      jac(i, i + 1) = jac(i + 1, i) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  x.resize(npoints);
  w.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    x[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

LineRule line_quadrature(int degree) {
  if (degree < 0 || degree > 2 * kMaxQuadratureDegree + 1) {
    throw std::invalid_argument("line_quadrature: unsupported degree " + std::to_string(degree));
  }
  const int m = std::max(1, (degree + 2) / 2);
  std::vector<double> x, w;
  gauss_jacobi(m, 0.0, 0.0, x, w);
  LineRule rule;
  rule.degree = 2 * m - 1;
  for (int i = 0; i < m; ++i) {
    rule.points.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

QuadratureRule triangle_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: negative degree");
  if (degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("triangle_quadrature: degree " + std::to_string(degree) +
                                " exceeds the supported maximum of 20");
  }
  QuadratureRule rule;
  if (degree <= 1) {
    rule.degree = 1;
    rule.points = {Point(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    return rule;
  }
  if (degree == 2) {
    rule.degree = 2;
    rule.points = {Point(1.0 / 6.0, 1.0 / 6.0), Point(2.0 / 3.0, 1.0 / 6.0),
                   Point(1.0 / 6.0, 2.0 / 3.0)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }

  // x = s (1 - t), y = t with Jacobian (1 - t); the t direction absorbs the
  // Jacobian into a Gauss-Jacobi (1, 0) weight.
  const int m = (degree + 2) / 2;
  std::vector<double> gx, gw, jx, jw;
  gauss_jacobi(m, 0.0, 0.0, gx, gw);
  gauss_jacobi(m, 1.0, 0.0, jx, jw);
  rule.degree = 2 * m - 1;
  rule.points.reserve(static_cast<std::size_t>(m) * m);
  rule.weights.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    const double t = 0.5 * (jx[j] + 1.0);
    for (int i = 0; i < m; ++i) {
      const double s = 0.5 * (gx[i] + 1.0);
      rule.points.emplace_back(s * (1.0 - t), t);
      // 1/2 from the s map, 1/4 from the t map including (1 - t) = (1 - x)/2.
      rule.weights.push_back(0.125 * gw[i] * jw[j]);
    }
  }
  return rule;
}

}  // namespace smectic
