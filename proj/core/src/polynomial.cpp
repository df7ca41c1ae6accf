#include "smectic/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace smectic {

namespace {

// d^k/dt^k t^p at t.
double power_derivative(double t, int p, int k) {
  if (k > p) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(p - i);
  const int e = p - k;
  double v = 1.0;
  for (int i = 0; i < e; ++i) v *= t;
  return c * v;
}

// Derivatives D^(s,t) g for s + t <= 2 of a polynomial factor of degree <= 2,
// indexed by derivative slot.
using Factor = std::array<double, 6>;

// Accumulates `scale` * D^(i,j) (g P) into out(slot(i,j), target) by Leibniz.
void add_product(Eigen::Ref<Eigen::MatrixXd> out, int order, const Factor& g, int source,
                 int target, double scale) {
  static constexpr int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int r = order; r >= 0; --r) {
    for (int j = 0; j <= r; ++j) {
      const int i = r - j;
      double sum = 0.0;
      for (int s = 0; s <= std::min(i, 2); ++s) {
        for (int t = 0; t <= std::min(j, 2 - s); ++t) {
          const double dg = g[monomial_index(s, t)];
          if (dg == 0.0) continue;
          sum += binom[i][s] * binom[j][t] * dg * out(monomial_index(i - s, j - t), source);
        }
      }
      out(monomial_index(i, j), target) += scale * sum;
    }
  }
}

}  // namespace

void dubiner_derivatives(const Point& pt, int degree, int order, Eigen::Ref<Eigen::MatrixXd> out) {
  const double x = pt.x(), y = pt.y();
  out.topLeftCorner(derivative_count(order), monomial_count(degree)).setZero();
  out(0, 0) = 1.0;
  // P_{p,0} = a (2x + y - 1) P_{p-1,0} - (a - 1) (1 - y)^2 P_{p-2,0}, a = (2p - 1) / p.
  const Factor linear{2.0 * x + y - 1.0, 2.0, 1.0, 0.0, 0.0, 0.0};
  const Factor square{(1.0 - y) * (1.0 - y), 0.0, -2.0 * (1.0 - y), 0.0, 0.0, 2.0};
  for (int p = 1; p <= degree; ++p) {
    const double a = (2.0 * p - 1.0) / p;
    add_product(out, order, linear, monomial_index(p - 1, 0), monomial_index(p, 0), a);
    if (p > 1) add_product(out, order, square, monomial_index(p - 2, 0), monomial_index(p, 0), 1.0 - a);
  }
  // Jacobi recurrence in y with weight exponent 2p + 1.
  for (int p = 0; p < degree; ++p) {
    const Factor first{(3.0 + 2.0 * p) * y - 1.0, 0.0, 3.0 + 2.0 * p, 0.0, 0.0, 0.0};
    add_product(out, order, first, monomial_index(p, 0), monomial_index(p, 1), 1.0);
    const double al = 2.0 * p + 1.0;
    for (int q = 1; q + p < degree; ++q) {
      const double a1 = (al + 2 * q + 1) * (al + 2 * q + 2) / (2.0 * (q + 1) * (al + q + 1));
      const double a2 = al * al * (al + 2 * q + 1) / (2.0 * (q + 1) * (al + q + 1) * (al + 2 * q));
      const double a3 = q * (al + q) * (al + 2 * q + 2) / ((q + 1.0) * (al + q + 1) * (al + 2 * q));
      const Factor step{a1 * (2.0 * y - 1.0) + a2, 0.0, 2.0 * a1, 0.0, 0.0, 0.0};
      add_product(out, order, step, monomial_index(p, q), monomial_index(p, q + 1), 1.0);
      const Factor constant{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
      add_product(out, order, constant, monomial_index(p, q - 1), monomial_index(p, q + 1), -a3);
    }
  }
}

void monomial_derivatives(const Point& p, int degree, int order, Eigen::Ref<Eigen::MatrixXd> out) {
  for (int r = 0; r <= order; ++r) {
    for (int dy = 0; dy <= r; ++dy) {
      const int dx = r - dy;
      const int slot = monomial_index(dx, dy);
      for (int s = 0; s <= degree; ++s) {
        for (int py = 0; py <= s; ++py) {
          const int px = s - py;
          out(slot, monomial_index(px, py)) =
              power_derivative(p.x(), px, dx) * power_derivative(p.y(), py, dy);
        }
      }
    }
  }
}

Eigen::MatrixXd derivative_transform(const Eigen::Matrix2d& K, int order) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(order + 1, order + 1);
  // d/dx_i = sum_a K(a, i) d/dxi_a, so each physical factor is a linear form in
  // the reference partials; expand the product and collect by dy power.
  for (int dy = 0; dy <= order; ++dy) {
    const int dx = order - dy;
    Eigen::VectorXd poly = Eigen::VectorXd::Zero(order + 1);
    poly(0) = 1.0;
    int deg = 0;
    auto multiply = [&](int axis) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(order + 1);
      for (int j = 0; j <= deg; ++j) {
        next(j) += poly(j) * K(0, axis);
        next(j + 1) += poly(j) * K(1, axis);
      }
      poly = next;
      ++deg;
    };
    for (int i = 0; i < dx; ++i) multiply(0);
    for (int i = 0; i < dy; ++i) multiply(1);
    R.row(dy) = poly.transpose();
  }
  return R;
}

}  // namespace smectic
