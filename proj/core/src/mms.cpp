#include "smectic/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smectic {

namespace {

// Builds a jet from a partial-derivative oracle d(a, b) = dx^a dy^b u.
template <class Partial>
Jet make_jet(Partial&& d) {
  Jet j;
  j.value = d(0, 0);
  j.grad = {d(1, 0), d(0, 1)};
  j.hess << d(2, 0), d(1, 1), d(1, 1), d(0, 2);
  for (int b = 0; b <= 3; ++b) j.third[b] = d(3 - b, b);
  for (int b = 0; b <= 4; ++b) j.fourth[b] = d(4 - b, b);
  return j;
}

// k-th derivative of sin.
double sin_derivative(double t, int k) {
  switch (k % 4) {
    case 0: return std::sin(t);
    case 1: return std::cos(t);
    case 2: return -std::sin(t);
    default: return -std::cos(t);
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// k-th derivative of (t - t^2)^3 = t^3 - 3 t^4 + 3 t^5 - t^6.
double cubic_bump_derivative(double t, int k) {
  static constexpr std::array<std::pair<int, double>, 4> terms{
      {{3, 1.0}, {4, -3.0}, {5, 3.0}, {6, -1.0}}};
  double sum = 0.0;
  for (auto [p, c] : terms) {
    if (k > p) continue;
    double f = c;
    for (int i = 0; i < k; ++i) f *= p - i;
    sum += f * std::pow(t, p - k);
  }
  return sum;
}

Eigen::Matrix2d director_tensor(const Eigen::Vector2d& nu) {
  if (std::abs(nu.norm() - 1.0) > 1e-14) {
    throw std::invalid_argument("director must be a unit vector");
  }
  return nu * nu.transpose();
}

}  // namespace

TensorField TensorField::constant(const Eigen::Matrix2d& t) {
  if ((t - t.transpose()).norm() != 0.0) {
    throw std::invalid_argument("TensorField::constant: tensor must be symmetric");
  }
  TensorField f;
  f.value = [t](const Point&) { return t; };
  f.divergence = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  f.divdiv = [](const Point&) { return 0.0; };
  f.mu1 = t.squaredNorm();
  f.mu2 = 0.0;
  return f;
}

Eigen::Matrix2d ManufacturedSolution::hessian_flux(const Point& x) const {
  const Jet j = jet(x);
  const double q2 = coeffs.q * coeffs.q;
  return j.hess + q2 * tensor.value(x) * j.value;
}

Eigen::Vector2d ManufacturedSolution::divergence_flux(const Point& x) const {
  const Jet j = jet(x);
  const double q2 = coeffs.q * coeffs.q;
  return j.grad_laplacian() + q2 * (tensor.value(x) * j.grad + tensor.divergence(x) * j.value);
}

ManufacturedSolution plane_wave(const Coefficients& c, const Eigen::Vector2d& nu) {
  ManufacturedSolution ms;
  ms.name = "planewave";
  ms.coeffs = c;
  ms.tensor = TensorField::constant(director_tensor(nu));
  ms.tensor.mu1 = 1.0;
  const double q = c.q;
  ms.jet = [q, nu](const Point& x) {
    const double theta = q * nu.dot(x);
    return make_jet([&](int a, int b) {
      return std::pow(q, a + b) * std::pow(nu.x(), a) * std::pow(nu.y(), b) *
             sin_derivative(theta, a + b);
    });
  };
  return ms;
}

ManufacturedSolution bump_polynomial(const Coefficients& c, const Eigen::Vector2d& nu) {
  ManufacturedSolution ms;
  ms.name = "bump";
  ms.coeffs = c;
  ms.tensor = TensorField::constant(director_tensor(nu));
  ms.tensor.mu1 = 1.0;
  ms.jet = [](const Point& x) {
    constexpr double kx = 2.0 * std::numbers::pi, ky = 3.0 * std::numbers::pi;
    const double theta = kx * x.x() + ky * x.y();
    std::array<double, 5> px{}, qy{};
    for (int k = 0; k <= 4; ++k) {
      px[k] = cubic_bump_derivative(x.x(), k);
      qy[k] = cubic_bump_derivative(x.y(), k);
    }
    return make_jet([&](int a, int b) {
      double sum = 0.0;
      for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
          const double s = std::pow(kx, a - i) * std::pow(ky, b - j) *
                           sin_derivative(theta, a - i + b - j);
          sum += binomial(a, i) * binomial(b, j) * s * px[i] * qy[j];
        }
      }
      return 100.0 * sum;
    });
  };
  return ms;
}

ManufacturedSolution polynomial_solution(const Coefficients& c,
                                         std::vector<std::tuple<int, int, double>> terms,
                                         const Eigen::Matrix2d& tensor) {
  ManufacturedSolution ms;
  ms.name = "polynomial";
  ms.coeffs = c;
  ms.tensor = TensorField::constant(tensor);
  ms.jet = [terms = std::move(terms)](const Point& x) {
    return make_jet([&](int a, int b) {
      double sum = 0.0;
      for (const auto& [pa, pb, coef] : terms) {
        if (a > pa || b > pb) continue;
        double f = coef;
        for (int i = 0; i < a; ++i) f *= pa - i;
        for (int i = 0; i < b; ++i) f *= pb - i;
        sum += f * std::pow(x.x(), pa - a) * std::pow(x.y(), pb - b);
      }
      return sum;
    });
  };
  return ms;
}

double forcing(const ManufacturedSolution& ms, const Point& x) {
  const Jet j = ms.jet(x);
  const auto [B, q, m] = ms.coeffs;
  const double q2 = q * q;
  const Eigen::Matrix2d t = ms.tensor.value(x);
  const double t_hess = (t.array() * j.hess.array()).sum();
  const double divdiv_h = j.bilaplacian() +
                          q2 * (t_hess + 2.0 * ms.tensor.divergence(x).dot(j.grad) +
                                ms.tensor.divdiv(x) * j.value);
  return B * divdiv_h + B * q2 * t_hess + (B * q2 * q2 * t.squaredNorm() + m) * j.value;
}

BoundaryData boundary_data(const ManufacturedSolution& ms) {
  BoundaryData d;
  d.g0 = [&ms](const Point& x) { return ms.u(x); };
  d.g1 = [&ms](const Point& x) { return ms.jet(x).grad; };
  d.G2 = [&ms](const Point& x, const Eigen::Vector2d& n) {
    return (ms.hessian_flux(x) * n).eval();
  };
  d.G3 = [&ms](const Point& x, const Eigen::Vector2d& n) { return ms.divergence_flux(x).dot(n); };
  return d;
}

}  // namespace smectic
