#pragma once

#include "smectic/assembly.hpp"
#include "smectic/boundary.hpp"
#include "smectic/mms.hpp"

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace smectic {

/// Per-level errors of one discretization. Norm names by method:
///   argyris: l2, h2q, triple
///   c0ip:    l2, h2q (broken), triple
///   mixed:   l2, v_h1q, product, alpha_l2q, alpha_divq
struct ErrorReport {
  Method method = Method::Argyris;
  int degree = 0;
  int n = 0;
  double h = 0.0;
  long long dofs = 0;
  std::vector<std::pair<std::string, double>> errors;
  double residual = 0.0;
  double seconds = 0.0;
  bool ok = true;
  std::string message;

  [[nodiscard]] double get(const std::string& name) const;
  [[nodiscard]] bool has(const std::string& name) const;
};

[[nodiscard]] std::vector<std::string> norm_names(Method method);

/// Quadrature degree for error integration: max(14, 2 * trial degree + 4),
/// capped at the largest available rule.
[[nodiscard]] int error_quadrature_degree(Method method, int degree);

/// Errors of the discrete solution `x` of `sys` against the manufactured
/// solution. `quad_degree` 0 selects error_quadrature_degree.
[[nodiscard]] ErrorReport compute_errors(const AssembledSystem& sys, const Eigen::VectorXd& x,
                                         const ManufacturedSolution& ms,
                                         const BoundaryPartition& partition, int quad_degree = 0);

/// Mixed only: the product norm integrated as a single pointwise sum
/// e_u^2 + q^-4 (|e_v|^2 + |grad e_v|^2).
[[nodiscard]] double mixed_product_norm_direct(const AssembledSystem& sys,
                                               const Eigen::VectorXd& x,
                                               const ManufacturedSolution& ms,
                                               int quad_degree = 0);

struct Slope {
  std::string name;
  /// Slope against log(1/h), or against log q for sweeps.
  double raw = 0.0;
  /// Convergence order: -raw for refinement studies.
  double order = 0.0;
};

/// Slopes from the last two reports: order = log(e_last/e_prev) / log(h_last/h_prev).
/// Throws for fewer than two reports, non-increasing n or zero errors.
[[nodiscard]] std::vector<Slope> estimate_rates(const std::vector<ErrorReport>& reports);

/// Slope of log(error) against log(q) from the last two entries.
[[nodiscard]] double estimate_q_slope(const std::vector<double>& q, const std::vector<double>& e);

}  // namespace smectic
