#pragma once

#include "smectic/sparse.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace smectic {

struct SolveResult {
  Eigen::VectorXd x;
  /// ||b - A x||_2 / ||b||_2 before and after the refinement step
  /// (absolute when b = 0).
  double residual_before_refinement = 0.0;
  double residual = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { Singular, Residual, Backend };

  SolverError(Kind kind, const std::string& what, int pivot_row = -1, int pivot_col = -1,
              double residual = 0.0)
      : std::runtime_error(what),
        kind_(kind),
        pivot_row_(pivot_row),
        pivot_col_(pivot_col),
        residual_(residual) {}

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int pivot_row() const { return pivot_row_; }
  [[nodiscard]] int pivot_col() const { return pivot_col_; }
  [[nodiscard]] double residual() const { return residual_; }

 private:
  Kind kind_;
  int pivot_row_, pivot_col_;
  double residual_;
};

inline constexpr double kResidualTolerance = 1e-9;

/// Sparse LU (UMFPACK, threshold partial pivoting with a fill-reducing
/// ordering) followed by one step of iterative refinement. Throws
/// SolverError on a singular matrix (with the pivot location) or when the
/// refined relative residual exceeds `tolerance`.
///
/// `stages` optionally assigns each unknown an elimination stage; lower
/// stages are ordered first. Saddle systems with a zero diagonal block
/// should put the unknowns coupled to that block in stage 0.
[[nodiscard]] SolveResult solve_direct(const CsrMatrix& a, const Eigen::VectorXd& b,
                                       double tolerance = kResidualTolerance,
                                       const std::vector<int>& stages = {});

/// ||b - A x|| / ||b|| (absolute when b = 0).
[[nodiscard]] double relative_residual(const CsrMatrix& a, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& b);

}  // namespace smectic
