#include "smectic/solver.hpp"

#include <cstdio>
#include <camd.h>
#include <umfpack.h>

#include <memory>
#include <vector>

namespace smectic {

namespace {

struct NumericHandle {
  void* ptr = nullptr;
  ~NumericHandle() {
    if (ptr) umfpack_di_free_numeric(&ptr);
  }
};

struct SymbolicHandle {
  void* ptr = nullptr;
  ~SymbolicHandle() {
    if (ptr) umfpack_di_free_symbolic(&ptr);
  }
};

std::string status_text(int status) {
  switch (status) {
    case UMFPACK_ERROR_out_of_memory: return "out of memory";
    case UMFPACK_ERROR_invalid_matrix: return "invalid matrix";
    case UMFPACK_ERROR_different_pattern: return "pattern changed";
    default: return "status " + std::to_string(status);
  }
}

// Locates the first zero entry of U's diagonal and maps it back to A.
// UMFPACK factors A^T here (CSR of A == CSC of A^T), so rows and columns swap.
void throw_singular(void* numeric, int n) {
  std::vector<int> p(n), q(n);
  std::vector<double> diag(n);
  int do_recip = 0;
  const int status = umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                                            p.data(), q.data(), diag.data(), &do_recip, nullptr,
                                            numeric);
  if (status == UMFPACK_OK) {
    for (int k = 0; k < n; ++k) {
      if (diag[k] == 0.0) {
        throw SolverError(SolverError::Kind::Singular,
                          "solve_direct: matrix is singular; zero pivot at step " +
                              std::to_string(k) + " (row " + std::to_string(q[k]) + ", column " +
                              std::to_string(p[k]) + ")",
                          q[k], p[k]);
      }
    }
  }
  throw SolverError(SolverError::Kind::Singular, "solve_direct: matrix is singular");
}

}  // namespace

double relative_residual(const CsrMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double r = (b - a.multiply(x)).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

namespace {

enum class Plan { Ordered, Default };

// Factors A^T (the CSR arrays read as CSC) and owns the numeric object.
class Factorization {
 public:
  Factorization(const CsrMatrix& a, Plan plan, const std::vector<int>& stages) : a_(a) {
    umfpack_di_defaults(control_);
    control_[UMFPACK_IRSTEP] = 0;  // refinement is done by the caller
    const int n = a.rows;
    int status = 0;
    if (plan == Plan::Ordered) {
      // Every assembled pattern is structurally symmetric. AMD on A + A^T with
      // diagonal pivots gives far less fill than a column ordering; the stages
      // put unknowns that make a zero diagonal block pivotable first.
      std::vector<int> perm(n);
      double camd_control[CAMD_CONTROL];
      double camd_info[CAMD_INFO];
      camd_defaults(camd_control);
      std::vector<int> sets(stages);
      status = camd_order(n, a.row_ptr.data(), a.col_idx.data(), perm.data(), camd_control,
                          camd_info, sets.empty() ? nullptr : sets.data());
      if (status != CAMD_OK && status != CAMD_OK_BUT_JUMBLED) {
        throw SolverError(SolverError::Kind::Backend, "solve_direct: ordering failed");
      }
      control_[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
      control_[UMFPACK_SYM_PIVOT_TOLERANCE] = 1e-14;
      status = umfpack_di_qsymbolic(n, n, a.row_ptr.data(), a.col_idx.data(), a.values.data(),
                                    perm.data(), &symbolic_.ptr, control_, info_);
    } else {
      status = umfpack_di_symbolic(n, n, a.row_ptr.data(), a.col_idx.data(), a.values.data(),
                                   &symbolic_.ptr, control_, info_);
    }
    if (status != UMFPACK_OK) {
      throw SolverError(SolverError::Kind::Backend,
                        "solve_direct: symbolic analysis failed (" + status_text(status) + ")");
    }
    status = umfpack_di_numeric(a.row_ptr.data(), a.col_idx.data(), a.values.data(),
                                symbolic_.ptr, &numeric_.ptr, control_, info_);
    if (status == UMFPACK_WARNING_singular_matrix) throw_singular(numeric_.ptr, n);
    if (status != UMFPACK_OK) {
      throw SolverError(SolverError::Kind::Backend,
                        "solve_direct: factorization failed (" + status_text(status) + ")");
    }
  }

  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x(a_.rows);
    const int st = umfpack_di_solve(UMFPACK_At, a_.row_ptr.data(), a_.col_idx.data(),
                                    a_.values.data(), x.data(), rhs.data(), numeric_.ptr,
                                    control_, info_);
    if (st != UMFPACK_OK) {
      throw SolverError(SolverError::Kind::Backend,
                        "solve_direct: triangular solve failed (" + status_text(st) + ")");
    }
    return x;
  }

 private:
  const CsrMatrix& a_;
  double control_[UMFPACK_CONTROL];
  double info_[UMFPACK_INFO];
  SymbolicHandle symbolic_;
  NumericHandle numeric_;
};

SolveResult solve_with(const CsrMatrix& a, const Eigen::VectorXd& b, double tolerance, Plan plan,
                       const std::vector<int>& stages) {
  SolveResult res;
  {
    Factorization lu(a, plan, stages);
    res.x = lu.solve(b);
    res.residual_before_refinement = relative_residual(a, res.x, b);
    const Eigen::VectorXd r = b - a.multiply(res.x);
    res.x += lu.solve(r);
  }
  res.residual = relative_residual(a, res.x, b);
  if (!(res.residual <= tolerance)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "solve_direct: relative residual %.3e exceeds tolerance %.1e",
                  res.residual, tolerance);
    throw SolverError(SolverError::Kind::Residual, msg, -1, -1, res.residual);
  }
  return res;
}

}  // namespace

SolveResult solve_direct(const CsrMatrix& a, const Eigen::VectorXd& b, double tolerance,
                         const std::vector<int>& stages) {
  if (a.rows != a.cols) throw std::invalid_argument("solve_direct: matrix is not square");
  if (b.size() != a.rows) throw std::invalid_argument("solve_direct: rhs size mismatch");
  if (!stages.empty() && static_cast<int>(stages.size()) != a.rows) {
    throw std::invalid_argument("solve_direct: one elimination stage per unknown is required");
  }
  if (a.rows == 0) return {};
  // The diagonal-pivot plan can run out of memory or stall on a tiny pivot;
  // the unsymmetric default is the fallback and its failure is the one reported.
  try {
    return solve_with(a, b, tolerance, Plan::Ordered, stages);
  } catch (const SolverError&) {
  }
  return solve_with(a, b, tolerance, Plan::Default, stages);
}

}  // namespace smectic
