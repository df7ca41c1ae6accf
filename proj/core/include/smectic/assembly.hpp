#pragma once

#include "smectic/boundary.hpp"
#include "smectic/dof_map.hpp"
#include "smectic/mesh.hpp"
#include "smectic/mms.hpp"
#include "smectic/sparse.hpp"

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

namespace smectic {

enum class Method { Argyris, C0IP, Mixed };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view s);

struct ProblemParams {
  Coefficients coeffs;
  /// C0IP: Lagrange degree 2..4. Mixed: DG degree 1..3. Ignored for Argyris.
  int degree = 0;
  /// Cell/edge quadrature degree; 0 selects 2 * (trial degree) + 4.
  int quad_degree = 0;
};

/// Switches for assembling parts of a discretization (used by property
/// checks) and for perturbing the Dirichlet data.
struct AssemblyOptions {
  bool volume = true;
  bool consistency = true;
  bool penalty = true;
  bool rhs = true;
  double g0_shift = 0.0;
};

struct AssembledSystem {
  Method method = Method::Argyris;
  int degree = 0;
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  /// Argyris and C0IP: one space. Mixed: DG (u), CG (each v component), RT.
  std::vector<FunctionSpace> spaces;
  /// Start of each unknown block plus the total; mixed order is u, v_x, v_y, alpha.
  std::vector<int> block_offsets;
  std::vector<std::string> block_names;
  DofConstraints constraints;

  [[nodiscard]] int dimension() const { return matrix.rows; }
};

/// Argyris discretization with non-symmetric Nitsche terms on Gamma0/Gamma1.
[[nodiscard]] AssembledSystem assemble_conforming(const Mesh& mesh,
                                                  const BoundaryPartition& partition,
                                                  const ProblemParams& params,
                                                  const ManufacturedSolution& ms,
                                                  const AssemblyOptions& options = {});

/// C0 interior penalty with CG_k, k in 2..4, u strongly imposed on Gamma0.
[[nodiscard]] AssembledSystem assemble_c0ip(const Mesh& mesh, const BoundaryPartition& partition,
                                            const ProblemParams& params,
                                            const ManufacturedSolution& ms,
                                            const AssemblyOptions& options = {});

/// Three-field saddle point system DG_k x [CG_{k+2}]^2 x RT, k in 1..3.
[[nodiscard]] AssembledSystem assemble_mixed(const Mesh& mesh, const BoundaryPartition& partition,
                                             const ProblemParams& params,
                                             const ManufacturedSolution& ms,
                                             const AssemblyOptions& options = {});

[[nodiscard]] AssembledSystem assemble(Method method, const Mesh& mesh,
                                       const BoundaryPartition& partition,
                                       const ProblemParams& params,
                                       const ManufacturedSolution& ms,
                                       const AssemblyOptions& options = {});

/// System dimension from closed-form entity counts of the n x n mesh.
[[nodiscard]] long long system_dimension(Method method, int degree, long long n);

/// Elimination stages for solve_direct: the mixed u block goes first so the
/// zero alpha block picks up a nonzero Schur diagonal. Empty otherwise.
[[nodiscard]] std::vector<int> elimination_stages(const AssembledSystem& sys);

/// Default assembly quadrature degree for a method.
[[nodiscard]] int default_quadrature_degree(Method method, int degree);
/// Highest polynomial degree among the method's trial spaces.
[[nodiscard]] int trial_degree(Method method, int degree);

/// Interpolant of the exact solution in the system's spaces (mixed: L2 projection of u, grad u,
/// B div H(u)).
[[nodiscard]] Eigen::VectorXd interpolate_exact(const AssembledSystem& sys,
                                                const ManufacturedSolution& ms);

}  // namespace smectic
