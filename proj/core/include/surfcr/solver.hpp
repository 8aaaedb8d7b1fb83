#pragma once

#include <surfcr/cr_fem.hpp>

#include <Eigen/Core>

#include <vector>

namespace surfcr
{

enum class Preconditioner
{
  none,
  jacobi
};

struct SolveReport
{
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// ||b - A x_k|| / ||b|| after every iteration (entry 0 is the start).
  std::vector<double> residual_history;
  /// Energy functional 1/2 x_k^T A x_k - b^T x_k; non-increasing in exact
  /// arithmetic for any SPD A.
  std::vector<double> energy_history;
};

struct SolveOptions
{
  double tol = 1e-10;
  /// 0 means 10 * N.
  int max_iter = 0;
  Preconditioner preconditioner = Preconditioner::jacobi;
};

struct SolveResult
{
  Eigen::VectorXd x;
  SolveReport report;
};

/// Preconditioned conjugate gradients from a zero initial guess. On
/// non-convergence the best iterate (smallest residual) is returned with
/// report.converged == false. Throws IndefiniteMatrix on non-positive
/// curvature p^T A p <= 0.
SolveResult cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                     const SolveOptions& options = {});

inline SolveResult cg_solve(const AssembledSystem& system,
                            const SolveOptions& options = {})
{
  return cg_solve(system.matrix, system.rhs, options);
}

} // namespace surfcr
