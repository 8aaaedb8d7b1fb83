#include <surfcr/solver.hpp>

#include <surfcr/exceptions.hpp>

#include <cmath>

namespace surfcr
{

SolveResult cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                     const SolveOptions& options)
{
  const Eigen::Index n = b.size();
  if (a.rows() != n || a.cols() != n)
    throw Error("cg_solve: dimension mismatch");

  const int max_iter
      = options.max_iter > 0 ? options.max_iter : static_cast<int>(10 * n);

  Eigen::VectorXd inv_diag = Eigen::VectorXd::Ones(n);
  if (options.preconditioner == Preconditioner::jacobi)
  {
    const Eigen::VectorXd d = a.diagonal();
    for (Eigen::Index i = 0; i < n; ++i)
    {
      if (!(d[i] > 0.0))
        throw IndefiniteMatrix("cg_solve: non-positive diagonal entry at row "
                               + std::to_string(i));
      inv_diag[i] = 1.0 / d[i];
    }
  }

  SolveResult result;
  SolveReport& report = result.report;
  result.x = Eigen::VectorXd::Zero(n);

  const double bnorm = b.norm();
  if (bnorm == 0.0)
  {
    report.converged = true;
    report.residual_history.push_back(0.0);
    report.energy_history.push_back(0.0);
    return result;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  double energy = 0.0;

  double best = 1.0;
  report.residual_history.push_back(1.0);
  report.energy_history.push_back(0.0);

  for (int k = 0; k < max_iter; ++k)
  {
    ap.noalias() = a * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw IndefiniteMatrix("cg_solve: non-positive curvature "
                             + std::to_string(curvature) + " at iteration "
                             + std::to_string(k));
    const double alpha = rz / curvature;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * ap;
    energy -= 0.5 * alpha * rz;

    const double rel = r.norm() / bnorm;
    report.iterations = k + 1;
    report.residual_history.push_back(rel);
    report.energy_history.push_back(energy);
    if (rel < best)
    {
      best = rel;
      result.x = x;
    }
    if (rel <= options.tol)
    {
      report.converged = true;
      break;
    }

    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  report.relative_residual = best;
  return result;
}

} // namespace surfcr
