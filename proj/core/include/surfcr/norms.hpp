#pragma once

#include <surfcr/cr_fem.hpp>
#include <surfcr/geometry.hpp>
#include <surfcr/mesh.hpp>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace surfcr::norms
{

/// Exact solution restricted to the surface: value and tangential gradient
/// at points of the surface. Extended to the discrete surface by composing
/// with the closest-point projection.
struct ExactSolution
{
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> tangential_gradient;
};

ExactSolution exact_solution(const geometry::LevelSetSurface& surface,
                             const geometry::AmbientScalarField& u);

/// e = || u o p - u_h ||_{L2(Gamma_h)}
double l2_error(const SurfaceMesh& mesh, const cr::ProjectedQuadrature& quad,
                const ExactSolution& u, const CRFunction& uh);

/// De = | u o p - u_h |_{H1(Gamma_h; T_h)} with the exact side
/// P_h (grad_G u) o p on every face.
double broken_h1_error(const SurfaceMesh& mesh,
                       const cr::ProjectedQuadrature& quad,
                       const ExactSolution& u, const CRFunction& uh);

/// Die = | Pi_h (u o p) - u_h |_{H1(Gamma_h; T_h)}. Face gradients are
/// constant so no quadrature is involved beyond the interpolation.
double interpolant_gradient_error(const SurfaceMesh& mesh,
                                  const geometry::LevelSetSurface& surface,
                                  const ExactSolution& u,
                                  const CRFunction& uh);

/// Broken H1 seminorm of a - b.
double broken_h1_distance(const SurfaceMesh& mesh, const CRFunction& a,
                          const CRFunction& b);

/// Dre = || (grad_G u) o p - G_h u_h ||_{L2(Gamma_h)}, compared in ambient
/// coordinates without projecting onto the face planes.
double recovered_gradient_error(const SurfaceMesh& mesh,
                                const cr::ProjectedQuadrature& quad,
                                const ExactSolution& u,
                                const CRVectorFunction& g);

struct ConvergenceRow
{
  int dof = 0;
  double e = 0.0;
  double De = 0.0;
  double Die = 0.0;
  double Dre = 0.0;
  std::optional<double> order_e;
  std::optional<double> order_De;
  std::optional<double> order_Die;
  std::optional<double> order_Dre;
};

/// log(err_prev / err_cur) / log(dof_cur / dof_prev)
double dof_order(int dof_prev, double err_prev, int dof_cur, double err_cur);

/// Fills the order columns from consecutive rows; the first row has none.
void fill_orders(std::vector<ConvergenceRow>& rows);

/// Negated least-squares slope of log(err) against log(dof).
double least_squares_order(std::span<const double> dofs,
                           std::span<const double> errors);

} // namespace surfcr::norms
