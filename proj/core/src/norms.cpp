#include <surfcr/norms.hpp>

#include <surfcr/exceptions.hpp>
#include <surfcr/parallel.hpp>

#include <cmath>

namespace surfcr::norms
{

ExactSolution exact_solution(const geometry::LevelSetSurface& surface,
                             const geometry::AmbientScalarField& u)
{
  return {u.value, [surface, u](const Vec3& x)
          { return geometry::tangential_gradient(surface, u, x); }};
}

namespace
{

// sqrt of the fixed-order sum of per-face contributions.
template <class FaceTerm>
double face_norm(const SurfaceMesh& mesh, FaceTerm&& term)
{
  std::vector<double> local(mesh.num_faces());
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t f) { local[f] = term(static_cast<int>(f)); });
  return std::sqrt(pairwise_sum(local));
}

} // namespace

double l2_error(const SurfaceMesh& mesh, const cr::ProjectedQuadrature& quad,
                const ExactSolution& u, const CRFunction& uh)
{
  return face_norm(
      mesh,
      [&](int f)
      {
        double s = 0.0;
        for (int q = 0; q < quad.points_per_face; ++q)
        {
          const Vec3& p = quad.projected[f * quad.points_per_face + q];
          const double d = u.value(p) - cr::evaluate(mesh, uh, f, quad.rule.points[q]);
          s += quad.rule.weights[q] * d * d;
        }
        return mesh.face_area(f) * s;
      });
}

double broken_h1_error(const SurfaceMesh& mesh,
                       const cr::ProjectedQuadrature& quad,
                       const ExactSolution& u, const CRFunction& uh)
{
  return face_norm(
      mesh,
      [&](int f)
      {
        const Vec3 n = mesh.face_normal(f);
        const Vec3 gh = cr::broken_gradient(mesh, uh, f);
        double s = 0.0;
        for (int q = 0; q < quad.points_per_face; ++q)
        {
          const Vec3& p = quad.projected[f * quad.points_per_face + q];
          Vec3 g = u.tangential_gradient(p);
          g -= g.dot(n) * n;
          s += quad.rule.weights[q] * (g - gh).squaredNorm();
        }
        return mesh.face_area(f) * s;
      });
}

double broken_h1_distance(const SurfaceMesh& mesh, const CRFunction& a,
                          const CRFunction& b)
{
  const CRFunction d{a.dofs - b.dofs};
  return face_norm(mesh,
                   [&](int f)
                   {
                     return mesh.face_area(f)
                            * cr::broken_gradient(mesh, d, f).squaredNorm();
                   });
}

double interpolant_gradient_error(const SurfaceMesh& mesh,
                                  const geometry::LevelSetSurface& surface,
                                  const ExactSolution& u,
                                  const CRFunction& uh)
{
  const CRFunction pi = cr::interpolate(
      mesh,
      [&](const Vec3& x)
      { return u.value(project_point(surface, x, ProjectionMode::exact)); });
  return broken_h1_distance(mesh, pi, uh);
}

double recovered_gradient_error(const SurfaceMesh& mesh,
                                const cr::ProjectedQuadrature& quad,
                                const ExactSolution& u,
                                const CRVectorFunction& g)
{
  return face_norm(
      mesh,
      [&](int f)
      {
        double s = 0.0;
        for (int q = 0; q < quad.points_per_face; ++q)
        {
          const Vec3& p = quad.projected[f * quad.points_per_face + q];
          const Vec3 d
              = u.tangential_gradient(p) - cr::evaluate(mesh, g, f, quad.rule.points[q]);
          s += quad.rule.weights[q] * d.squaredNorm();
        }
        return mesh.face_area(f) * s;
      });
}

double dof_order(int dof_prev, double err_prev, int dof_cur, double err_cur)
{
  return std::log(err_prev / err_cur)
         / std::log(static_cast<double>(dof_cur) / dof_prev);
}

void fill_orders(std::vector<ConvergenceRow>& rows)
{
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    const auto& a = rows[i - 1];
    auto& b = rows[i];
    b.order_e = dof_order(a.dof, a.e, b.dof, b.e);
    b.order_De = dof_order(a.dof, a.De, b.dof, b.De);
    b.order_Die = dof_order(a.dof, a.Die, b.dof, b.Die);
    b.order_Dre = dof_order(a.dof, a.Dre, b.dof, b.Dre);
  }
}

double least_squares_order(std::span<const double> dofs,
                           std::span<const double> errors)
{
  if (dofs.size() != errors.size() || dofs.size() < 2)
    throw Error("least_squares_order: need at least two matching samples");
  const double n = static_cast<double>(dofs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dofs.size(); ++i)
  {
    const double x = std::log(dofs[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace surfcr::norms
