#include <surfcr/estimator.hpp>

#include <surfcr/exceptions.hpp>
#include <surfcr/parallel.hpp>
#include <surfcr/recovery.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace surfcr::estimator
{

IndicatorField indicators(const SurfaceMesh& mesh, const CRFunction& uh,
                          const CRVectorFunction& recovered, int degree)
{
  const auto rule = quadrature::triangle_rule(degree);
  IndicatorField field;
  field.eta.resize(mesh.num_faces());
  std::vector<double> squared(mesh.num_faces());
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t fs)
               {
                 const int f = static_cast<int>(fs);
                 const Vec3 gh = cr::broken_gradient(mesh, uh, f);
                 const Vec3 n = mesh.face_normal(f);
                 double s = 0.0;
                 for (std::size_t q = 0; q < rule.points.size(); ++q)
                 {
                   const Vec3 d
                       = cr::evaluate(mesh, recovered, f, rule.points[q]) - gh;
                   s += rule.weights[q] * (d - n.dot(d) * n).squaredNorm();
                 }
                 squared[f] = mesh.face_area(f) * s;
                 field.eta[f] = std::sqrt(squared[f]);
               });
  field.global = std::sqrt(pairwise_sum(squared));
  return field;
}

std::vector<int> dorfler_mark(const IndicatorField& field, double theta)
{
  if (!(theta > 0.0 && theta <= 1.0))
    throw Error("dorfler_mark: theta must lie in (0, 1]");
  std::vector<int> order(field.eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return field.eta[a] > field.eta[b]; });

  double total = 0.0;
  for (int f : order)
    total += field.eta[f] * field.eta[f];
  const double target = theta * theta * total;

  std::vector<int> marked;
  double sum = 0.0;
  for (int f : order)
  {
    if (sum >= target || field.eta[f] <= 0.0)
      break;
    marked.push_back(f);
    sum += field.eta[f] * field.eta[f];
  }
  return marked;
}

AdaptiveTrace adapt_loop(const geometry::LevelSetSurface& surface,
                         const SurfaceMesh& initial, const Problem& problem,
                         const AdaptiveOptions& options)
{
  if (!(options.theta > 0.0 && options.theta < 1.0))
    throw Error("adapt_loop: theta must lie in (0, 1)");

  AdaptiveTrace trace;
  SurfaceMesh mesh = initial;
  try
  {
    for (int round = 0; round < options.rounds; ++round)
    {
      const auto load_quad = cr::project_quadrature(
          mesh, surface, quadrature::triangle_rule(options.load_degree));
      const AssembledSystem system = cr::assemble(mesh, load_quad, problem.rhs);
      const SolveResult solved = cg_solve(system, options.solver);
      if (!solved.report.converged)
        throw NoConvergence("CG stopped at relative residual "
                            + std::to_string(solved.report.relative_residual));
      const CRFunction uh{solved.x};
      const CRVectorFunction g = recovery::recover_field(mesh, uh);
      const IndicatorField eta = indicators(mesh, uh, g, options.error_degree);

      AdaptiveRecord rec;
      rec.round = round;
      rec.dof = mesh.num_edges();
      rec.eta = eta.global;
      rec.cg_iterations = solved.report.iterations;
      if (problem.exact)
      {
        const auto& u = *problem.exact;
        const auto quad
            = options.error_degree == options.load_degree
                  ? load_quad
                  : cr::project_quadrature(
                        mesh, surface,
                        quadrature::triangle_rule(options.error_degree));
        rec.e = norms::l2_error(mesh, quad, u, uh);
        rec.De = norms::broken_h1_error(mesh, quad, u, uh);
        rec.Die = norms::interpolant_gradient_error(mesh, surface, u, uh);
        rec.Dre = norms::recovered_gradient_error(mesh, quad, u, g);
        rec.kappa = eta.global / *rec.De;
      }

      const std::vector<int> marked = dorfler_mark(eta, options.theta);
      rec.marked = static_cast<int>(marked.size());
      trace.rounds.push_back(rec);
      if (options.on_round)
        options.on_round(rec, mesh, uh, g);

      if (round + 1 == options.rounds)
      {
        trace.final_marked = marked;
        break;
      }
      mesh = bisect(mesh, marked, surface, options.projection);
    }
    trace.completed = true;
  }
  catch (const Error& err)
  {
    trace.failure = err.what();
  }
  trace.final_mesh = std::move(mesh);
  return trace;
}

} // namespace surfcr::estimator
