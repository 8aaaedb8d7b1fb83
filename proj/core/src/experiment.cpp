#include <surfcr/experiment.hpp>

#include <surfcr/cr_fem.hpp>
#include <surfcr/exceptions.hpp>
#include <surfcr/io.hpp>
#include <surfcr/recovery.hpp>
#include <surfcr/solver.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace surfcr
{

namespace fs = std::filesystem;

namespace
{

std::string sci(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string fixed(const std::optional<double>& v)
{
  if (!v)
    return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

SolveOptions solve_options(const ExperimentConfig& c)
{
  return {c.solver_tol, c.solver_max_iter, c.preconditioner};
}

void write_effective_config(const ExperimentConfig& c)
{
  std::ofstream out(fs::path(c.output_dir) / "effective_config.ini");
  write_config(out, c);
}

void export_level(const ExperimentConfig& c, const std::string& tag,
                  const SurfaceMesh& mesh, const CRFunction& uh,
                  const CRVectorFunction& g)
{
  const fs::path dir(c.output_dir);
  if (c.export_meshes)
    io::save_mesh(mesh, dir / ("mesh_" + tag + ".off"));
  if (c.export_fields)
  {
    std::ofstream sol(dir / ("solution_" + tag + ".csv"));
    io::write_solution_csv(sol, mesh, uh);
    std::ofstream grad(dir / ("gradient_" + tag + ".csv"));
    io::write_gradient_csv(grad, mesh, g);
    std::ofstream vtk(dir / ("fields_" + tag + ".vtk"));
    io::write_vtk(vtk, mesh, &uh, &g);
  }
}

} // namespace

estimator::Problem make_problem(const ExperimentConfig& c,
                                const geometry::LevelSetSurface& surface)
{
  estimator::Problem problem;
  if (c.solution == "singular")
  {
    const double lambda = c.lambda;
    const auto u = geometry::singular_sphere_field(lambda);
    problem.rhs = [lambda](const Vec3& x)
    { return geometry::singular_sphere_rhs(lambda, x); };
    problem.exact = norms::exact_solution(surface, u);
    return problem;
  }
  if (c.solution == "none")
  {
    geometry::AmbientScalarField load;
    if (c.rhs == "one")
      load = geometry::constant_field(1.0);
    else if (c.rhs == "x1")
      load = geometry::linear_field(Vec3::UnitX());
    else
      load = geometry::product_field(0, 1);
    problem.rhs = load.value;
    return problem;
  }

  const geometry::AmbientScalarField u = c.solution == "constant"
                                             ? geometry::constant_field(1.0)
                                             : geometry::product_field(0, 1);
  // Quadrature points handed to the load are already on the surface.
  problem.rhs = [surface, u](const Vec3& p)
  { return -geometry::laplace_beltrami_ambient(surface, u, p) + u.value(p); };
  problem.exact = norms::exact_solution(surface, u);
  return problem;
}

SurfaceMesh make_initial_mesh(const ExperimentConfig& c,
                              const geometry::LevelSetSurface& surface)
{
  if (c.mesh_source == MeshSource::file)
    return io::load_mesh(c.mesh_path);
  return mapped_icosphere(surface, c.mesh_level);
}

ConvergenceResult run_convergence(const ExperimentConfig& c,
                                  bool write_outputs, std::ostream* log)
{
  c.validate();
  const auto surface = geometry::surface_by_name(c.surface);
  const estimator::Problem problem = make_problem(c, surface);
  if (!problem.exact)
    throw ConfigError("the convergence study needs an exact solution");
  if (write_outputs)
  {
    fs::create_directories(c.output_dir);
    write_effective_config(c);
  }

  ConvergenceResult result;
  SurfaceMesh mesh = make_initial_mesh(c, surface);
  for (int level = 0; level < c.rounds; ++level)
  {
    if (level > 0)
      mesh = uniform_refine(mesh, surface, c.projection);

    const auto load_quad = cr::project_quadrature(
        mesh, surface, quadrature::triangle_rule(c.load_degree));
    const auto err_quad
        = c.error_degree == c.load_degree
              ? load_quad
              : cr::project_quadrature(
                    mesh, surface, quadrature::triangle_rule(c.error_degree));

    const AssembledSystem system = cr::assemble(mesh, load_quad, problem.rhs);
    const SolveResult solved = cg_solve(system, solve_options(c));
    if (!solved.report.converged)
      throw NoConvergence("CG did not converge on level " + std::to_string(level)
                          + " (relative residual "
                          + sci(solved.report.relative_residual) + ")");
    const CRFunction uh{solved.x};
    const CRVectorFunction g = recovery::recover_field(mesh, uh);

    norms::ConvergenceRow row;
    row.dof = mesh.num_edges();
    row.e = norms::l2_error(mesh, err_quad, *problem.exact, uh);
    row.De = norms::broken_h1_error(mesh, err_quad, *problem.exact, uh);
    row.Die = norms::interpolant_gradient_error(mesh, surface, *problem.exact,
                                                uh);
    row.Dre = norms::recovered_gradient_error(mesh, err_quad, *problem.exact, g);
    result.rows.push_back(row);
    result.solves.push_back(solved.report);
    result.mesh_sizes.push_back(mesh_size(mesh));

    if (log)
      *log << "level " << level << ": dof " << row.dof << ", cg "
           << solved.report.iterations << " it, e " << sci(row.e) << ", De "
           << sci(row.De) << ", Die " << sci(row.Die) << ", Dre "
           << sci(row.Dre) << '\n';
    if (write_outputs)
      export_level(c, std::to_string(level), mesh, uh, g);
  }
  norms::fill_orders(result.rows);

  if (write_outputs)
  {
    std::ofstream out(fs::path(c.output_dir) / "convergence.csv");
    write_convergence_csv(out, result.rows);
  }
  return result;
}

estimator::AdaptiveTrace run_adaptive(const ExperimentConfig& c,
                                      bool write_outputs, std::ostream* log)
{
  c.validate();
  const auto surface = geometry::surface_by_name(c.surface);
  const estimator::Problem problem = make_problem(c, surface);
  if (write_outputs)
  {
    fs::create_directories(c.output_dir);
    write_effective_config(c);
  }

  estimator::AdaptiveOptions options;
  options.rounds = c.rounds;
  options.theta = c.theta;
  options.projection = c.projection;
  options.solver = solve_options(c);
  options.load_degree = c.load_degree;
  options.error_degree = c.error_degree;
  options.on_round = [&](const estimator::AdaptiveRecord& rec,
                         const SurfaceMesh& mesh, const CRFunction& uh,
                         const CRVectorFunction& g)
  {
    if (log)
    {
      *log << "round " << rec.round << ": dof " << rec.dof << ", eta "
           << sci(rec.eta);
      if (rec.kappa)
        *log << ", Dre " << sci(*rec.Dre) << ", kappa " << fixed(rec.kappa);
      *log << ", marked " << rec.marked << '\n';
    }
    if (write_outputs)
      export_level(c, std::to_string(rec.round), mesh, uh, g);
  };

  auto trace = estimator::adapt_loop(surface, make_initial_mesh(c, surface),
                                     problem, options);
  if (write_outputs)
  {
    std::ofstream out(fs::path(c.output_dir) / "adaptive.csv");
    write_trace_csv(out, trace);
  }
  return trace;
}

SurfaceMesh project_mesh(const ExperimentConfig& c, const fs::path& output)
{
  if (c.mesh_path.empty())
    throw ConfigError("project-mesh needs mesh.path");
  const auto surface = geometry::surface_by_name(c.surface);
  const SurfaceMesh mesh = io::load_mesh(c.mesh_path);

  std::vector<Vec3> v;
  v.reserve(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i)
  {
    try
    {
      v.push_back(project_point(surface, mesh.vertices()[i], c.projection));
    }
    catch (const Error& err)
    {
      throw NoConvergence("vertex " + std::to_string(i) + ": " + err.what());
    }
  }
  SurfaceMesh projected(std::move(v), mesh.triangles(),
                        mesh.refinement_edges(), mesh.generation());
  if (output.has_parent_path())
    fs::create_directories(output.parent_path());
  io::save_mesh(projected, output);
  return projected;
}

std::string describe(const ExperimentConfig& c)
{
  c.validate();
  const auto surface = geometry::surface_by_name(c.surface);
  const SurfaceMesh mesh = make_initial_mesh(c, surface);
  double max_phi = 0.0;
  for (const Vec3& x : mesh.vertices())
    max_phi = std::max(max_phi, std::abs(surface.phi(x))
                                    / surface.grad_phi(x).norm());
  std::ostringstream s;
  s << "surface          " << surface.name << '\n'
    << "solution         " << c.solution << '\n'
    << "vertices         " << mesh.num_vertices() << '\n'
    << "edges (dof)      " << mesh.num_edges() << '\n'
    << "faces            " << mesh.num_faces() << '\n'
    << "euler            " << euler_characteristic(mesh) << '\n'
    << "h                " << sci(mesh_size(mesh)) << '\n'
    << "max shape ratio  " << sci(max_shape_ratio(mesh)) << '\n'
    << "area             " << sci(surface_area(mesh)) << '\n'
    << "max |phi|/|dphi| " << sci(max_phi) << '\n';
  return s.str();
}

void write_convergence_csv(std::ostream& out,
                           const std::vector<norms::ConvergenceRow>& rows)
{
  out << "dof,e,order_e,De,order_De,Die,order_Die,Dre,order_Dre\n";
  for (const auto& r : rows)
    out << r.dof << ',' << sci(r.e) << ',' << fixed(r.order_e) << ','
        << sci(r.De) << ',' << fixed(r.order_De) << ',' << sci(r.Die) << ','
        << fixed(r.order_Die) << ',' << sci(r.Dre) << ',' << fixed(r.order_Dre)
        << '\n';
}

void write_trace_csv(std::ostream& out, const estimator::AdaptiveTrace& trace)
{
  const bool with_errors
      = !trace.rounds.empty() && trace.rounds.front().kappa.has_value();
  out << "round,dof,eta" << (with_errors ? ",e,De,Die,Dre,kappa" : "") << '\n';
  for (const auto& r : trace.rounds)
  {
    out << r.round << ',' << r.dof << ',' << sci(r.eta);
    if (with_errors)
      out << ',' << sci(*r.e) << ',' << sci(*r.De) << ',' << sci(*r.Die) << ','
          << sci(*r.Dre) << ',' << fixed(r.kappa);
    out << '\n';
  }
}

} // namespace surfcr
