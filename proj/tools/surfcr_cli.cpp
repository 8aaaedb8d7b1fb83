// Command line driver for convergence studies, adaptive runs and mesh
// utilities.

#include <surfcr/config.hpp>
#include <surfcr/exceptions.hpp>
#include <surfcr/experiment.hpp>
#include <surfcr/parallel.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace
{

struct GlobalOptions
{
  std::string config_path;
  int threads = 1;
  std::string out;
  bool quiet = false;
};

surfcr::ExperimentConfig load(const GlobalOptions& g)
{
  surfcr::ExperimentConfig cfg;
  if (!g.config_path.empty())
    cfg = surfcr::load_config(g.config_path);
  if (!g.out.empty())
    cfg.output_dir = g.out;
  return cfg;
}

int run_convergence(const GlobalOptions& g)
{
  auto cfg = load(g);
  cfg.mode = surfcr::RefinementMode::uniform;
  const auto result = surfcr::run_convergence(cfg, true, g.quiet ? nullptr : &std::cerr);
  if (!g.quiet)
    surfcr::write_convergence_csv(std::cout, result.rows);
  return 0;
}

int run_adaptive(const GlobalOptions& g)
{
  auto cfg = load(g);
  cfg.mode = surfcr::RefinementMode::adaptive;
  const auto trace = surfcr::run_adaptive(cfg, true, g.quiet ? nullptr : &std::cerr);
  if (!g.quiet)
    surfcr::write_trace_csv(std::cout, trace);
  if (!trace.completed)
  {
    std::cerr << "error: " << trace.failure << '\n';
    return 1;
  }
  return 0;
}

int run_project(const GlobalOptions& g, const std::string& input,
                const std::string& output)
{
  auto cfg = load(g);
  if (!input.empty())
    cfg.mesh_path = input;
  std::filesystem::path target = output;
  if (target.empty())
  {
    const std::filesystem::path in(cfg.mesh_path);
    target = std::filesystem::path(cfg.output_dir)
             / (in.stem().string() + "_projected" + in.extension().string());
  }
  const auto mesh = surfcr::project_mesh(cfg, target);
  if (!g.quiet)
    std::cerr << "projected " << mesh.num_vertices() << " vertices onto "
              << cfg.surface << " -> " << target.string() << '\n';
  return 0;
}

int run_info(const GlobalOptions& g)
{
  const auto cfg = load(g);
  std::cout << surfcr::describe(cfg);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Crouzeix-Raviart surface FEM with gradient recovery"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "INI configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--threads", g.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory (overrides [output] directory)");
  app.add_flag("--quiet", g.quiet, "suppress progress and table output");

  auto* convergence = app.add_subcommand("convergence", "uniform refinement study");
  auto* adaptive = app.add_subcommand("adaptive", "adaptive refinement loop");
  auto* project = app.add_subcommand("project-mesh", "project mesh vertices onto the surface");
  auto* info = app.add_subcommand("info", "describe the configured surface and mesh");

  std::string input, output;
  project->add_option("--input", input, "mesh file (overrides [mesh] path)");
  project->add_option("--output", output, "output mesh file (.off or .obj)");

  // Global flags are accepted after the subcommand as well.
  for (auto* sub : {convergence, adaptive, project, info})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  surfcr::set_num_threads(g.threads);

  try
  {
    if (convergence->parsed())
      return run_convergence(g);
    if (adaptive->parsed())
      return run_adaptive(g);
    if (project->parsed())
      return run_project(g, input, output);
    return run_info(g);
  }
  catch (const surfcr::Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
