#pragma once

#include <surfcr/config.hpp>
#include <surfcr/estimator.hpp>
#include <surfcr/geometry.hpp>
#include <surfcr/mesh.hpp>
#include <surfcr/norms.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace surfcr
{

/// Load and (optional) exact solution selected by the configuration.
estimator::Problem make_problem(const ExperimentConfig& config,
                                const geometry::LevelSetSurface& surface);

/// Initial mesh: mapped icosphere or file (vertices are used as given).
SurfaceMesh make_initial_mesh(const ExperimentConfig& config,
                              const geometry::LevelSetSurface& surface);

struct ConvergenceResult
{
  std::vector<norms::ConvergenceRow> rows;
  std::vector<SolveReport> solves;
  std::vector<double> mesh_sizes;
};

/// Uniform refinement study: one row per level. When `write_outputs` is
/// set, convergence.csv and effective_config.ini (plus optional mesh and
/// field exports) are written to config.output_dir. Requires an exact
/// solution.
ConvergenceResult run_convergence(const ExperimentConfig& config,
                                  bool write_outputs = true,
                                  std::ostream* log = nullptr);

/// Adaptive loop; writes adaptive.csv and effective_config.ini. Error and
/// effectivity columns are omitted without an exact solution.
estimator::AdaptiveTrace run_adaptive(const ExperimentConfig& config,
                                      bool write_outputs = true,
                                      std::ostream* log = nullptr);

/// Projects every vertex of config.mesh_path onto the configured surface
/// with config.projection and writes the result to `output`. Failures name
/// the offending vertex index.
SurfaceMesh project_mesh(const ExperimentConfig& config,
                         const std::filesystem::path& output);

/// Human-readable summary of the configured surface and initial mesh.
std::string describe(const ExperimentConfig& config);

/// dof,e,order_e,De,order_De,Die,order_Die,Dre,order_Dre
void write_convergence_csv(std::ostream& out,
                           const std::vector<norms::ConvergenceRow>& rows);

/// round,dof,eta[,e,De,Die,Dre,kappa]
void write_trace_csv(std::ostream& out, const estimator::AdaptiveTrace& trace);

} // namespace surfcr
