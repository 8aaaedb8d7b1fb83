#pragma once

#include <surfcr/mesh.hpp>
#include <surfcr/solver.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace surfcr
{

enum class MeshSource
{
  icosphere,
  file
};

enum class RefinementMode
{
  uniform,
  adaptive
};

/// Everything an experiment run depends on. Read from an INI file with the
/// sections [surface], [solution], [mesh], [refinement], [quadrature],
/// [solver] and [output]; omitted keys keep their defaults, unknown
/// sections or keys are rejected.
struct ExperimentConfig
{
  // [surface]
  std::string surface = "sphere"; // sphere | dziuk | star

  // [solution]
  std::string solution = "x1x2"; // x1x2 | singular | constant | none
  double lambda = 0.6;           // exponent of the singular solution
  /// "manufactured" derives f from the exact solution. With solution = none
  /// the load is an ambient function sampled on the surface: one | x1 | x1x2.
  std::string rhs = "manufactured";

  // [mesh]
  MeshSource mesh_source = MeshSource::icosphere;
  int mesh_level = 2;
  std::string mesh_path;

  // [refinement]
  RefinementMode mode = RefinementMode::uniform;
  int rounds = 5;
  double theta = 0.5;
  ProjectionMode projection = ProjectionMode::exact;

  // [quadrature]
  int load_degree = 4;
  int error_degree = 4;

  // [solver]
  double solver_tol = 1e-10;
  int solver_max_iter = 0;
  Preconditioner preconditioner = Preconditioner::jacobi;

  // [output]
  std::string output_dir = "out";
  bool export_meshes = false;
  bool export_fields = false;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every key with its resolved value; parse_config of the output
/// reproduces the configuration exactly.
void write_config(std::ostream& out, const ExperimentConfig& config);

std::string to_string(ProjectionMode mode);
std::string to_string(RefinementMode mode);
std::string to_string(MeshSource source);
std::string to_string(Preconditioner p);

} // namespace surfcr
