#include <surfcr/config.hpp>

#include <surfcr/exceptions.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace surfcr
{

namespace pt = boost::property_tree;

std::string to_string(ProjectionMode mode)
{
  switch (mode)
  {
  case ProjectionMode::exact:
    return "exact";
  case ProjectionMode::first_order:
    return "first_order";
  case ProjectionMode::none:
    return "none";
  }
  return "exact";
}

std::string to_string(RefinementMode mode)
{
  return mode == RefinementMode::uniform ? "uniform" : "adaptive";
}

std::string to_string(MeshSource source)
{
  return source == MeshSource::icosphere ? "icosphere" : "file";
}

std::string to_string(Preconditioner p)
{
  return p == Preconditioner::jacobi ? "jacobi" : "none";
}

namespace
{

const std::map<std::string, std::set<std::string>>& schema()
{
  static const std::map<std::string, std::set<std::string>> keys = {
      {"surface", {"name"}},
      {"solution", {"name", "lambda", "rhs"}},
      {"mesh", {"source", "level", "path"}},
      {"refinement", {"mode", "rounds", "theta", "projection"}},
      {"quadrature", {"load_degree", "error_degree"}},
      {"solver", {"tol", "max_iter", "preconditioner"}},
      {"output", {"directory", "export_meshes", "export_fields"}},
  };
  return keys;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, const T& fallback)
{
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node)
    return fallback;
  const auto value = node->get_value_optional<T>();
  if (!value)
    throw ConfigError("invalid value '" + node->data() + "' for " + key);
  return *value;
}

template <class Enum>
Enum get_enum(const pt::ptree& tree, const std::string& key, Enum fallback,
              const std::map<std::string, Enum>& names)
{
  const std::string s = get<std::string>(tree, key, "");
  if (s.empty())
    return fallback;
  const auto it = names.find(s);
  if (it == names.end())
    throw ConfigError("invalid value '" + s + "' for " + key);
  return it->second;
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

void ExperimentConfig::validate() const
{
  static const std::set<std::string> surfaces = {"sphere", "dziuk", "star"};
  static const std::set<std::string> solutions
      = {"x1x2", "singular", "constant", "none"};
  static const std::set<std::string> loads = {"one", "x1", "x1x2"};

  if (!surfaces.count(surface))
    throw ConfigError("surface.name must be one of sphere, dziuk, star");
  if (!solutions.count(solution))
    throw ConfigError(
        "solution.name must be one of x1x2, singular, constant, none");
  if (solution == "singular")
  {
    if (surface != "sphere")
      throw ConfigError("the singular solution is defined on the sphere only");
    if (!(lambda > 0.0))
      throw ConfigError("solution.lambda must be positive");
  }
  if (solution == "none" ? !loads.count(rhs) : rhs != "manufactured")
    throw ConfigError(solution == "none"
                          ? "solution.rhs must be one of one, x1, x1x2 when "
                            "solution.name = none"
                          : "solution.rhs must be 'manufactured' when an "
                            "exact solution is given");
  if (mesh_source == MeshSource::icosphere && (mesh_level < 0 || mesh_level > 8))
    throw ConfigError("mesh.level must lie in [0, 8]");
  if (mesh_source == MeshSource::file && mesh_path.empty())
    throw ConfigError("mesh.path is required when mesh.source = file");
  if (rounds < 1)
    throw ConfigError("refinement.rounds must be at least 1");
  if (!(theta > 0.0 && theta < 1.0))
    throw ConfigError("refinement.theta must lie in (0, 1)");
  if (load_degree < 1 || load_degree > 20 || error_degree < 1
      || error_degree > 20)
    throw ConfigError("quadrature degrees must lie in [1, 20]");
  if (!(solver_tol > 0.0 && solver_tol < 1.0))
    throw ConfigError("solver.tol must lie in (0, 1)");
  if (solver_max_iter < 0)
    throw ConfigError("solver.max_iter must be non-negative");
}

ExperimentConfig parse_config(std::istream& in)
{
  pt::ptree tree;
  try
  {
    pt::ini_parser::read_ini(in, tree);
  }
  catch (const pt::ini_parser_error& err)
  {
    throw ConfigError(err.what());
  }

  for (const auto& [section, body] : tree)
  {
    const auto it = schema().find(section);
    if (it == schema().end())
      throw ConfigError(body.empty() ? "key '" + section
                                           + "' outside of any section"
                                     : "unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!it->second.count(key))
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }

  ExperimentConfig c;
  c.surface = get<std::string>(tree, "surface.name", c.surface);
  c.solution = get<std::string>(tree, "solution.name", c.solution);
  c.lambda = get<double>(tree, "solution.lambda", c.lambda);
  c.rhs = get<std::string>(tree, "solution.rhs",
                           c.solution == "none" ? "one" : c.rhs);
  c.mesh_source = get_enum<MeshSource>(
      tree, "mesh.source", c.mesh_source,
      {{"icosphere", MeshSource::icosphere}, {"file", MeshSource::file}});
  c.mesh_level = get<int>(tree, "mesh.level", c.mesh_level);
  c.mesh_path = get<std::string>(tree, "mesh.path", c.mesh_path);
  c.mode = get_enum<RefinementMode>(
      tree, "refinement.mode", c.mode,
      {{"uniform", RefinementMode::uniform},
       {"adaptive", RefinementMode::adaptive}});
  c.rounds = get<int>(tree, "refinement.rounds", c.rounds);
  c.theta = get<double>(tree, "refinement.theta", c.theta);
  c.projection = get_enum<ProjectionMode>(
      tree, "refinement.projection", c.projection,
      {{"exact", ProjectionMode::exact},
       {"first_order", ProjectionMode::first_order},
       {"none", ProjectionMode::none}});
  c.load_degree = get<int>(tree, "quadrature.load_degree", c.load_degree);
  c.error_degree = get<int>(tree, "quadrature.error_degree", c.error_degree);
  c.solver_tol = get<double>(tree, "solver.tol", c.solver_tol);
  c.solver_max_iter = get<int>(tree, "solver.max_iter", c.solver_max_iter);
  c.preconditioner = get_enum<Preconditioner>(
      tree, "solver.preconditioner", c.preconditioner,
      {{"jacobi", Preconditioner::jacobi}, {"none", Preconditioner::none}});
  c.output_dir = get<std::string>(tree, "output.directory", c.output_dir);
  c.export_meshes = get<bool>(tree, "output.export_meshes", c.export_meshes);
  c.export_fields = get<bool>(tree, "output.export_fields", c.export_fields);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c)
{
  out << "[surface]\n"
      << "name = " << c.surface << "\n\n"
      << "[solution]\n"
      << "name = " << c.solution << "\n"
      << "lambda = " << format_double(c.lambda) << "\n"
      << "rhs = " << c.rhs << "\n\n"
      << "[mesh]\n"
      << "source = " << to_string(c.mesh_source) << "\n"
      << "level = " << c.mesh_level << "\n"
      << "path = " << c.mesh_path << "\n\n"
      << "[refinement]\n"
      << "mode = " << to_string(c.mode) << "\n"
      << "rounds = " << c.rounds << "\n"
      << "theta = " << format_double(c.theta) << "\n"
      << "projection = " << to_string(c.projection) << "\n\n"
      << "[quadrature]\n"
      << "load_degree = " << c.load_degree << "\n"
      << "error_degree = " << c.error_degree << "\n\n"
      << "[solver]\n"
      << "tol = " << format_double(c.solver_tol) << "\n"
      << "max_iter = " << c.solver_max_iter << "\n"
      << "preconditioner = " << to_string(c.preconditioner) << "\n\n"
      << "[output]\n"
      << "directory = " << c.output_dir << "\n"
      << "export_meshes = " << (c.export_meshes ? "true" : "false") << "\n"
      << "export_fields = " << (c.export_fields ? "true" : "false") << "\n";
}

} // namespace surfcr
