#include <surfcr/config.hpp>
#include <surfcr/exceptions.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace surfcr;

namespace
{

ExperimentConfig parse(const std::string& text)
{
  std::istringstream in(text);
  return parse_config(in);
}

} // namespace

TEST(Config, EmptyGivesDefaults)
{
  const auto c = parse("");
  EXPECT_EQ(c.surface, "sphere");
  EXPECT_EQ(c.solution, "x1x2");
  EXPECT_EQ(c.lambda, 0.6);
  EXPECT_EQ(c.theta, 0.5);
  EXPECT_EQ(c.mode, RefinementMode::uniform);
  EXPECT_EQ(c.projection, ProjectionMode::exact);
  EXPECT_EQ(c.load_degree, 4);
  EXPECT_EQ(c.solver_tol, 1e-10);
  EXPECT_EQ(c.preconditioner, Preconditioner::jacobi);
}

TEST(Config, ReadsEverySection)
{
  const auto c = parse("[surface]\nname = dziuk\n"
                       "[solution]\nname = constant\n"
                       "[mesh]\nlevel = 3\n"
                       "[refinement]\nmode = adaptive\nrounds = 7\ntheta = 0.3\nprojection = first_order\n"
                       "[quadrature]\nload_degree = 6\nerror_degree = 8\n"
                       "[solver]\ntol = 1e-8\nmax_iter = 100\npreconditioner = none\n"
                       "[output]\ndirectory = results\nexport_meshes = true\nexport_fields = 1\n");
  EXPECT_EQ(c.surface, "dziuk");
  EXPECT_EQ(c.solution, "constant");
  EXPECT_EQ(c.mesh_level, 3);
  EXPECT_EQ(c.mode, RefinementMode::adaptive);
  EXPECT_EQ(c.rounds, 7);
  EXPECT_EQ(c.theta, 0.3);
  EXPECT_EQ(c.projection, ProjectionMode::first_order);
  EXPECT_EQ(c.load_degree, 6);
  EXPECT_EQ(c.error_degree, 8);
  EXPECT_EQ(c.solver_tol, 1e-8);
  EXPECT_EQ(c.solver_max_iter, 100);
  EXPECT_EQ(c.preconditioner, Preconditioner::none);
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_TRUE(c.export_meshes);
  EXPECT_TRUE(c.export_fields);
}

TEST(Config, UnknownKeysAndSectionsAreRejected)
{
  EXPECT_THROW(parse("[surface]\nnmae = sphere\n"), ConfigError);
  EXPECT_THROW(parse("[surfaces]\nname = sphere\n"), ConfigError);
  EXPECT_THROW(parse("name = sphere\n"), ConfigError);
}

TEST(Config, InvalidValuesAreRejected)
{
  EXPECT_THROW(parse("[refinement]\ntheta = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("[refinement]\ntheta = abc\n"), ConfigError);
  EXPECT_THROW(parse("[refinement]\nrounds = 0\n"), ConfigError);
  EXPECT_THROW(parse("[refinement]\nprojection = cubic\n"), ConfigError);
  EXPECT_THROW(parse("[surface]\nname = torus\n"), ConfigError);
  EXPECT_THROW(parse("[surface]\nname = dziuk\n[solution]\nname = singular\n"), ConfigError);
  EXPECT_THROW(parse("[solution]\nlambda = -1\nname = singular\n"), ConfigError);
  EXPECT_THROW(parse("[mesh]\nsource = file\n"), ConfigError);
  EXPECT_THROW(parse("[quadrature]\nload_degree = 0\n"), ConfigError);
  EXPECT_THROW(parse("[solver]\ntol = 0\n"), ConfigError);
  EXPECT_THROW(parse("[solution]\nname = none\nrhs = x7\n"), ConfigError);
  EXPECT_THROW(parse("[solution]\nrhs = one\n"), ConfigError);
  EXPECT_THROW(parse("[surface\n"), ConfigError);
}

TEST(Config, NoSolutionDefaultsToUnitLoad)
{
  const auto c = parse("[surface]\nname = star\n[solution]\nname = none\n");
  EXPECT_EQ(c.rhs, "one");
}

TEST(Config, WriteThenParseRoundTrips)
{
  ExperimentConfig c;
  c.surface = "star";
  c.solution = "none";
  c.rhs = "x1x2";
  c.theta = 0.1 + 0.2; // not exactly representable in short decimal
  c.solver_tol = 1.0 / 3.0 * 1e-9;
  c.mesh_source = MeshSource::file;
  c.mesh_path = "meshes/star.off";
  c.mode = RefinementMode::adaptive;
  c.export_fields = true;
  std::ostringstream out;
  write_config(out, c);
  const auto r = parse(out.str());
  std::ostringstream again;
  write_config(again, r);
  EXPECT_EQ(out.str(), again.str());
  EXPECT_EQ(r.theta, c.theta);
  EXPECT_EQ(r.solver_tol, c.solver_tol);
  EXPECT_EQ(r.mesh_path, c.mesh_path);
  EXPECT_EQ(r.mesh_source, MeshSource::file);
}

TEST(Config, MissingFile)
{
  EXPECT_THROW(load_config("/nonexistent/surfcr.ini"), ConfigError);
}
