#include <surfcr/exceptions.hpp>
#include <surfcr/experiment.hpp>
#include <surfcr/io.hpp>
#include <surfcr/parallel.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace surfcr;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name)
{
  const auto dir = fs::temp_directory_path() / ("surfcr_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ','))
    out.push_back(cell);
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

} // namespace

TEST(Convergence, SphereTableAndOrders)
{
  ExperimentConfig c;
  c.rounds = 3;
  c.output_dir = scratch("conv").string();
  const auto r = run_convergence(c);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].dof, 480);
  EXPECT_EQ(r.rows[2].dof, 7680);
  EXPECT_NEAR(*r.rows[2].order_e, 1.0, 0.1);
  EXPECT_NEAR(*r.rows[2].order_De, 0.5, 0.05);

  std::istringstream csv(slurp(fs::path(c.output_dir) / "convergence.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "dof,e,order_e,De,order_De,Die,order_Die,Dre,order_Dre");
  std::getline(csv, line);
  const auto first = split(line);
  ASSERT_EQ(first.size(), 9u);
  EXPECT_EQ(first[0], "480");
  EXPECT_TRUE(first[2].empty());
  EXPECT_TRUE(first[8].empty());
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "effective_config.ini"));
  fs::remove_all(c.output_dir);
}

TEST(Convergence, SingleRoundHasNoOrders)
{
  ExperimentConfig c;
  c.rounds = 1;
  const auto r = run_convergence(c, false);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.rows[0].order_e.has_value());
  std::ostringstream out;
  write_convergence_csv(out, r.rows);
  EXPECT_NE(out.str().find("480,"), std::string::npos);
}

TEST(Convergence, ByteIdenticalReruns)
{
  ExperimentConfig c;
  c.surface = "dziuk";
  c.rounds = 2;
  c.output_dir = scratch("rerun_a").string();
  run_convergence(c);
  const auto a = slurp(fs::path(c.output_dir) / "convergence.csv");
  fs::remove_all(c.output_dir);
  set_num_threads(3);
  c.output_dir = scratch("rerun_b").string();
  run_convergence(c);
  set_num_threads(1);
  const auto b = slurp(fs::path(c.output_dir) / "convergence.csv");
  fs::remove_all(c.output_dir);
  EXPECT_EQ(a, b);
}

TEST(Convergence, EffectiveConfigReproducesRun)
{
  ExperimentConfig c;
  c.surface = "dziuk";
  c.rounds = 2;
  c.projection = ProjectionMode::first_order;
  c.output_dir = scratch("effective").string();
  run_convergence(c);
  const auto table = slurp(fs::path(c.output_dir) / "convergence.csv");
  auto again = load_config(fs::path(c.output_dir) / "effective_config.ini");
  again.output_dir = scratch("effective_again").string();
  run_convergence(again);
  EXPECT_EQ(slurp(fs::path(again.output_dir) / "convergence.csv"), table);
  fs::remove_all(c.output_dir);
  fs::remove_all(again.output_dir);
}

TEST(Convergence, ExportsMeshesAndFields)
{
  ExperimentConfig c;
  c.rounds = 1;
  c.export_meshes = true;
  c.export_fields = true;
  c.output_dir = scratch("exports").string();
  run_convergence(c);
  const fs::path dir(c.output_dir);
  EXPECT_TRUE(fs::exists(dir / "mesh_0.off"));
  EXPECT_TRUE(fs::exists(dir / "solution_0.csv"));
  EXPECT_TRUE(fs::exists(dir / "gradient_0.csv"));
  EXPECT_TRUE(fs::exists(dir / "fields_0.vtk"));
  EXPECT_EQ(io::load_mesh(dir / "mesh_0.off").num_edges(), 480);
  fs::remove_all(dir);
}

TEST(Convergence, NeedsExactSolution)
{
  ExperimentConfig c;
  c.solution = "none";
  c.rhs = "one";
  EXPECT_THROW(run_convergence(c, false), ConfigError);
}

TEST(Adaptive, SingularTraceHasEffectivity)
{
  ExperimentConfig c;
  c.solution = "singular";
  c.mode = RefinementMode::adaptive;
  c.rounds = 6;
  c.output_dir = scratch("adaptive").string();
  const auto t = run_adaptive(c);
  ASSERT_TRUE(t.completed) << t.failure;
  std::istringstream csv(slurp(fs::path(c.output_dir) / "adaptive.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "round,dof,eta,e,De,Die,Dre,kappa");
  int rows = 0;
  while (std::getline(csv, line))
  {
    EXPECT_EQ(split(line).size(), 8u);
    ++rows;
  }
  EXPECT_EQ(rows, 6);
  fs::remove_all(c.output_dir);
}

TEST(Adaptive, StarWithoutExactSolutionOmitsErrors)
{
  ExperimentConfig c;
  c.surface = "star";
  c.solution = "none";
  c.rhs = "x1x2";
  c.mode = RefinementMode::adaptive;
  c.rounds = 2;
  const auto t = run_adaptive(c, false);
  ASSERT_TRUE(t.completed) << t.failure;
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "round,dof,eta");
}

TEST(Adaptive, InvalidThetaIsAConfigError)
{
  ExperimentConfig c;
  c.theta = 1.5;
  EXPECT_THROW(run_adaptive(c, false), ConfigError);
}

TEST(ProjectMesh, NoisyIcosphereLandsOnSurface)
{
  const auto dir = scratch("project");
  fs::create_directories(dir);
  auto ico = icosphere(2);
  std::vector<Vec3> v = ico.vertices();
  for (Vec3& x : v)
    x += 1e-3 * Vec3(surfcr::testing::uniform(-1, 1), surfcr::testing::uniform(-1, 1),
                     surfcr::testing::uniform(-1, 1));
  io::save_mesh(SurfaceMesh(v, ico.triangles()), dir / "noisy.obj");
  ExperimentConfig c;
  c.mesh_path = (dir / "noisy.obj").string();
  const auto out = project_mesh(c, dir / "projected.obj");
  const auto back = io::load_mesh(dir / "projected.obj");
  for (const Vec3& x : back.vertices())
    EXPECT_LE(std::abs(x.squaredNorm() - 1.0), 1e-12);
  EXPECT_EQ(back.triangles(), ico.triangles());
  EXPECT_EQ(out.num_vertices(), ico.num_vertices());
  fs::remove_all(dir);
}

TEST(ProjectMesh, OnSurfaceInputIsUnchanged)
{
  const auto dir = scratch("project_same");
  fs::create_directories(dir);
  const auto s = geometry::dziuk_surface();
  const auto m = mapped_icosphere(s, 2);
  io::save_mesh(m, dir / "dziuk.off");
  ExperimentConfig c;
  c.surface = "dziuk";
  c.mesh_path = (dir / "dziuk.off").string();
  const auto out = project_mesh(c, dir / "out.off");
  for (int i = 0; i < m.num_vertices(); ++i)
    EXPECT_LE((out.vertices()[i] - m.vertices()[i]).norm(), 1e-12);
  fs::remove_all(dir);
}

TEST(ProjectMesh, OpenMeshIsRejected)
{
  const auto dir = scratch("project_open");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "open.off");
    f << "OFF\n3 1 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n";
  }
  ExperimentConfig c;
  c.mesh_path = (dir / "open.off").string();
  EXPECT_THROW(project_mesh(c, dir / "out.off"), NonManifold);
  fs::remove_all(dir);
}

TEST(ProjectMesh, FailureNamesTheVertex)
{
  const auto dir = scratch("project_fail");
  fs::create_directories(dir);
  auto ico = icosphere(1);
  std::vector<Vec3> v = ico.vertices();
  v[17] = Vec3::Zero();
  io::save_mesh(SurfaceMesh(v, ico.triangles()), dir / "bad.off");
  ExperimentConfig c;
  c.mesh_path = (dir / "bad.off").string();
  try
  {
    project_mesh(c, dir / "out.off");
    FAIL() << "expected a failure";
  }
  catch (const NoConvergence& e)
  {
    EXPECT_NE(std::string(e.what()).find("vertex 17"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Describe, MentionsCounts)
{
  ExperimentConfig c;
  c.surface = "star";
  c.solution = "none";
  c.rhs = "one";
  const auto s = describe(c);
  EXPECT_NE(s.find("star"), std::string::npos);
  EXPECT_NE(s.find("480"), std::string::npos);
}
