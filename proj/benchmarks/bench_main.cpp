#include <surfcr/cr_fem.hpp>
#include <surfcr/estimator.hpp>
#include <surfcr/mesh.hpp>
#include <surfcr/recovery.hpp>
#include <surfcr/solver.hpp>

#include <benchmark/benchmark.h>

using namespace surfcr;

namespace
{

double load(const Vec3& x) { return 7 * x[0] * x[1]; }

void BM_Assemble(benchmark::State& state)
{
  const auto s = geometry::unit_sphere();
  const auto m = icosphere(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(cr::assemble(m, s, load));
  state.counters["dof"] = m.num_edges();
}
BENCHMARK(BM_Assemble)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state)
{
  const auto m = icosphere(int(state.range(0)));
  const auto sys = cr::assemble(m, geometry::unit_sphere(), load);
  for (auto _ : state)
    benchmark::DoNotOptimize(cg_solve(sys));
  state.counters["dof"] = m.num_edges();
}
BENCHMARK(BM_Solve)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Recover(benchmark::State& state)
{
  const auto m = icosphere(int(state.range(0)));
  const CRFunction u = cr::interpolate(m, load);
  for (auto _ : state)
    benchmark::DoNotOptimize(recovery::recover_field(m, u));
  state.counters["dof"] = m.num_edges();
}
BENCHMARK(BM_Recover)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Bisect(benchmark::State& state)
{
  const auto s = geometry::unit_sphere();
  const auto m = icosphere(4);
  std::vector<int> marked;
  for (int f = 0; f < m.num_faces(); ++f)
    if (m.vertex(f, 0)[2] > 0.8)
      marked.push_back(f);
  for (auto _ : state)
    benchmark::DoNotOptimize(bisect(m, marked, s, ProjectionMode::exact));
}
BENCHMARK(BM_Bisect)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
