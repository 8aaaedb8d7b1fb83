#include <surfcr/cr_fem.hpp>
#include <surfcr/estimator.hpp>
#include <surfcr/exceptions.hpp>
#include <surfcr/recovery.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace surfcr;
using namespace surfcr::estimator;

namespace
{

Problem sphere_problem()
{
  Problem p;
  p.rhs = [](const Vec3& x) { return 7 * x[0] * x[1]; };
  p.exact = norms::exact_solution(geometry::unit_sphere(), geometry::product_field(0, 1));
  return p;
}

} // namespace

TEST(Indicators, ZeroForLinearDataOnPlanarMesh)
{
  const Mat3 r = surfcr::testing::random_rotation();
  const auto m = surfcr::testing::planar_patch(6, 0.2, r, Vec3::Zero());
  const Vec3 a = r.col(0) + 0.5 * r.col(1);
  const auto u = cr::interpolate(m, [&](const Vec3& x) { return a.dot(x); });
  const auto g = recovery::recover_field(m, u);
  const auto field = indicators(m, u, g);
  for (double eta : field.eta)
    EXPECT_LT(eta, 1e-12);
}

TEST(Indicators, ConstantRecoveredFieldOnFlatFace)
{
  const SurfaceMesh m({{0, 0, 0}, {2, 0, 0}, {0, 3, 0}}, {{0, 1, 2}}, Boundary::allowed);
  const CRFunction zero{Eigen::VectorXd::Zero(3)};
  const CRVectorFunction g{std::vector<Vec3>(3, Vec3(1, 0, 0))};
  const auto field = indicators(m, zero, g);
  EXPECT_NEAR(field.eta[0], std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(field.global, std::sqrt(3.0), 1e-14);
}

TEST(Indicators, GlobalIsRootSumOfSquares)
{
  const auto m = icosphere(3);
  const CRFunction u{Eigen::VectorXd::Random(m.num_edges())};
  const auto field = indicators(m, u, recovery::recover_field(m, u));
  double s = 0;
  for (double eta : field.eta)
    s += eta * eta;
  EXPECT_NEAR(field.global * field.global, s, 1e-12 * s);
}

TEST(Indicators, InvariantUnderRenumbering)
{
  const auto m = icosphere(2);
  const auto u0 = cr::interpolate(m, [](const Vec3& x) { return std::sin(3 * x[0]) + x[1] * x[2]; });
  const auto f0 = indicators(m, u0, recovery::recover_field(m, u0));

  // Reverse the face list and relabel vertices; the same geometric field
  // must give the same global estimate.
  std::vector<int> perm(m.num_vertices());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::vector<Vec3> v(m.num_vertices());
  for (int i = 0; i < m.num_vertices(); ++i)
    v[perm[i]] = m.vertices()[i];
  std::vector<Triangle> t;
  for (int f = m.num_faces() - 1; f >= 0; --f)
  {
    const auto& tri = m.triangles()[f];
    t.push_back({perm[tri[1]], perm[tri[2]], perm[tri[0]]});
  }
  const SurfaceMesh m2(v, t);
  const auto u1 = cr::interpolate(m2, [](const Vec3& x) { return std::sin(3 * x[0]) + x[1] * x[2]; });
  const auto f1 = indicators(m2, u1, recovery::recover_field(m2, u1));
  EXPECT_NEAR(f0.global, f1.global, 1e-12 * f0.global);
}

TEST(Dorfler, HandExample)
{
  IndicatorField f{{3.0, 4.0}, 5.0};
  EXPECT_EQ(dorfler_mark(f, 0.6), std::vector<int>{1});
}

TEST(Dorfler, ThetaOneMarksAllPositive)
{
  IndicatorField f{{0.5, 0.0, 2.0, 1.0}, std::sqrt(5.25)};
  auto marked = dorfler_mark(f, 1.0);
  std::sort(marked.begin(), marked.end());
  EXPECT_EQ(marked, (std::vector<int>{0, 2, 3}));
}

TEST(Dorfler, EqualIndicatorsAndTieBreak)
{
  for (int n : {4, 10, 37})
  {
    IndicatorField f{std::vector<double>(n, 1.0), std::sqrt(double(n))};
    const auto marked = dorfler_mark(f, 0.5);
    EXPECT_EQ(int(marked.size()), int(std::ceil(0.25 * n)));
    for (std::size_t k = 0; k < marked.size(); ++k)
      EXPECT_EQ(marked[k], int(k));
  }
}

TEST(Dorfler, InvalidTheta)
{
  IndicatorField f{{1.0}, 1.0};
  EXPECT_THROW(dorfler_mark(f, 0.0), Error);
  EXPECT_THROW(dorfler_mark(f, 1.5), Error);
}

TEST(AdaptLoop, SmoothSolutionGrowsQuasiUniformly)
{
  const auto s = geometry::unit_sphere();
  AdaptiveOptions o;
  o.rounds = 6;
  const auto initial = icosphere(2);
  auto diameter_ratio = [](const SurfaceMesh& m)
  {
    double lo = 1e300, hi = 0;
    for (int f = 0; f < m.num_faces(); ++f)
    {
      double d = 0;
      for (int i = 0; i < 3; ++i)
        d = std::max(d, (m.vertex(f, i) - m.vertex(f, (i + 1) % 3)).norm());
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return hi / lo;
  };
  const auto trace = adapt_loop(s, initial, sphere_problem(), o);
  ASSERT_TRUE(trace.completed) << trace.failure;
  ASSERT_EQ(trace.rounds.size(), 6u);
  for (std::size_t k = 1; k < trace.rounds.size(); ++k)
    EXPECT_GT(trace.rounds[k].dof, trace.rounds[k - 1].dof);
  EXPECT_LE(diameter_ratio(trace.final_mesh), 10 * diameter_ratio(initial));
  for (const auto& r : trace.rounds)
  {
    ASSERT_TRUE(r.kappa.has_value());
    EXPECT_NEAR(*r.kappa, *r.De > 0 ? r.eta / *r.De : 0.0, 1e-15);
  }
}

TEST(AdaptLoop, EffectivityApproachesOneOnUniformSmoothProblem)
{
  const auto s = geometry::unit_sphere();
  std::vector<double> kappa;
  for (int level = 2; level <= 4; ++level)
  {
    AdaptiveOptions o;
    o.rounds = 1;
    const auto t = adapt_loop(s, icosphere(level), sphere_problem(), o);
    kappa.push_back(*t.rounds[0].kappa);
  }
  EXPECT_LT(std::abs(kappa.back() - 1.0), std::abs(kappa.front() - 1.0));
  EXPECT_NEAR(kappa.back(), 1.0, 0.02);
}

TEST(AdaptLoop, StarSurfaceHighCurvatureBandImproves)
{
  // Without an exact solution only indicators are recorded. The mean
  // indicator over faces near the high-curvature spikes decreases.
  const auto s = geometry::star_surface();
  Problem p;
  p.rhs = [](const Vec3& x) { return x[0] * x[1]; };
  AdaptiveOptions o;
  o.rounds = 10;
  std::vector<double> band;
  o.on_round = [&](const AdaptiveRecord& rec, const SurfaceMesh& m, const CRFunction& uh,
                   const CRVectorFunction& g)
  {
    EXPECT_FALSE(rec.kappa.has_value());
    EXPECT_FALSE(rec.e.has_value());
    const auto field = indicators(m, uh, g);
    double sum = 0;
    int count = 0;
    for (int f = 0; f < m.num_faces(); ++f)
    {
      const Vec3 c = (m.vertex(f, 0) + m.vertex(f, 1) + m.vertex(f, 2)) / 3;
      // Spikes of the star point along the coordinate axes.
      const double along_axis = c.cwiseAbs().maxCoeff() / c.norm();
      if (along_axis > 0.95)
      {
        sum += field.eta[f];
        ++count;
      }
    }
    band.push_back(sum / std::max(count, 1));
  };
  const auto trace = adapt_loop(s, mapped_icosphere(s, 2), p, o);
  ASSERT_TRUE(trace.completed) << trace.failure;
  for (std::size_t k = 4; k < band.size(); ++k)
    EXPECT_LT(band[k], band[k - 1]);
}

TEST(AdaptLoop, SolverFailureReturnsPartialTrace)
{
  AdaptiveOptions o;
  o.rounds = 3;
  o.solver.max_iter = 2;
  o.solver.tol = 1e-14;
  const auto trace = adapt_loop(geometry::unit_sphere(), icosphere(2), sphere_problem(), o);
  EXPECT_FALSE(trace.completed);
  EXPECT_TRUE(trace.rounds.empty());
  EXPECT_FALSE(trace.failure.empty());
}

TEST(AdaptLoop, RejectsBadTheta)
{
  AdaptiveOptions o;
  o.theta = 1.5;
  EXPECT_THROW(adapt_loop(geometry::unit_sphere(), icosphere(1), sphere_problem(), o), Error);
}
