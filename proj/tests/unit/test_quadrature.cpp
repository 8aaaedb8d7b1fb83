#include <surfcr/quadrature.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace surfcr;
using namespace surfcr::quadrature;

namespace
{

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// int over the reference triangle {(0,0),(1,0),(0,1)} of x^a y^b.
double monomial_integral(int a, int b)
{
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

const std::array<Vec3, 3> reference{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};

} // namespace

TEST(TriangleRule, WeightsSumToOne)
{
  for (int d = 1; d <= 12; ++d)
  {
    const auto r = triangle_rule(d);
    EXPECT_GE(r.exact_degree, d);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-14);
    for (double w : r.weights)
      EXPECT_GT(w, 0.0);
    for (const auto& p : r.points)
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
  }
}

TEST(TriangleRule, MonomialExactness)
{
  for (int d = 1; d <= 12; ++d)
  {
    const auto r = triangle_rule(d);
    for (int a = 0; a <= r.exact_degree; ++a)
      for (int b = 0; a + b <= r.exact_degree; ++b)
      {
        const double q = integrate_face(
            [&](const Vec3& x) { return std::pow(x[0], a) * std::pow(x[1], b); },
            reference, r);
        const double exact = monomial_integral(a, b);
        EXPECT_NEAR(q, exact, 1e-13 * exact) << "degree " << d << " x^" << a << " y^" << b;
      }
  }
}

TEST(TriangleRule, RandomPolynomialOnRandomTriangle)
{
  // A random polynomial of the rule's degree, mapped to a random triangle in
  // space, is integrated against the reference closed form via the affine
  // pull-back.
  for (int d : {1, 2, 4, 6, 8})
  {
    const auto r = triangle_rule(d);
    const int n = r.exact_degree;
    std::vector<std::array<double, 3>> terms;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b)
        terms.push_back({surfcr::testing::uniform(-1, 1), double(a), double(b)});
    const Mat3 rot = surfcr::testing::random_rotation();
    const Vec3 p0(0.3, -1, 2), e1 = rot.col(0) * 1.7, e2 = rot.col(0) * 0.4 + rot.col(1) * 0.9;
    const std::array<Vec3, 3> tri{p0, p0 + e1, p0 + e2};
    const double jac = e1.cross(e2).norm();
    auto local = [&](double s, double t)
    {
      double v = 0;
      for (const auto& [c, a, b] : terms)
        v += c * std::pow(s, a) * std::pow(t, b);
      return v;
    };
    double exact = 0;
    for (const auto& [c, a, b] : terms)
      exact += c * monomial_integral(int(a), int(b));
    exact *= jac;
    // Recover (s, t) from a point of the triangle.
    Eigen::Matrix<double, 3, 2> basis;
    basis << e1, e2;
    const double q = integrate_face(
        [&](const Vec3& x)
        {
          const Eigen::Vector2d st = basis.colPivHouseholderQr().solve(x - p0);
          return local(st[0], st[1]);
        },
        tri, r);
    EXPECT_NEAR(q, exact, 1e-13 * std::max(1.0, std::abs(exact))) << "degree " << d;
  }
}

TEST(TriangleRule, SpecExamples)
{
  EXPECT_NEAR(integrate_face([](const Vec3&) { return 1.0; }, reference, triangle_rule(1)),
              0.5, 1e-15);
  EXPECT_NEAR(integrate_face([](const Vec3& x) { return x[0] * x[0]; }, reference,
                             triangle_rule(2)),
              1.0 / 12, 1e-15);
  auto x4 = [](const Vec3& x) { return std::pow(x[0], 4); };
  EXPECT_NEAR(integrate_face(x4, reference, triangle_rule(4)), 1.0 / 30, 1e-14);
  EXPECT_GT(std::abs(integrate_face(x4, reference, triangle_rule(2)) - 1.0 / 30), 1e-4);
}

TEST(TriangleRule, DunavantDegreeFourHasSixPoints)
{
  const auto r = triangle_rule(4);
  EXPECT_EQ(r.points.size(), 6u);
  EXPECT_EQ(r.exact_degree, 4);
  EXPECT_EQ(triangle_rule(2).points.size(), 3u);
  // Interior points only.
  for (const auto& p : triangle_rule(2).points)
    for (double l : p)
      EXPECT_GT(l, 0.0);
}

TEST(EdgeRule, Basics)
{
  const Vec3 a(0, 0, 0), b(1, 0, 0);
  EXPECT_NEAR(integrate_edge([](const Vec3&) { return 1.0; }, a, b, edge_rule(1)), 1.0, 1e-15);
  EXPECT_NEAR(integrate_edge([](const Vec3& x) { return x[0]; }, a, b, edge_rule(1)), 0.5, 1e-15);
  const auto g2 = edge_rule(3);
  EXPECT_EQ(g2.points.size(), 2u);
  EXPECT_NEAR(integrate_edge([](const Vec3& x) { return std::pow(x[0], 3); }, a, b, g2),
              0.25, 1e-15);
}

TEST(EdgeRule, Exactness)
{
  for (int d = 1; d <= 15; ++d)
  {
    const auto r = edge_rule(d);
    EXPECT_GE(r.exact_degree, d);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-14);
    for (int k = 0; k <= r.exact_degree; ++k)
    {
      double q = 0;
      for (std::size_t i = 0; i < r.points.size(); ++i)
        q += r.weights[i] * std::pow(r.points[i], k);
      EXPECT_NEAR(q, 1.0 / (k + 1), 1e-14);
    }
  }
}

TEST(EdgeRule, ScalesWithLength)
{
  const Vec3 a(1, 2, 3), b(1, 2, 3 + 2.5);
  EXPECT_NEAR(integrate_edge([](const Vec3&) { return 2.0; }, a, b, edge_rule(1)), 5.0, 1e-14);
}
