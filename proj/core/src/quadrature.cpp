#include <surfcr/quadrature.hpp>

#include <surfcr/exceptions.hpp>

#include <cmath>
#include <numbers>

namespace surfcr::quadrature
{

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights)
{
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

TriangleRule triangle_rule(int degree)
{
  if (degree <= 1)
    return {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}, 1};
  if (degree == 2)
  {
    constexpr double a = 2.0 / 3, b = 1.0 / 6;
    return {{{a, b, b}, {b, a, b}, {b, b, a}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2};
  }
  if (degree <= 4)
  {
    // Dunavant degree 4.
    constexpr double a1 = 0.44594849091596488631832925388305;
    constexpr double w1 = 0.22338158967801146569500700843312;
    constexpr double a2 = 0.091576213509770743459571463402202;
    constexpr double w2 = 0.10995174365532186763832632490021;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    return {{{a1, a1, b1},
             {a1, b1, a1},
             {b1, a1, a1},
             {a2, a2, b2},
             {a2, b2, a2},
             {b2, a2, a2}},
            {w1, w1, w1, w2, w2, w2},
            4};
  }

  // Collapsed product: x = s, y = t (1 - s) with Jacobian (1 - s). A degree
  // d polynomial becomes degree d + 1 in s and d in t.
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  TriangleRule rule;
  rule.exact_degree = 2 * n - 2;
  for (int i = 0; i < n; ++i)
  {
    const double s = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j)
    {
      const double t = 0.5 * (x[j] + 1.0);
      const double l1 = s, l2 = t * (1.0 - s);
      rule.points.push_back({1.0 - l1 - l2, l1, l2});
      // 0.25 from the two interval maps, 2 from the reference area 1/2.
      rule.weights.push_back(0.5 * w[i] * w[j] * (1.0 - s));
    }
  }
  return rule;
}

EdgeRule edge_rule(int degree)
{
  const int n = std::max(1, (degree + 2) / 2);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  EdgeRule rule;
  rule.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
  {
    rule.points.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

double integrate_face(const std::function<double(const Vec3&)>& f,
                      const std::array<Vec3, 3>& v, const TriangleRule& rule)
{
  const double area = 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm();
  if (!(area > 0.0))
    throw DegenerateTriangle("integrate_face: zero area");
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const auto& l = rule.points[q];
    s += rule.weights[q] * f(l[0] * v[0] + l[1] * v[1] + l[2] * v[2]);
  }
  return area * s;
}

double integrate_edge(const std::function<double(const Vec3&)>& f,
                      const Vec3& a, const Vec3& b, const EdgeRule& rule)
{
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const double t = rule.points[q];
    s += rule.weights[q] * f((1.0 - t) * a + t * b);
  }
  return (b - a).norm() * s;
}

} // namespace surfcr::quadrature
