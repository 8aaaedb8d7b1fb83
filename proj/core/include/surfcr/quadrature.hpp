#pragma once

#include <surfcr/geometry.hpp>

#include <array>
#include <functional>
#include <vector>

namespace surfcr::quadrature
{

/// Rule on the reference triangle; weights are normalized to sum to one so
/// that the integral over T is area(T) * sum_i w_i f(x_i).
struct TriangleRule
{
  std::vector<std::array<double, 3>> points; // barycentric
  std::vector<double> weights;
  int exact_degree;
};

/// Rule on [0, 1]; weights sum to one.
struct EdgeRule
{
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree;
};

/// Smallest shipped rule that is exact for polynomials of the given degree.
/// Degrees 1, 2 and 4 use symmetric rules (centroid, 3-point interior,
/// 6-point Dunavant); higher degrees use a collapsed Gauss-Legendre product.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre on [0, 1] with ceil((degree + 1) / 2) points.
EdgeRule edge_rule(int degree);

/// n Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

double integrate_face(const std::function<double(const Vec3&)>& f,
                      const std::array<Vec3, 3>& vertices,
                      const TriangleRule& rule);

double integrate_edge(const std::function<double(const Vec3&)>& f,
                      const Vec3& a, const Vec3& b, const EdgeRule& rule);

} // namespace surfcr::quadrature
