#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <functional>
#include <string>

namespace surfcr
{

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace geometry
{

/// Closed surface given as the zero level set of a smooth function phi.
///
/// The normal, closest-point projection and mean curvature are all derived
/// from phi and its first two derivatives; no signed distance is formed.
struct LevelSetSurface
{
  std::string name;
  std::function<double(const Vec3&)> phi;
  std::function<Vec3(const Vec3&)> grad_phi;
  std::function<Mat3(const Vec3&)> hess_phi;
  double bounding_radius = 1.0;

  /// Optional bijection from the unit sphere onto the surface, used to seed
  /// initial meshes from an icosphere. Empty means radial root finding.
  std::function<Vec3(const Vec3&)> from_unit_sphere;
};

/// phi = |x|^2 - 1
LevelSetSurface unit_sphere();

/// phi = (x1 - x3^2)^2 + x2^2 + x3^2 - 1
LevelSetSurface dziuk_surface();

/// phi = 400 (x1^2 x2^2 + x2^2 x3^2 + x1^2 x3^2) - (1 - |x|^2)^3 - 40
LevelSetSurface star_surface();

/// Looks up "sphere", "dziuk" or "star". Throws surfcr::Error otherwise.
LevelSetSurface surface_by_name(const std::string& name);

/// Scalar field on R^3 together with its first and second derivatives.
struct AmbientScalarField
{
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;
};

AmbientScalarField constant_field(double c);
/// a . x + b
AmbientScalarField linear_field(const Vec3& a, double b = 0.0);
/// x_i x_j (0-based indices)
AmbientScalarField product_field(int i, int j);

/// u = sin^lambda(theta) sin(varphi) in spherical coordinates, extended to
/// R^3 as x2 * rho^(lambda - 1) with rho = sqrt(x1^2 + x2^2). Derivatives
/// are set to zero on the x3 axis where they are singular for lambda < 1.
AmbientScalarField singular_sphere_field(double lambda);

/// Right-hand side of -Lap_G u + u = f for singular_sphere_field on the
/// unit sphere: (1 + lambda + lambda^2) s^lambda sin(varphi)
///   + (1 - lambda^2) s^(lambda - 2) sin(varphi), with s = sin(theta).
/// Returns 0 on the poles.
double singular_sphere_rhs(double lambda, const Vec3& x);

inline constexpr double regularity_tolerance = 1e-12;

/// grad phi / |grad phi|. Throws DegenerateGradient when |grad phi| < eps.
Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& x,
                 double eps = regularity_tolerance);

/// Closest point p on {phi = 0}: Newton iteration on the Lagrange system
///   p - x + mu grad phi(p) = 0,  phi(p) = 0
/// with backtracking on the residual norm. Throws NoConvergence.
Vec3 closest_point(const LevelSetSurface& surface, const Vec3& x,
                   double tol = 1e-12, int max_iter = 50);

/// Single Newton step x - phi(x) grad phi(x) / |grad phi(x)|^2.
Vec3 first_order_projection(const LevelSetSurface& surface, const Vec3& x);

/// Mean curvature sum div(n) = (tr H - n^T H n) / |grad phi|.
double normal_divergence(const LevelSetSurface& surface, const Vec3& x);

/// (I - n n^T) grad u at x.
Vec3 tangential_gradient(const LevelSetSurface& surface,
                         const AmbientScalarField& u, const Vec3& x);

/// Lap_G u = Lap u - (grad u . n) div n - n^T (hess u) n at a point on the
/// surface. Throws NotOnSurface if |phi(x)| > 1e-8.
double laplace_beltrami_ambient(const LevelSetSurface& surface,
                                const AmbientScalarField& u, const Vec3& x);

/// f = -Lap_G u + u evaluated at closest_point(x), so it may be sampled
/// anywhere in the tubular neighbourhood.
std::function<double(const Vec3&)>
manufactured_rhs(const LevelSetSurface& surface, const AmbientScalarField& u);

/// Image of a unit-sphere point on the surface: the surface's own
/// from_unit_sphere map if set, otherwise the root of phi along the ray.
Vec3 map_from_unit_sphere(const LevelSetSurface& surface, const Vec3& y);

} // namespace geometry
} // namespace surfcr
