#include <surfcr/geometry.hpp>

#include <surfcr/exceptions.hpp>

#include <Eigen/Dense>

#include <cmath>

namespace surfcr::geometry
{

namespace
{

// Radial root of phi along the ray through the unit vector d. Requires
// phi(0) < 0 and phi increasing along the ray (star-shaped surfaces).
Vec3 radial_root(const LevelSetSurface& s, const Vec3& d)
{
  double lo = 0.0;
  double hi = s.bounding_radius;
  int grow = 0;
  while (s.phi(hi * d) < 0.0)
  {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60)
      throw Error("radial projection: surface '" + s.name
                  + "' is not star-shaped about the origin");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    (s.phi(mid * d) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * d;
}

} // namespace

LevelSetSurface unit_sphere()
{
  LevelSetSurface s;
  s.name = "sphere";
  s.phi = [](const Vec3& x) { return x.squaredNorm() - 1.0; };
  s.grad_phi = [](const Vec3& x) -> Vec3 { return 2.0 * x; };
  s.hess_phi = [](const Vec3&) -> Mat3 { return 2.0 * Mat3::Identity(); };
  s.bounding_radius = 1.0;
  s.from_unit_sphere = [](const Vec3& y) -> Vec3 { return y.normalized(); };
  return s;
}

LevelSetSurface dziuk_surface()
{
  LevelSetSurface s;
  s.name = "dziuk";
  s.phi = [](const Vec3& x)
  {
    const double a = x[0] - x[2] * x[2];
    return a * a + x[1] * x[1] + x[2] * x[2] - 1.0;
  };
  s.grad_phi = [](const Vec3& x) -> Vec3
  {
    const double a = x[0] - x[2] * x[2];
    return {2.0 * a, 2.0 * x[1], -4.0 * x[2] * a + 2.0 * x[2]};
  };
  s.hess_phi = [](const Vec3& x) -> Mat3
  {
    const double a = x[0] - x[2] * x[2];
    Mat3 h = Mat3::Zero();
    h(0, 0) = 2.0;
    h(1, 1) = 2.0;
    h(0, 2) = h(2, 0) = -4.0 * x[2];
    h(2, 2) = -4.0 * a + 8.0 * x[2] * x[2] + 2.0;
    return h;
  };
  s.bounding_radius = 2.0;
  // (y1 + y3^2, y2, y3) maps the unit sphere exactly onto the surface.
  s.from_unit_sphere = [](const Vec3& y) -> Vec3
  {
    const Vec3 z = y.normalized();
    return {z[0] + z[2] * z[2], z[1], z[2]};
  };
  return s;
}

LevelSetSurface star_surface()
{
  LevelSetSurface s;
  s.name = "star";
  s.phi = [](const Vec3& x)
  {
    const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
    const double w = 1.0 - a - b - c;
    return 400.0 * (a * b + b * c + a * c) - w * w * w - 40.0;
  };
  s.grad_phi = [](const Vec3& x) -> Vec3
  {
    const double r2 = x.squaredNorm();
    const double w = 1.0 - r2;
    Vec3 g;
    for (int i = 0; i < 3; ++i)
      g[i] = 800.0 * x[i] * (r2 - x[i] * x[i]) + 6.0 * x[i] * w * w;
    return g;
  };
  s.hess_phi = [](const Vec3& x) -> Mat3
  {
    const double r2 = x.squaredNorm();
    const double w = 1.0 - r2;
    Mat3 h;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
      {
        if (i == j)
          h(i, i) = 800.0 * (r2 - x[i] * x[i]) + 6.0 * w * w
                    - 24.0 * x[i] * x[i] * w;
        else
          h(i, j) = 1600.0 * x[i] * x[j] - 24.0 * x[i] * x[j] * w;
      }
    return h;
  };
  s.bounding_radius = 2.5;
  return s;
}

LevelSetSurface surface_by_name(const std::string& name)
{
  if (name == "sphere")
    return unit_sphere();
  if (name == "dziuk")
    return dziuk_surface();
  if (name == "star")
    return star_surface();
  throw Error("unknown surface '" + name
              + "' (expected sphere, dziuk or star)");
}

AmbientScalarField constant_field(double c)
{
  return {[c](const Vec3&) { return c; },
          [](const Vec3&) -> Vec3 { return Vec3::Zero(); },
          [](const Vec3&) -> Mat3 { return Mat3::Zero(); }};
}

AmbientScalarField linear_field(const Vec3& a, double b)
{
  return {[a, b](const Vec3& x) { return a.dot(x) + b; },
          [a](const Vec3&) -> Vec3 { return a; },
          [](const Vec3&) -> Mat3 { return Mat3::Zero(); }};
}

AmbientScalarField product_field(int i, int j)
{
  return {[i, j](const Vec3& x) { return x[i] * x[j]; },
          [i, j](const Vec3& x) -> Vec3
          {
            Vec3 g = Vec3::Zero();
            g[i] += x[j];
            g[j] += x[i];
            return g;
          },
          [i, j](const Vec3&) -> Mat3
          {
            Mat3 h = Mat3::Zero();
            h(i, j) += 1.0;
            h(j, i) += 1.0;
            return h;
          }};
}

AmbientScalarField singular_sphere_field(double lambda)
{
  const double a = lambda - 1.0;
  AmbientScalarField u;
  u.value = [lambda](const Vec3& x)
  {
    const double rho = std::hypot(x[0], x[1]);
    if (rho == 0.0)
      return 0.0;
    // sin(theta)^lambda * sin(varphi) with sin(theta) = rho / |x|
    return std::pow(rho / x.norm(), lambda) * x[1] / rho;
  };
  // Derivatives of the extension x2 * rho^(lambda - 1). It agrees with the
  // value above on the unit sphere only, which is all the tangential
  // operators need.
  u.gradient = [a](const Vec3& x) -> Vec3
  {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    if (rho2 == 0.0)
      return Vec3::Zero();
    const double g = std::pow(rho2, 0.5 * a);
    const double dg = a * std::pow(rho2, 0.5 * a - 1.0); // d g / d x_i = dg x_i
    return {x[1] * dg * x[0], g + x[1] * dg * x[1], 0.0};
  };
  u.hessian = [a](const Vec3& x) -> Mat3
  {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    Mat3 h = Mat3::Zero();
    if (rho2 == 0.0)
      return h;
    const double dg = a * std::pow(rho2, 0.5 * a - 1.0);
    const double ddg = a * (a - 2.0) * std::pow(rho2, 0.5 * a - 2.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
      {
        const double gij = (i == j ? dg : 0.0) + ddg * x[i] * x[j];
        h(i, j) = (i == 1 ? dg * x[j] : 0.0) + (j == 1 ? dg * x[i] : 0.0)
                  + x[1] * gij;
      }
    return h;
  };
  return u;
}

double singular_sphere_rhs(double lambda, const Vec3& x)
{
  const double rho = std::hypot(x[0], x[1]);
  if (rho == 0.0)
    return 0.0;
  const double s = rho / x.norm();
  const double sin_varphi = x[1] / rho;
  return (1.0 + lambda + lambda * lambda) * std::pow(s, lambda) * sin_varphi
         + (1.0 - lambda * lambda) * std::pow(s, lambda - 2.0) * sin_varphi;
}

Vec3 unit_normal(const LevelSetSurface& surface, const Vec3& x, double eps)
{
  const Vec3 g = surface.grad_phi(x);
  const double len = g.norm();
  if (!(len >= eps))
    throw DegenerateGradient("|grad phi| below regularity threshold on surface '"
                             + surface.name + "'");
  return g / len;
}

Vec3 first_order_projection(const LevelSetSurface& surface, const Vec3& x)
{
  const Vec3 g = surface.grad_phi(x);
  const double g2 = g.squaredNorm();
  if (!(std::sqrt(g2) >= regularity_tolerance))
    throw DegenerateGradient("first-order projection: vanishing gradient");
  return x - surface.phi(x) / g2 * g;
}

Vec3 closest_point(const LevelSetSurface& surface, const Vec3& x, double tol,
                   int max_iter)
{
  using Vec4 = Eigen::Vector4d;
  using Mat4 = Eigen::Matrix4d;

  const Vec3 g0 = surface.grad_phi(x);
  const double g0sq = g0.squaredNorm();
  if (!(std::sqrt(g0sq) >= regularity_tolerance))
    throw DegenerateGradient("closest_point: vanishing gradient at start");

  double mu = surface.phi(x) / g0sq;
  Vec3 p = x - mu * g0;

  auto residual = [&](const Vec3& q, double m) -> Vec4
  {
    Vec4 r;
    r.head<3>() = q - x + m * surface.grad_phi(q);
    r[3] = surface.phi(q);
    return r;
  };

  for (int it = 0; it <= max_iter; ++it)
  {
    const double phi_p = surface.phi(p);
    const Vec3 n = unit_normal(surface, p);
    const Vec3 d = x - p;
    const double tangential = (d - d.dot(n) * n).norm();
    if (std::abs(phi_p) <= tol && tangential <= tol * (1.0 + d.norm()))
      return p;
    if (it == max_iter)
      break;

    const Vec3 g = surface.grad_phi(p);
    Mat4 J = Mat4::Zero();
    J.topLeftCorner<3, 3>() = Mat3::Identity() + mu * surface.hess_phi(p);
    J.block<3, 1>(0, 3) = g;
    J.block<1, 3>(3, 0) = g.transpose();
    const Vec4 r = residual(p, mu);
    const Vec4 step = J.fullPivLu().solve(-r);

    // Backtrack on the residual norm.
    const double r0 = r.norm();
    double t = 1.0;
    Vec3 p_new = p + step.head<3>();
    double mu_new = mu + step[3];
    while (residual(p_new, mu_new).norm() > (1.0 - 1e-4 * t) * r0 && t > 1e-6)
    {
      t *= 0.5;
      p_new = p + t * step.head<3>();
      mu_new = mu + t * step[3];
    }
    if (t <= 1e-6)
    {
      // No descent left: fall back to a plain step onto the level set.
      p_new = first_order_projection(surface, p);
      mu_new = (x - p_new).dot(surface.grad_phi(p_new))
               / surface.grad_phi(p_new).squaredNorm();
    }
    p = p_new;
    mu = mu_new;
  }
  throw NoConvergence("closest_point did not converge within "
                      + std::to_string(max_iter) + " iterations on surface '"
                      + surface.name + "'");
}

double normal_divergence(const LevelSetSurface& surface, const Vec3& x)
{
  const Vec3 g = surface.grad_phi(x);
  const double len = g.norm();
  if (!(len >= regularity_tolerance))
    throw DegenerateGradient("normal_divergence: vanishing gradient");
  const Vec3 n = g / len;
  const Mat3 h = surface.hess_phi(x);
  return (h.trace() - n.dot(h * n)) / len;
}

Vec3 tangential_gradient(const LevelSetSurface& surface,
                         const AmbientScalarField& u, const Vec3& x)
{
  const Vec3 n = unit_normal(surface, x);
  const Vec3 g = u.gradient(x);
  return g - g.dot(n) * n;
}

double laplace_beltrami_ambient(const LevelSetSurface& surface,
                                const AmbientScalarField& u, const Vec3& x)
{
  if (!(std::abs(surface.phi(x)) <= 1e-8))
    throw NotOnSurface("laplace_beltrami_ambient: point is not on surface '"
                       + surface.name + "'");
  const Vec3 n = unit_normal(surface, x);
  const Mat3 h = u.hessian(x);
  return h.trace() - u.gradient(x).dot(n) * normal_divergence(surface, x)
         - n.dot(h * n);
}

std::function<double(const Vec3&)>
manufactured_rhs(const LevelSetSurface& surface, const AmbientScalarField& u)
{
  return [surface, u](const Vec3& x)
  {
    const Vec3 p = closest_point(surface, x);
    return -laplace_beltrami_ambient(surface, u, p) + u.value(p);
  };
}

Vec3 map_from_unit_sphere(const LevelSetSurface& surface, const Vec3& y)
{
  if (surface.from_unit_sphere)
    return surface.from_unit_sphere(y);
  return radial_root(surface, y.normalized());
}

} // namespace surfcr::geometry
