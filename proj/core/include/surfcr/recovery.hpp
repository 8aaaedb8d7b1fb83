#pragma once

#include <surfcr/cr_fem.hpp>
#include <surfcr/mesh.hpp>

#include <Eigen/SVD>

#include <array>
#include <span>
#include <vector>

namespace surfcr::recovery
{

/// Orthonormal frame at an edge midpoint. phi3 approximates the surface
/// normal; (phi1, phi2) span the parameter plane.
struct PatchFrame
{
  Vec3 origin;
  Vec3 phi1;
  Vec3 phi2;
  Vec3 phi3;
  int edge = -1;

  Vec2 parameter(const Vec3& x) const
  {
    const Vec3 d = x - origin;
    return {d.dot(phi1), d.dot(phi2)};
  }
  double height(const Vec3& x) const { return (x - origin).dot(phi3); }
};

/// Frame with the given normal: phi1 is the projection of the coordinate
/// axis least aligned with the normal, phi2 = phi3 x phi1.
PatchFrame frame_from_normal(const Vec3& origin, const Vec3& normal);

/// phi3 = normalized sum of the two adjacent face normals. Throws
/// DegenerateFrame if the face normals (nearly) cancel.
PatchFrame local_frame(const SurfaceMesh& mesh, int edge);

/// c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2 in the (unscaled) parameters.
struct QuadraticFit
{
  std::array<double, 6> coefficients{};
  double residual_norm = 0.0;
  /// Smallest over largest singular value of the scaled Vandermonde matrix.
  double condition = 0.0;

  Vec2 gradient_at_origin() const { return {coefficients[1], coefficients[2]}; }
  double operator()(const Vec2& xi) const;
};

inline constexpr double rank_tolerance = 1e-8;
inline constexpr int max_patch_layers = 10;

/// Least-squares fitter for full quadratics over a fixed parameter set.
/// Parameters are divided by `scale` (the patch radius when <= 0 is passed)
/// before the SVD so that the rank test does not depend on the mesh size.
class QuadraticFitter
{
public:
  explicit QuadraticFitter(std::span<const Vec2> parameters,
                           double scale = 0.0);

  /// Number of singular values above rank_tolerance * largest.
  int rank() const { return rank_; }
  bool full_rank() const { return rank_ == 6; }
  double condition() const { return condition_; }
  double scale() const { return scale_; }

  /// Throws RankDeficient unless full_rank().
  QuadraticFit fit(std::span<const double> samples) const;

private:
  Eigen::MatrixXd vandermonde_;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_;
  double scale_ = 1.0;
  double condition_ = 0.0;
  int rank_ = 0;
};

QuadraticFit fit_quadratic(std::span<const Vec2> parameters,
                           std::span<const double> samples,
                           double scale = 0.0);

/// Element layers around an edge midpoint together with the sampled data.
struct Patch
{
  PatchFrame frame;
  int layers = 0;
  /// Edges whose midpoints are sampled; member_edges[0] is the origin.
  std::vector<int> member_edges;
  std::vector<int> faces;
  std::vector<Vec2> parameters;
  std::vector<double> heights;
  std::vector<double> samples;
};

/// Grows L(x_i, n) for n = 1, 2, ... (faces sharing an edge with the
/// previous layer) until the midpoints of all member faces admit a unique
/// quadratic least-squares fit. Throws PatchGrowthExceeded past
/// max_patch_layers.
Patch build_patch(const SurfaceMesh& mesh, int edge, const CRFunction& u);

/// Tangential gradient at the frame origin from the two quadratic fits:
/// heights s(xi) of the sample points and values p(xi). With the parametric
/// Jacobian J = [e1, e2, (ds/dxi)^T] (3x2, frame coordinates) the local
/// gradient is J (J^T J)^{-1} grad p(0), mapped back by the frame.
Vec3 recover_gradient(const PatchFrame& frame, std::span<const Vec3> points,
                      std::span<const double> samples);

Vec3 recover_gradient(const Patch& patch);

Vec3 recovered_gradient_at(const SurfaceMesh& mesh, int edge,
                           const CRFunction& u);

/// Recovered gradient at every edge midpoint. Failures are collected and
/// reported together with their edge ids.
CRVectorFunction recover_field(const SurfaceMesh& mesh, const CRFunction& u);

} // namespace surfcr::recovery
