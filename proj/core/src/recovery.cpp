#include <surfcr/recovery.hpp>

#include <surfcr/exceptions.hpp>
#include <surfcr/parallel.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace surfcr::recovery
{

PatchFrame frame_from_normal(const Vec3& origin, const Vec3& normal)
{
  PatchFrame frame;
  frame.origin = origin;
  frame.phi3 = normal.normalized();
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(frame.phi3[i]) < std::abs(frame.phi3[axis]))
      axis = i;
  const Vec3 seed = Vec3::Unit(axis);
  frame.phi1 = (seed - seed.dot(frame.phi3) * frame.phi3).normalized();
  frame.phi2 = frame.phi3.cross(frame.phi1);
  return frame;
}

PatchFrame local_frame(const SurfaceMesh& mesh, int edge)
{
  const Edge& e = mesh.edges()[edge];
  Vec3 n = mesh.face_normal(e.faces[0]);
  if (e.faces[1] >= 0)
    n += mesh.face_normal(e.faces[1]);
  if (n.norm() < 1e-10)
    throw DegenerateFrame("edge " + std::to_string(edge)
                          + ": adjacent face normals cancel");
  PatchFrame frame = frame_from_normal(mesh.edge_midpoint(edge), n);
  frame.edge = edge;
  return frame;
}

double QuadraticFit::operator()(const Vec2& xi) const
{
  const auto& c = coefficients;
  return c[0] + c[1] * xi[0] + c[2] * xi[1] + c[3] * xi[0] * xi[0]
         + c[4] * xi[0] * xi[1] + c[5] * xi[1] * xi[1];
}

QuadraticFitter::QuadraticFitter(std::span<const Vec2> parameters,
                                 double scale)
{
  if (scale <= 0.0)
  {
    scale = 0.0;
    for (const Vec2& xi : parameters)
      scale = std::max(scale, xi.norm());
  }
  scale_ = scale > 0.0 ? scale : 1.0;

  const Eigen::Index m = static_cast<Eigen::Index>(parameters.size());
  vandermonde_.resize(m, 6);
  for (Eigen::Index j = 0; j < m; ++j)
  {
    const double x = parameters[j][0] / scale_;
    const double y = parameters[j][1] / scale_;
    vandermonde_.row(j) << 1.0, x, y, x * x, x * y, y * y;
  }
  if (m == 0)
    return;
  svd_.compute(vandermonde_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd_.singularValues();
  const double largest = sv[0];
  rank_ = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tolerance * largest)
      ++rank_;
  condition_ = sv.size() == 6 ? sv[5] / largest : 0.0;
}

QuadraticFit QuadraticFitter::fit(std::span<const double> samples) const
{
  if (!full_rank())
    throw RankDeficient("quadratic fit: only " + std::to_string(rank_)
                        + " of 6 singular values above tolerance");
  const Eigen::Map<const Eigen::VectorXd> b(samples.data(),
                                            static_cast<Eigen::Index>(samples.size()));
  const Eigen::VectorXd c = svd_.solve(b);

  QuadraticFit fit;
  const double s = scale_;
  fit.coefficients = {c[0],         c[1] / s,     c[2] / s,
                      c[3] / (s * s), c[4] / (s * s), c[5] / (s * s)};
  fit.residual_norm = (vandermonde_ * c - b).norm();
  fit.condition = condition_;
  return fit;
}

QuadraticFit fit_quadratic(std::span<const Vec2> parameters,
                           std::span<const double> samples, double scale)
{
  return QuadraticFitter(parameters, scale).fit(samples);
}

namespace
{

Vec3 gradient_from_fits(const PatchFrame& frame, const Vec2& ds,
                        const Vec2& dp)
{
  Eigen::Matrix<double, 3, 2> jac;
  jac << 1.0, 0.0, 0.0, 1.0, ds[0], ds[1];
  const Eigen::Matrix2d metric = jac.transpose() * jac;
  const Vec3 local = jac * metric.ldlt().solve(dp);
  return local[0] * frame.phi1 + local[1] * frame.phi2 + local[2] * frame.phi3;
}

} // namespace

Vec3 recover_gradient(const PatchFrame& frame, std::span<const Vec3> points,
                      std::span<const double> samples)
{
  std::vector<Vec2> xi;
  std::vector<double> heights;
  xi.reserve(points.size());
  heights.reserve(points.size());
  for (const Vec3& x : points)
  {
    xi.push_back(frame.parameter(x));
    heights.push_back(frame.height(x));
  }
  const QuadraticFitter fitter(xi);
  const QuadraticFit s = fitter.fit(heights);
  const QuadraticFit p = fitter.fit(samples);
  return gradient_from_fits(frame, s.gradient_at_origin(),
                            p.gradient_at_origin());
}

Patch build_patch(const SurfaceMesh& mesh, int edge, const CRFunction& u)
{
  Patch patch;
  patch.frame = local_frame(mesh, edge);

  auto contains = [](const std::vector<int>& v, int x)
  { return std::find(v.begin(), v.end(), x) != v.end(); };

  for (int f : mesh.edges()[edge].faces)
    if (f >= 0)
      patch.faces.push_back(f);
  patch.member_edges.push_back(edge);

  for (int layer = 1; layer <= max_patch_layers; ++layer)
  {
    if (layer > 1)
    {
      const std::vector<int> previous = patch.faces;
      for (int f : previous)
        for (int e : mesh.face_edges(f))
          for (int g : mesh.edges()[e].faces)
            if (g >= 0 && !contains(patch.faces, g))
              patch.faces.push_back(g);
    }
    for (int f : patch.faces)
      for (int e : mesh.face_edges(f))
        if (!contains(patch.member_edges, e))
          patch.member_edges.push_back(e);

    patch.parameters.clear();
    for (int e : patch.member_edges)
      patch.parameters.push_back(patch.frame.parameter(mesh.edge_midpoint(e)));

    patch.layers = layer;
    if (QuadraticFitter(patch.parameters).full_rank())
    {
      patch.heights.clear();
      patch.samples.clear();
      for (int e : patch.member_edges)
      {
        patch.heights.push_back(patch.frame.height(mesh.edge_midpoint(e)));
        patch.samples.push_back(u.dofs[e]);
      }
      return patch;
    }
  }
  throw PatchGrowthExceeded("edge " + std::to_string(edge)
                            + ": rank condition not met within "
                            + std::to_string(max_patch_layers) + " layers");
}

Vec3 recover_gradient(const Patch& patch)
{
  const QuadraticFitter fitter(patch.parameters);
  const QuadraticFit s = fitter.fit(patch.heights);
  const QuadraticFit p = fitter.fit(patch.samples);
  return gradient_from_fits(patch.frame, s.gradient_at_origin(),
                            p.gradient_at_origin());
}

Vec3 recovered_gradient_at(const SurfaceMesh& mesh, int edge,
                           const CRFunction& u)
{
  return recover_gradient(build_patch(mesh, edge, u));
}

CRVectorFunction recover_field(const SurfaceMesh& mesh, const CRFunction& u)
{
  CRVectorFunction g;
  g.dofs.assign(mesh.num_edges(), Vec3::Zero());
  std::mutex mutex;
  std::vector<std::pair<int, std::string>> failures;
  parallel_for(static_cast<std::size_t>(mesh.num_edges()),
               [&](std::size_t e)
               {
                 try
                 {
                   g.dofs[e] = recovered_gradient_at(mesh, static_cast<int>(e), u);
                 }
                 catch (const Error& err)
                 {
                   std::lock_guard lock(mutex);
                   failures.emplace_back(static_cast<int>(e), err.what());
                 }
               });
  if (!failures.empty())
  {
    std::sort(failures.begin(), failures.end());
    std::ostringstream msg;
    msg << "gradient recovery failed on " << failures.size() << " edge(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i)
      msg << " [" << failures[i].first << ": " << failures[i].second << "]";
    throw Error(msg.str());
  }
  return g;
}

} // namespace surfcr::recovery
