#include <surfcr/cr_fem.hpp>

#include <surfcr/exceptions.hpp>
#include <surfcr/parallel.hpp>

namespace surfcr
{

DofMap DofMap::for_mesh(const SurfaceMesh& mesh)
{
  DofMap map;
  map.edge_to_dof.resize(mesh.num_edges());
  map.dof_to_edge.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e)
    map.edge_to_dof[e] = map.dof_to_edge[e] = e;
  return map;
}

namespace cr
{

std::array<Vec3, 3> basis_gradients(const std::array<Vec3, 3>& v)
{
  const Vec3 cross = (v[1] - v[0]).cross(v[2] - v[0]);
  const double twice_area = cross.norm();
  if (!(twice_area > 0.0))
    throw DegenerateTriangle("basis_gradients: zero area");
  const Vec3 n = cross / twice_area;
  std::array<Vec3, 3> g;
  for (int i = 0; i < 3; ++i)
  {
    // grad lambda_i = n x (v[i+2] - v[i+1]) / (2 A)
    const Vec3 grad_lambda
        = n.cross(v[(i + 2) % 3] - v[(i + 1) % 3]) / twice_area;
    g[i] = -2.0 * grad_lambda;
  }
  return g;
}

ProjectedQuadrature project_quadrature(const SurfaceMesh& mesh,
                                       const geometry::LevelSetSurface& surface,
                                       const quadrature::TriangleRule& rule)
{
  ProjectedQuadrature q;
  q.rule = rule;
  q.points_per_face = static_cast<int>(rule.points.size());
  const std::size_t total
      = static_cast<std::size_t>(mesh.num_faces()) * q.points_per_face;
  q.points.resize(total);
  q.projected.resize(total);
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t f)
               {
                 const auto v = mesh.face_vertices(static_cast<int>(f));
                 for (int k = 0; k < q.points_per_face; ++k)
                 {
                   const auto& l = rule.points[k];
                   const Vec3 x = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
                   const std::size_t idx = f * q.points_per_face + k;
                   q.points[idx] = x;
                   q.projected[idx]
                       = project_point(surface, x, ProjectionMode::exact);
                 }
               });
  return q;
}

namespace
{

SparseMatrix from_local(const SurfaceMesh& mesh,
                        const std::vector<Eigen::Matrix3d>& local)
{
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * local.size());
  for (int f = 0; f < mesh.num_faces(); ++f)
  {
    const auto& fe = mesh.face_edges(f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        triplets.emplace_back(fe[i], fe[j], local[f](i, j));
  }
  SparseMatrix a(mesh.num_edges(), mesh.num_edges());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

std::vector<Eigen::Matrix3d> local_stiffness(const SurfaceMesh& mesh)
{
  std::vector<Eigen::Matrix3d> local(mesh.num_faces());
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t f)
               {
                 const int fi = static_cast<int>(f);
                 const auto g = basis_gradients(mesh.face_vertices(fi));
                 const double area = mesh.face_area(fi);
                 for (int i = 0; i < 3; ++i)
                   for (int j = 0; j < 3; ++j)
                     local[f](i, j) = area * g[i].dot(g[j]);
               });
  return local;
}

std::vector<Eigen::Matrix3d> local_mass(const SurfaceMesh& mesh)
{
  const auto rule = quadrature::triangle_rule(2);
  std::vector<Eigen::Matrix3d> local(mesh.num_faces());
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t f)
               {
                 const double area = mesh.face_area(static_cast<int>(f));
                 Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
                 for (std::size_t q = 0; q < rule.points.size(); ++q)
                 {
                   const auto chi = basis_values(rule.points[q]);
                   for (int i = 0; i < 3; ++i)
                     for (int j = 0; j < 3; ++j)
                       m(i, j) += rule.weights[q] * chi[i] * chi[j];
                 }
                 local[f] = area * m;
               });
  return local;
}

} // namespace

SparseMatrix stiffness_matrix(const SurfaceMesh& mesh)
{
  return from_local(mesh, local_stiffness(mesh));
}

SparseMatrix mass_matrix(const SurfaceMesh& mesh)
{
  return from_local(mesh, local_mass(mesh));
}

Eigen::VectorXd load_vector(const SurfaceMesh& mesh,
                            const ProjectedQuadrature& quad,
                            const SurfaceFunction& f)
{
  std::vector<Eigen::Vector3d> local(mesh.num_faces());
  parallel_for(static_cast<std::size_t>(mesh.num_faces()),
               [&](std::size_t face)
               {
                 const double area = mesh.face_area(static_cast<int>(face));
                 Eigen::Vector3d b = Eigen::Vector3d::Zero();
                 for (int q = 0; q < quad.points_per_face; ++q)
                 {
                   const double fq
                       = f(quad.projected[face * quad.points_per_face + q]);
                   const auto chi = basis_values(quad.rule.points[q]);
                   for (int i = 0; i < 3; ++i)
                     b[i] += quad.rule.weights[q] * fq * chi[i];
                 }
                 local[face] = area * b;
               });
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_edges());
  for (int face = 0; face < mesh.num_faces(); ++face)
  {
    const auto& fe = mesh.face_edges(face);
    for (int i = 0; i < 3; ++i)
      rhs[fe[i]] += local[face][i];
  }
  return rhs;
}

AssembledSystem assemble(const SurfaceMesh& mesh,
                         const ProjectedQuadrature& quad,
                         const SurfaceFunction& f)
{
  auto k = local_stiffness(mesh);
  const auto m = local_mass(mesh);
  for (std::size_t i = 0; i < k.size(); ++i)
    k[i] += m[i];
  return {from_local(mesh, k), load_vector(mesh, quad, f)};
}

AssembledSystem assemble(const SurfaceMesh& mesh,
                         const geometry::LevelSetSurface& surface,
                         const SurfaceFunction& f, int load_degree)
{
  const auto quad = project_quadrature(
      mesh, surface, quadrature::triangle_rule(load_degree));
  return assemble(mesh, quad, f);
}

CRFunction interpolate(const SurfaceMesh& mesh,
                       const std::function<double(const Vec3&)>& v)
{
  const auto rule = quadrature::edge_rule(3);
  CRFunction u{Eigen::VectorXd(mesh.num_edges())};
  parallel_for(static_cast<std::size_t>(mesh.num_edges()),
               [&](std::size_t e)
               {
                 const Edge& edge = mesh.edges()[e];
                 const Vec3& a = mesh.vertices()[edge.vertices[0]];
                 const Vec3& b = mesh.vertices()[edge.vertices[1]];
                 double s = 0.0;
                 for (std::size_t q = 0; q < rule.points.size(); ++q)
                 {
                   const double t = rule.points[q];
                   s += rule.weights[q] * v((1.0 - t) * a + t * b);
                 }
                 u.dofs[e] = s;
               });
  return u;
}

double evaluate(const SurfaceMesh& mesh, const CRFunction& u, int face,
                const std::array<double, 3>& bary)
{
  const auto chi = basis_values(bary);
  const auto& fe = mesh.face_edges(face);
  return u.dofs[fe[0]] * chi[0] + u.dofs[fe[1]] * chi[1]
         + u.dofs[fe[2]] * chi[2];
}

Vec3 evaluate(const SurfaceMesh& mesh, const CRVectorFunction& g, int face,
              const std::array<double, 3>& bary)
{
  const auto chi = basis_values(bary);
  const auto& fe = mesh.face_edges(face);
  return g.dofs[fe[0]] * chi[0] + g.dofs[fe[1]] * chi[1]
         + g.dofs[fe[2]] * chi[2];
}

Vec3 broken_gradient(const SurfaceMesh& mesh, const CRFunction& u, int face)
{
  const auto g = basis_gradients(mesh.face_vertices(face));
  const auto& fe = mesh.face_edges(face);
  return u.dofs[fe[0]] * g[0] + u.dofs[fe[1]] * g[1] + u.dofs[fe[2]] * g[2];
}

double jump_defect(const SurfaceMesh& mesh,
                   const std::function<double(int, int)>& vertex_value,
                   int edge)
{
  const Edge& e = mesh.edges()[edge];
  if (e.faces[1] < 0)
    throw Error("jump_defect: boundary edge " + std::to_string(edge));

  // Trace of the face-f linear field at the edge point (1 - t) a + t b.
  auto trace = [&](int f, double t)
  {
    const Triangle& tri = mesh.triangles()[f];
    double value = 0.0;
    for (int i = 0; i < 3; ++i)
    {
      if (tri[i] == e.vertices[0])
        value += (1.0 - t) * vertex_value(f, i);
      else if (tri[i] == e.vertices[1])
        value += t * vertex_value(f, i);
    }
    return value;
  };

  const auto rule = quadrature::edge_rule(3);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const double t = rule.points[q];
    s += rule.weights[q] * (trace(e.faces[0], t) - trace(e.faces[1], t));
  }
  return mesh.edge_length(edge) * s;
}

double jump_defect(const SurfaceMesh& mesh, const CRFunction& u, int edge)
{
  // Vertex i of a face has barycentric coordinates e_i.
  return jump_defect(
      mesh,
      [&](int f, int i)
      {
        std::array<double, 3> l{0.0, 0.0, 0.0};
        l[i] = 1.0;
        return evaluate(mesh, u, f, l);
      },
      edge);
}

} // namespace cr
} // namespace surfcr
