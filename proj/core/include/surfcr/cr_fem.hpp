#pragma once

#include <surfcr/geometry.hpp>
#include <surfcr/mesh.hpp>
#include <surfcr/quadrature.hpp>

#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <vector>

namespace surfcr
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Function evaluated at points of the exact surface.
using SurfaceFunction = std::function<double(const Vec3&)>;

/// Edge <-> degree of freedom numbering. One Crouzeix-Raviart degree of
/// freedom per edge midpoint, numbered like the edges.
struct DofMap
{
  std::vector<int> edge_to_dof;
  std::vector<int> dof_to_edge;

  int size() const { return static_cast<int>(dof_to_edge.size()); }
  static DofMap for_mesh(const SurfaceMesh& mesh);
};

/// Scalar Crouzeix-Raviart function: one value per edge midpoint. On each
/// face it is the linear polynomial through its three midpoint values.
struct CRFunction
{
  Eigen::VectorXd dofs;
};

/// Vector-valued counterpart (three ambient components per midpoint).
struct CRVectorFunction
{
  std::vector<Vec3> dofs;
};

/// a_h as a sparse symmetric matrix (stiffness + mass) and the load vector
/// (f o p, chi_i) on the discrete surface.
struct AssembledSystem
{
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

namespace cr
{

/// Gradients of chi_i = 1 - 2 lambda_i, where lambda_i is the barycentric
/// coordinate of vertex i; chi_i is one at the midpoint of the edge opposite
/// vertex i. The gradients lie in the plane of the triangle and sum to zero.
std::array<Vec3, 3> basis_gradients(const std::array<Vec3, 3>& vertices);

/// chi_i at barycentric point l.
inline std::array<double, 3> basis_values(const std::array<double, 3>& l)
{
  return {1.0 - 2.0 * l[0], 1.0 - 2.0 * l[1], 1.0 - 2.0 * l[2]};
}

/// Quadrature points of every face together with their closest points on
/// the surface. Storage is face-major: index f * points_per_face + q.
struct ProjectedQuadrature
{
  quadrature::TriangleRule rule;
  int points_per_face = 0;
  std::vector<Vec3> points;
  std::vector<Vec3> projected;
};

ProjectedQuadrature project_quadrature(const SurfaceMesh& mesh,
                                       const geometry::LevelSetSurface& surface,
                                       const quadrature::TriangleRule& rule);

/// Sum over faces of area * grad chi_i . grad chi_j.
SparseMatrix stiffness_matrix(const SurfaceMesh& mesh);

/// (chi_i, chi_j) on the discrete surface, degree-2 rule.
SparseMatrix mass_matrix(const SurfaceMesh& mesh);

/// Load vector (f o p, chi_i) using the projected quadrature.
Eigen::VectorXd load_vector(const SurfaceMesh& mesh,
                            const ProjectedQuadrature& quad,
                            const SurfaceFunction& f);

AssembledSystem assemble(const SurfaceMesh& mesh,
                         const ProjectedQuadrature& quad,
                         const SurfaceFunction& f);

/// Convenience overload projecting a degree-`load_degree` rule first.
AssembledSystem assemble(const SurfaceMesh& mesh,
                         const geometry::LevelSetSurface& surface,
                         const SurfaceFunction& f, int load_degree = 4);

/// Edge averages (1/|E|) int_E v by 2-point Gauss. Exact for v linear
/// along every edge.
CRFunction interpolate(const SurfaceMesh& mesh,
                       const std::function<double(const Vec3&)>& v);

double evaluate(const SurfaceMesh& mesh, const CRFunction& u, int face,
                const std::array<double, 3>& bary);
Vec3 evaluate(const SurfaceMesh& mesh, const CRVectorFunction& g, int face,
              const std::array<double, 3>& bary);

/// Constant tangential gradient of u on a face.
Vec3 broken_gradient(const SurfaceMesh& mesh, const CRFunction& u, int face);

/// int_E (u|T+ - u|T-) by 2-point Gauss; zero for members of the space.
double jump_defect(const SurfaceMesh& mesh, const CRFunction& u, int edge);

/// Same, for an arbitrary piecewise linear field given by per-face vertex
/// values (face f, local vertex i) -> value.
double jump_defect(const SurfaceMesh& mesh,
                   const std::function<double(int, int)>& vertex_value,
                   int edge);

} // namespace cr
} // namespace surfcr
