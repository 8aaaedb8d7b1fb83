#pragma once

#include <surfcr/geometry.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace surfcr
{

/// Oriented vertex triple. Local edge i is the edge opposite vertex i.
using Triangle = std::array<int, 3>;

/// Undirected edge with canonical vertex order (min, max). faces[0] is the
/// adjacent triangle with the smaller index (T+), faces[1] the other one
/// (T-), or -1 on the boundary of an open mesh.
struct Edge
{
  std::array<int, 2> vertices;
  std::array<int, 2> faces;
};

enum class ProjectionMode
{
  exact,
  first_order,
  none
};

enum class Boundary
{
  forbidden,
  allowed
};

struct EdgeTable
{
  std::vector<Edge> edges;
  /// face_edges[f][i] is the edge opposite local vertex i of face f.
  std::vector<std::array<int, 3>> face_edges;
};

/// Builds the undirected edge table. Edges are numbered in lexicographic
/// order of their canonical vertex pair.
///
/// Throws NonManifold if an edge has more than two faces (or one face while
/// boundary is forbidden), InconsistentOrientation if two faces traverse a
/// shared edge in the same direction.
EdgeTable build_edges(std::span<const Triangle> triangles, int num_vertices,
                      Boundary boundary = Boundary::forbidden);

/// Triangulated surface in R^3 with edge connectivity and newest-vertex
/// bisection labels. Immutable once built; refinement returns a new mesh.
class SurfaceMesh
{
public:
  SurfaceMesh() = default;

  /// Refinement edges default to the longest edge of each triangle.
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
              Boundary boundary = Boundary::forbidden);

  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
              std::vector<std::int8_t> refinement_edge, int generation,
              Boundary boundary = Boundary::forbidden);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_faces() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }
  const std::vector<std::int8_t>& refinement_edges() const
  {
    return refinement_edge_;
  }
  int refinement_edge(int f) const { return refinement_edge_[f]; }
  int generation() const { return generation_; }
  bool closed() const { return closed_; }

  const Vec3& vertex(int f, int i) const
  {
    return vertices_[triangles_[f][i]];
  }
  std::array<Vec3, 3> face_vertices(int f) const
  {
    return {vertex(f, 0), vertex(f, 1), vertex(f, 2)};
  }

  Vec3 face_normal(int f) const;
  double face_area(int f) const;
  Vec3 edge_midpoint(int e) const;
  double edge_length(int e) const;

  /// Index of the edge joining a and b, or -1.
  int find_edge(int a, int b) const;

private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> edge_keys_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<std::int8_t> refinement_edge_;
  int generation_ = 0;
  bool closed_ = true;
};

/// Per-edge geometric quantities. Conormals lie in their face's plane,
/// are orthogonal to the edge and point out of that face.
struct EdgeGeometry
{
  Vec3 midpoint;
  double length;
  Vec3 conormal_plus;
  Vec3 conormal_minus;
  Vec3 face_normal_plus;
  Vec3 face_normal_minus;
};

/// For a boundary edge the minus quantities repeat the plus side negated
/// (conormal) and unchanged (face normal).
EdgeGeometry edge_geometry(const SurfaceMesh& mesh, int edge);

/// Longest-edge labels under a strict total order on edges (length
/// quantized relative to the mesh size, then vertex pair), so that the
/// conforming closure of newest-vertex bisection terminates. Faces left
/// without a matching neighbour then switch to another longest edge where
/// that pairs them up.
std::vector<std::int8_t> longest_edge_labels(const std::vector<Vec3>& vertices,
                                             const std::vector<Triangle>& tris);

/// Icosahedron quadrisected `level` times with radial projection.
SurfaceMesh icosphere(int level);

/// icosphere(level) with vertices carried onto the surface by
/// geometry::map_from_unit_sphere.
SurfaceMesh mapped_icosphere(const geometry::LevelSetSurface& surface,
                             int level);

Vec3 project_point(const geometry::LevelSetSurface& surface, const Vec3& x,
                   ProjectionMode mode);

/// Splits every triangle into four through its edge midpoints; the new
/// vertices are projected according to mode.
SurfaceMesh uniform_refine(const SurfaceMesh& mesh,
                           const geometry::LevelSetSurface& surface,
                           ProjectionMode mode);
SurfaceMesh uniform_refine(const SurfaceMesh& mesh);

/// Newest-vertex bisection of the marked faces with conforming closure.
/// Every marked face is bisected at least once through its refinement edge.
/// Throws ClosureDiverged if the closure does not settle.
SurfaceMesh bisect(const SurfaceMesh& mesh, std::span<const int> marked,
                   const geometry::LevelSetSurface& surface,
                   ProjectionMode mode);
SurfaceMesh bisect(const SurfaceMesh& mesh, std::span<const int> marked);

/// Moves every vertex by project_point. Connectivity and labels are kept.
SurfaceMesh project_vertices(const SurfaceMesh& mesh,
                             const geometry::LevelSetSurface& surface,
                             ProjectionMode mode);

/// h = max over faces of the longest edge.
double mesh_size(const SurfaceMesh& mesh);

/// circumradius / inradius; 2 for an equilateral triangle.
double shape_ratio(const SurfaceMesh& mesh, int face);
double max_shape_ratio(const SurfaceMesh& mesh);

/// V - E + F
int euler_characteristic(const SurfaceMesh& mesh);

/// Sum of face areas.
double surface_area(const SurfaceMesh& mesh);

} // namespace surfcr
