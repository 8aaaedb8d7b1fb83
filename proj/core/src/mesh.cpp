#include <surfcr/mesh.hpp>

#include <surfcr/exceptions.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

namespace surfcr
{

namespace
{

std::uint64_t edge_key(int a, int b)
{
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32)
         | static_cast<std::uint32_t>(b);
}

// Local edge i of (v0, v1, v2) runs from v[i+1] to v[i+2].
std::array<int, 2> local_edge(const Triangle& t, int i)
{
  return {t[(i + 1) % 3], t[(i + 2) % 3]};
}

Triangle rotate_to(const Triangle& t, int first)
{
  return {t[first], t[(first + 1) % 3], t[(first + 2) % 3]};
}

} // namespace

EdgeTable build_edges(std::span<const Triangle> triangles, int num_vertices,
                      Boundary boundary)
{
  struct HalfEdge
  {
    std::uint64_t key;
    int face;
    int local;
  };
  std::vector<HalfEdge> half;
  half.reserve(3 * triangles.size());
  for (std::size_t f = 0; f < triangles.size(); ++f)
  {
    const Triangle& t = triangles[f];
    for (int i = 0; i < 3; ++i)
    {
      if (t[i] < 0 || t[i] >= num_vertices)
        throw Error("triangle " + std::to_string(f)
                    + " references vertex out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw NonManifold("triangle " + std::to_string(f)
                        + " has repeated vertices");
    for (int i = 0; i < 3; ++i)
    {
      const auto [a, b] = local_edge(t, i);
      half.push_back({edge_key(a, b), static_cast<int>(f), i});
    }
  }
  std::sort(half.begin(), half.end(),
            [](const HalfEdge& x, const HalfEdge& y)
            { return x.key != y.key ? x.key < y.key : x.face < y.face; });

  EdgeTable table;
  table.face_edges.assign(triangles.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < half.size();)
  {
    std::size_t j = i;
    while (j < half.size() && half[j].key == half[i].key)
      ++j;
    const std::size_t count = j - i;
    const int a = static_cast<int>(half[i].key >> 32);
    const int b = static_cast<int>(half[i].key & 0xffffffffu);
    const std::string label
        = "edge (" + std::to_string(a) + ", " + std::to_string(b) + ")";
    if (count > 2 || (count == 1 && boundary == Boundary::forbidden))
      throw NonManifold(label + " has " + std::to_string(count) + " faces");

    Edge e{{a, b}, {half[i].face, -1}};
    if (count == 2)
    {
      e.faces[1] = half[i + 1].face;
      const auto d0 = local_edge(triangles[half[i].face], half[i].local);
      const auto d1
          = local_edge(triangles[half[i + 1].face], half[i + 1].local);
      if (d0[0] == d1[0])
        throw InconsistentOrientation(label
                                      + " is traversed in the same direction "
                                        "by both faces");
    }
    const int id = static_cast<int>(table.edges.size());
    table.edges.push_back(e);
    for (std::size_t k = i; k < j; ++k)
      table.face_edges[half[k].face][half[k].local] = id;
    i = j;
  }
  return table;
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices,
                         std::vector<Triangle> triangles, Boundary boundary)
    : SurfaceMesh(vertices, triangles, longest_edge_labels(vertices, triangles),
                  0, boundary)
{
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices,
                         std::vector<Triangle> triangles,
                         std::vector<std::int8_t> refinement_edge,
                         int generation, Boundary boundary)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)),
      refinement_edge_(std::move(refinement_edge)), generation_(generation)
{
  if (refinement_edge_.size() != triangles_.size())
    throw Error("refinement edge labels do not match the face count");
  EdgeTable table = build_edges(triangles_, num_vertices(), boundary);
  edges_ = std::move(table.edges);
  face_edges_ = std::move(table.face_edges);
  edge_keys_.reserve(edges_.size());
  closed_ = true;
  for (const Edge& e : edges_)
  {
    edge_keys_.push_back(edge_key(e.vertices[0], e.vertices[1]));
    if (e.faces[1] < 0)
      closed_ = false;
  }
  for (int f = 0; f < num_faces(); ++f)
  {
    if (!(face_area(f) > 0.0))
      throw DegenerateTriangle("triangle " + std::to_string(f)
                               + " has zero area");
  }
}

Vec3 SurfaceMesh::face_normal(int f) const
{
  const Vec3& a = vertex(f, 0);
  return (vertex(f, 1) - a).cross(vertex(f, 2) - a).normalized();
}

double SurfaceMesh::face_area(int f) const
{
  const Vec3& a = vertex(f, 0);
  return 0.5 * (vertex(f, 1) - a).cross(vertex(f, 2) - a).norm();
}

Vec3 SurfaceMesh::edge_midpoint(int e) const
{
  return 0.5 * (vertices_[edges_[e].vertices[0]]
                + vertices_[edges_[e].vertices[1]]);
}

double SurfaceMesh::edge_length(int e) const
{
  return (vertices_[edges_[e].vertices[0]] - vertices_[edges_[e].vertices[1]])
      .norm();
}

int SurfaceMesh::find_edge(int a, int b) const
{
  const std::uint64_t key = edge_key(a, b);
  const auto it = std::lower_bound(edge_keys_.begin(), edge_keys_.end(), key);
  if (it == edge_keys_.end() || *it != key)
    return -1;
  return static_cast<int>(it - edge_keys_.begin());
}

EdgeGeometry edge_geometry(const SurfaceMesh& mesh, int edge)
{
  const Edge& e = mesh.edges()[edge];
  const Vec3& a = mesh.vertices()[e.vertices[0]];
  const Vec3& b = mesh.vertices()[e.vertices[1]];
  const Vec3 t = (b - a).normalized();

  auto conormal = [&](int f)
  {
    const Vec3 n = mesh.face_normal(f);
    Vec3 c = n.cross(t).normalized();
    const Triangle& tri = mesh.triangles()[f];
    for (int v : tri)
    {
      if (v != e.vertices[0] && v != e.vertices[1])
      {
        if (c.dot(a - mesh.vertices()[v]) < 0.0)
          c = -c;
      }
    }
    return std::pair{c, n};
  };

  EdgeGeometry g;
  g.midpoint = 0.5 * (a + b);
  g.length = (b - a).norm();
  std::tie(g.conormal_plus, g.face_normal_plus) = conormal(e.faces[0]);
  if (e.faces[1] >= 0)
    std::tie(g.conormal_minus, g.face_normal_minus) = conormal(e.faces[1]);
  else
  {
    g.conormal_minus = -g.conormal_plus;
    g.face_normal_minus = g.face_normal_plus;
  }
  return g;
}

std::vector<std::int8_t> longest_edge_labels(const std::vector<Vec3>& vertices,
                                             const std::vector<Triangle>& tris)
{
  double h = 0.0;
  for (const Triangle& t : tris)
    for (int i = 0; i < 3; ++i)
      h = std::max(h, (vertices[t[(i + 1) % 3]] - vertices[t[(i + 2) % 3]])
                          .norm());
  const double quantum = h > 0.0 ? 1e-10 * h : 1.0;

  struct Key
  {
    long long length;
    std::uint64_t pair;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<std::int8_t> labels(tris.size(), 0);
  std::vector<std::array<Key, 3>> keys(tris.size());
  std::vector<long long> longest(tris.size(), -1);
  for (std::size_t f = 0; f < tris.size(); ++f)
  {
    const Triangle& t = tris[f];
    for (int i = 0; i < 3; ++i)
    {
      const auto [a, b] = local_edge(t, i);
      keys[f][i] = {std::llround((vertices[a] - vertices[b]).norm() / quantum),
                    edge_key(a, b)};
      if (keys[f][labels[f]] < keys[f][i])
        labels[f] = static_cast<std::int8_t>(i);
    }
    longest[f] = keys[f][labels[f]].length;
  }

  // Pair up faces whose refinement edges differ from their neighbours' by
  // switching to another edge of the same (quantized) length.
  std::map<std::uint64_t, std::vector<std::pair<int, int>>> sharing;
  for (std::size_t f = 0; f < tris.size(); ++f)
    for (int i = 0; i < 3; ++i)
      sharing[keys[f][i].pair].push_back({static_cast<int>(f), i});
  auto partner = [&](int f, int i) -> std::pair<int, int>
  {
    for (const auto& other : sharing[keys[f][i].pair])
      if (other.first != f)
        return other;
    return {-1, -1};
  };
  auto matched = [&](int f)
  {
    const auto [g, j] = partner(f, labels[f]);
    return g >= 0 && labels[g] == j;
  };
  for (std::size_t fs = 0; fs < tris.size(); ++fs)
  {
    const int f = static_cast<int>(fs);
    if (matched(f))
      continue;
    for (int i = 0; i < 3; ++i)
    {
      if (keys[f][i].length != longest[f])
        continue;
      const auto [g, j] = partner(f, i);
      if (g < 0 || matched(g) || keys[g][j].length != longest[g])
        continue;
      labels[f] = static_cast<std::int8_t>(i);
      labels[g] = static_cast<std::int8_t>(j);
      break;
    }
  }
  return labels;
}

SurfaceMesh icosphere(int level)
{
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& x : v)
    x.normalize();
  std::vector<Triangle> f
      = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  SurfaceMesh mesh(std::move(v), std::move(f));
  const geometry::LevelSetSurface sphere = geometry::unit_sphere();
  for (int l = 0; l < level; ++l)
    mesh = uniform_refine(mesh, sphere, ProjectionMode::exact);
  return mesh;
}

SurfaceMesh mapped_icosphere(const geometry::LevelSetSurface& surface,
                             int level)
{
  const SurfaceMesh sphere = icosphere(level);
  std::vector<Vec3> v;
  v.reserve(sphere.num_vertices());
  for (const Vec3& y : sphere.vertices())
    v.push_back(geometry::map_from_unit_sphere(surface, y));
  std::vector<Triangle> tris = sphere.triangles();
  auto labels = longest_edge_labels(v, tris);
  return SurfaceMesh(std::move(v), std::move(tris), std::move(labels), 0);
}

Vec3 project_point(const geometry::LevelSetSurface& surface, const Vec3& x,
                   ProjectionMode mode)
{
  switch (mode)
  {
  case ProjectionMode::exact:
    // The sphere has a closed-form projection.
    if (surface.name == "sphere")
    {
      if (!(x.norm() >= geometry::regularity_tolerance))
        throw DegenerateGradient("closest_point: vanishing gradient at start");
      return x.normalized();
    }
    return geometry::closest_point(surface, x);
  case ProjectionMode::first_order:
    return geometry::first_order_projection(surface, x);
  case ProjectionMode::none:
    break;
  }
  return x;
}

namespace
{

SurfaceMesh uniform_refine_impl(const SurfaceMesh& mesh,
                                const geometry::LevelSetSurface* surface,
                                ProjectionMode mode)
{
  const int nv = mesh.num_vertices();
  std::vector<Vec3> v = mesh.vertices();
  v.reserve(nv + mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const Vec3 m = mesh.edge_midpoint(e);
    v.push_back(surface ? project_point(*surface, m, mode) : m);
  }
  std::vector<Triangle> tris;
  tris.reserve(4 * mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f)
  {
    const Triangle& t = mesh.triangles()[f];
    const auto& fe = mesh.face_edges(f);
    const int m0 = nv + fe[0], m1 = nv + fe[1], m2 = nv + fe[2];
    tris.push_back({t[0], m2, m1});
    tris.push_back({m2, t[1], m0});
    tris.push_back({m1, m0, t[2]});
    tris.push_back({m0, m1, m2});
  }
  auto labels = longest_edge_labels(v, tris);
  return SurfaceMesh(std::move(v), std::move(tris), std::move(labels),
                     mesh.generation() + 1,
                     mesh.closed() ? Boundary::forbidden : Boundary::allowed);
}

SurfaceMesh bisect_impl(const SurfaceMesh& mesh, std::span<const int> marked,
                        const geometry::LevelSetSurface* surface,
                        ProjectionMode mode)
{
  const int ne = mesh.num_edges();
  std::vector<char> cut(ne, 0);
  std::vector<int> queue;

  auto cut_edge = [&](int e)
  {
    if (cut[e])
      return;
    cut[e] = 1;
    for (int f : mesh.edges()[e].faces)
      if (f >= 0)
        queue.push_back(f);
  };
  for (int f : marked)
  {
    if (f < 0 || f >= mesh.num_faces())
      throw Error("marked face index out of range");
    cut_edge(mesh.face_edges(f)[mesh.refinement_edge(f)]);
  }

  // Conforming closure: a face with any cut edge must have its refinement
  // edge cut as well.
  const std::size_t budget
      = 10 * (static_cast<std::size_t>(mesh.num_faces()) + ne) + 100;
  std::size_t processed = 0;
  while (!queue.empty())
  {
    if (++processed > budget)
      throw ClosureDiverged("newest-vertex closure exceeded its iteration "
                            "bound; the initial labeling is incompatible");
    const int f = queue.back();
    queue.pop_back();
    cut_edge(mesh.face_edges(f)[mesh.refinement_edge(f)]);
  }

  std::vector<Vec3> v = mesh.vertices();
  std::vector<int> midpoint(ne, -1);
  for (int e = 0; e < ne; ++e)
  {
    if (!cut[e])
      continue;
    midpoint[e] = static_cast<int>(v.size());
    const Vec3 m = mesh.edge_midpoint(e);
    v.push_back(surface ? project_point(*surface, m, mode) : m);
  }

  auto midpoint_of = [&](int a, int b)
  {
    const int e = mesh.find_edge(a, b);
    return e >= 0 ? midpoint[e] : -1;
  };

  std::vector<Triangle> tris;
  std::vector<std::int8_t> labels;
  tris.reserve(mesh.num_faces() + 4 * static_cast<std::size_t>(marked.size()));

  // t[0] is the newest vertex; its opposite edge t[1]-t[2] is the
  // refinement edge. Children are (m, t0, t1) and (m, t2, t0).
  auto refine = [&](auto&& self, const Triangle& t, int depth) -> void
  {
    const int m = midpoint_of(t[1], t[2]);
    if (m < 0 || depth > 2)
    {
      tris.push_back(t);
      labels.push_back(0);
      return;
    }
    self(self, Triangle{m, t[0], t[1]}, depth + 1);
    self(self, Triangle{m, t[2], t[0]}, depth + 1);
  };

  for (int f = 0; f < mesh.num_faces(); ++f)
  {
    const Triangle& t = mesh.triangles()[f];
    const int r = mesh.refinement_edge(f);
    if (!cut[mesh.face_edges(f)[r]])
    {
      tris.push_back(t);
      labels.push_back(static_cast<std::int8_t>(r));
      continue;
    }
    refine(refine, rotate_to(t, r), 0);
  }

  return SurfaceMesh(std::move(v), std::move(tris), std::move(labels),
                     mesh.generation() + 1,
                     mesh.closed() ? Boundary::forbidden : Boundary::allowed);
}

} // namespace

SurfaceMesh uniform_refine(const SurfaceMesh& mesh,
                           const geometry::LevelSetSurface& surface,
                           ProjectionMode mode)
{
  return uniform_refine_impl(mesh, &surface, mode);
}

SurfaceMesh uniform_refine(const SurfaceMesh& mesh)
{
  return uniform_refine_impl(mesh, nullptr, ProjectionMode::none);
}

SurfaceMesh bisect(const SurfaceMesh& mesh, std::span<const int> marked,
                   const geometry::LevelSetSurface& surface,
                   ProjectionMode mode)
{
  return bisect_impl(mesh, marked, &surface, mode);
}

SurfaceMesh bisect(const SurfaceMesh& mesh, std::span<const int> marked)
{
  return bisect_impl(mesh, marked, nullptr, ProjectionMode::none);
}

SurfaceMesh project_vertices(const SurfaceMesh& mesh,
                             const geometry::LevelSetSurface& surface,
                             ProjectionMode mode)
{
  std::vector<Vec3> v;
  v.reserve(mesh.num_vertices());
  for (const Vec3& x : mesh.vertices())
    v.push_back(project_point(surface, x, mode));
  return SurfaceMesh(std::move(v), mesh.triangles(), mesh.refinement_edges(),
                     mesh.generation(),
                     mesh.closed() ? Boundary::forbidden : Boundary::allowed);
}

double mesh_size(const SurfaceMesh& mesh)
{
  double h = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f)
    for (int i = 0; i < 3; ++i)
      h = std::max(h, mesh.edge_length(mesh.face_edges(f)[i]));
  return h;
}

double shape_ratio(const SurfaceMesh& mesh, int face)
{
  const auto& fe = mesh.face_edges(face);
  const double a = mesh.edge_length(fe[0]);
  const double b = mesh.edge_length(fe[1]);
  const double c = mesh.edge_length(fe[2]);
  const double area = mesh.face_area(face);
  const double s = 0.5 * (a + b + c);
  // R = abc / (4A), r = A / s
  return a * b * c * s / (4.0 * area * area);
}

double max_shape_ratio(const SurfaceMesh& mesh)
{
  double r = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f)
    r = std::max(r, shape_ratio(mesh, f));
  return r;
}

int euler_characteristic(const SurfaceMesh& mesh)
{
  return mesh.num_vertices() - mesh.num_edges() + mesh.num_faces();
}

double surface_area(const SurfaceMesh& mesh)
{
  double a = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f)
    a += mesh.face_area(f);
  return a;
}

} // namespace surfcr
