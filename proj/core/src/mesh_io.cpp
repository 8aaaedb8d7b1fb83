#include <surfcr/io.hpp>

#include <surfcr/exceptions.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace surfcr::io
{

MeshFormat format_from_path(const std::filesystem::path& path)
{
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off")
    return MeshFormat::off;
  if (ext == ".obj")
    return MeshFormat::obj;
  throw Error("cannot infer mesh format from '" + path.string()
              + "' (expected .off or .obj)");
}

namespace
{

// Next line that is neither blank nor a comment.
bool next_content_line(std::istream& in, std::string& line, int& lineno)
{
  while (std::getline(in, line))
  {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    return true;
  }
  return false;
}

SurfaceMesh read_off(std::istream& in, Boundary boundary)
{
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno))
    throw ParseError("empty OFF file", lineno);
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF")
    throw ParseError("expected 'OFF' header", lineno);

  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv))
  {
    if (!next_content_line(in, line, lineno))
      throw ParseError("missing counts line", lineno);
    std::istringstream counts(line);
    counts >> nv >> nf >> ne;
    if (!counts)
      throw ParseError("malformed counts line", lineno);
  }
  else if (!(header >> nf))
    throw ParseError("malformed counts line", lineno);
  if (nv < 0 || nf < 0)
    throw ParseError("negative vertex or face count", lineno);

  std::vector<Vec3> vertices(nv);
  for (long i = 0; i < nv; ++i)
  {
    if (!next_content_line(in, line, lineno))
      throw ParseError("unexpected end of file in vertex list", lineno);
    std::istringstream ls(line);
    Vec3& v = vertices[i];
    if (!(ls >> v[0] >> v[1] >> v[2]))
      throw ParseError("malformed vertex", lineno);
  }
  std::vector<Triangle> tris(nf);
  for (long i = 0; i < nf; ++i)
  {
    if (!next_content_line(in, line, lineno))
      throw ParseError("unexpected end of file in face list", lineno);
    std::istringstream ls(line);
    int count = 0;
    if (!(ls >> count))
      throw ParseError("malformed face", lineno);
    if (count != 3)
      throw ParseError("only triangular faces are supported (got "
                           + std::to_string(count) + " vertices)",
                       lineno);
    Triangle& t = tris[i];
    if (!(ls >> t[0] >> t[1] >> t[2]))
      throw ParseError("malformed face", lineno);
    for (int k : t)
      if (k < 0 || k >= nv)
        throw ParseError("face index out of range", lineno);
  }
  return SurfaceMesh(std::move(vertices), std::move(tris), boundary);
}

// "7", "7/1", "7//3", "7/1/3" -> 7
int obj_index(const std::string& token, int lineno)
{
  const std::string head = token.substr(0, token.find('/'));
  std::size_t used = 0;
  int idx = 0;
  try
  {
    idx = std::stoi(head, &used);
  }
  catch (const std::exception&)
  {
    throw ParseError("malformed face index '" + token + "'", lineno);
  }
  if (used != head.size() || idx <= 0)
    throw ParseError("face index '" + token
                         + "' must be a positive 1-based index",
                     lineno);
  return idx - 1;
}

SurfaceMesh read_obj(std::istream& in, Boundary boundary)
{
  std::vector<Vec3> vertices;
  std::vector<Triangle> tris;
  std::vector<int> face_lines;
  std::string line;
  int lineno = 0;
  while (next_content_line(in, line, lineno))
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v")
    {
      Vec3 v;
      if (!(ls >> v[0] >> v[1] >> v[2]))
        throw ParseError("malformed vertex", lineno);
      vertices.push_back(v);
    }
    else if (tag == "f")
    {
      std::vector<int> idx;
      std::string token;
      while (ls >> token)
        idx.push_back(obj_index(token, lineno));
      if (idx.size() != 3)
        throw ParseError("only triangular faces are supported (got "
                             + std::to_string(idx.size()) + " vertices)",
                         lineno);
      tris.push_back({idx[0], idx[1], idx[2]});
      face_lines.push_back(lineno);
    }
    // vn, vt, o, g, s, usemtl, mtllib are ignored.
  }
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (int k : tris[i])
      if (k >= static_cast<int>(vertices.size()))
        throw ParseError("face index out of range", face_lines[i]);
  return SurfaceMesh(std::move(vertices), std::move(tris), boundary);
}

} // namespace

SurfaceMesh read_mesh(std::istream& in, MeshFormat format, Boundary boundary)
{
  return format == MeshFormat::off ? read_off(in, boundary)
                                   : read_obj(in, boundary);
}

void write_mesh(std::ostream& out, const SurfaceMesh& mesh, MeshFormat format)
{
  out << std::setprecision(17);
  if (format == MeshFormat::off)
  {
    out << "OFF\n"
        << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
    for (const Vec3& v : mesh.vertices())
      out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const Triangle& t : mesh.triangles())
      out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  else
  {
    for (const Vec3& v : mesh.vertices())
      out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const Triangle& t : mesh.triangles())
      out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                      Boundary boundary)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open mesh file '" + path.string() + "'");
  return read_mesh(in, format, boundary);
}

SurfaceMesh load_mesh(const std::filesystem::path& path, Boundary boundary)
{
  return load_mesh(path, format_from_path(path), boundary);
}

void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path,
               MeshFormat format)
{
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write mesh file '" + path.string() + "'");
  write_mesh(out, mesh, format);
}

void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path)
{
  save_mesh(mesh, path, format_from_path(path));
}

void write_solution_csv(std::ostream& out, const SurfaceMesh& mesh,
                        const CRFunction& u)
{
  out << "edge_id,v0,v1,mx,my,mz,value\n" << std::setprecision(17);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const Edge& edge = mesh.edges()[e];
    const Vec3 m = mesh.edge_midpoint(e);
    out << e << ',' << edge.vertices[0] << ',' << edge.vertices[1] << ','
        << m[0] << ',' << m[1] << ',' << m[2] << ',' << u.dofs[e] << '\n';
  }
}

void write_gradient_csv(std::ostream& out, const SurfaceMesh& mesh,
                        const CRVectorFunction& g)
{
  out << "edge_id,gx,gy,gz\n" << std::setprecision(17);
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const Vec3& v = g.dofs[e];
    out << e << ',' << v[0] << ',' << v[1] << ',' << v[2] << '\n';
  }
}

void write_vtk(std::ostream& out, const SurfaceMesh& mesh,
               const CRFunction* u, const CRVectorFunction* g)
{
  const int nf = mesh.num_faces();
  out << "# vtk DataFile Version 3.0\n"
      << "surface Crouzeix-Raviart fields\nASCII\nDATASET POLYDATA\n"
      << std::setprecision(17);
  out << "POINTS " << 3 * nf << " double\n";
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < 3; ++i)
    {
      const Vec3& v = mesh.vertex(f, i);
      out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
  out << "POLYGONS " << nf << ' ' << 4 * nf << '\n';
  for (int f = 0; f < nf; ++f)
    out << "3 " << 3 * f << ' ' << 3 * f + 1 << ' ' << 3 * f + 2 << '\n';
  if (!u && !g)
    return;

  // chi_j at vertex i equals 1 - 2 delta_ij.
  auto corner = [](int i) -> std::array<double, 3>
  {
    std::array<double, 3> l{0.0, 0.0, 0.0};
    l[i] = 1.0;
    return l;
  };
  out << "POINT_DATA " << 3 * nf << '\n';
  if (u)
  {
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int f = 0; f < nf; ++f)
      for (int i = 0; i < 3; ++i)
        out << cr::evaluate(mesh, *u, f, corner(i)) << '\n';
  }
  if (g)
  {
    out << "VECTORS recovered_gradient double\n";
    for (int f = 0; f < nf; ++f)
      for (int i = 0; i < 3; ++i)
      {
        const Vec3 v = cr::evaluate(mesh, *g, f, corner(i));
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
      }
  }
}

} // namespace surfcr::io
