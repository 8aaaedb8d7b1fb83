#pragma once

#include <surfcr/cr_fem.hpp>
#include <surfcr/mesh.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace surfcr::io
{

enum class MeshFormat
{
  off,
  obj
};

/// From the file extension (.off / .obj, case-insensitive).
MeshFormat format_from_path(const std::filesystem::path& path);

/// ASCII triangle meshes. Vertices are written with 17 significant digits.
/// Throws ParseError (with a 1-based line number) on malformed input or
/// non-triangular faces; NonManifold when the surface is not closed.
SurfaceMesh read_mesh(std::istream& in, MeshFormat format,
                      Boundary boundary = Boundary::forbidden);
void write_mesh(std::ostream& out, const SurfaceMesh& mesh, MeshFormat format);

SurfaceMesh load_mesh(const std::filesystem::path& path,
                      Boundary boundary = Boundary::forbidden);
SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                      Boundary boundary = Boundary::forbidden);
void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path);
void save_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path,
               MeshFormat format);

/// edge_id,v0,v1,mx,my,mz,value
void write_solution_csv(std::ostream& out, const SurfaceMesh& mesh,
                        const CRFunction& u);

/// edge_id,gx,gy,gz
void write_gradient_csv(std::ostream& out, const SurfaceMesh& mesh,
                        const CRVectorFunction& g);

/// Legacy VTK polydata with three private vertices per face so that the
/// discontinuous per-face linear fields are shown exactly. Either field may
/// be null.
void write_vtk(std::ostream& out, const SurfaceMesh& mesh,
               const CRFunction* u, const CRVectorFunction* g);

} // namespace surfcr::io
