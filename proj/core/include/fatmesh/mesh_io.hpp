#pragma once

#include "fatmesh/geometry.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fatmesh {

enum class MeshFormat { kOff, kObj };

// "off" or "obj", case-insensitive; throws MeshIoError otherwise.
MeshFormat parse_mesh_format(const std::string& name);
// From the file extension.
MeshFormat mesh_format_of(const std::filesystem::path& path);

// ASCII output with 17 significant digits. Throws MeshIoError unless the
// complex is a triangle complex.
void write_mesh(std::ostream& out, const SimplicialComplex& c, MeshFormat format);
void export_mesh(const SimplicialComplex& c, const std::filesystem::path& path, MeshFormat format);

struct ImportedMesh {
  SimplicialComplex complex;
  std::vector<std::string> warnings;
};

// Polygons with more than three corners are fan-triangulated with a warning.
// Throws MeshIoError on malformed input.
ImportedMesh read_mesh(std::istream& in, MeshFormat format);
ImportedMesh import_mesh(const std::filesystem::path& path);

}  // namespace fatmesh
