#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "vbifem/mesh.hpp"

namespace vbifem {

/// Reads the ASCII MSH 2.2 subset: $MeshFormat, optional $PhysicalNames, $Nodes, $Elements.
///
/// Element type 2 (TRI3) or 4 (TET4) defines the cells; the mesh is 3D as soon as one
/// TET4 is present. Cells of the next-lower dimension (type 1 lines in 2D, type 2
/// triangles in 3D) become boundary facets grouped by their physical tag, named via
/// $PhysicalNames when present and by the tag number otherwise. Points (15) are ignored
/// silently; any other type is skipped and counted in Mesh::skipped_elements.
Mesh parse_msh(std::istream& in);
Mesh read_msh(const std::filesystem::path& path);

/// Writes `mesh` in the same MSH 2.2 subset (with $PhysicalNames for its groups).
void write_msh(std::ostream& out, const Mesh& mesh);

/// Whitespace-separated rows of `dimension` numbers; lines starting with '#' are comments.
PointSet parse_point_cloud(std::istream& in, int dimension);

/// As above, with the dimension taken from the first data row (2 or 3 columns).
PointSet parse_point_cloud(std::istream& in);
PointSet read_point_cloud(const std::filesystem::path& path, int dimension = 0);

void write_point_cloud(std::ostream& out, const Eigen::MatrixXd& points);

/// Point data attached to a VTK output: one row per node, 1 column (scalar) or D columns.
using PointFields = std::map<std::string, Eigen::MatrixXd>;

/// VTK legacy ASCII 3.0 unstructured grid. 2D meshes are written with z = 0.
void write_vtk(std::ostream& out, const Mesh& mesh, const PointFields& fields = {});

}  // namespace vbifem
