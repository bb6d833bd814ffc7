#pragma once

// Text export of piecewise-linear maps.
//
//   symmesh <2n> <num_vertices> <num_faces>
//   v <2n floats>            (corners, then one apex per facet)
//   f <i> <j> <k>            (1-based)
//
// Floats are written with 17 significant digits so that values round-trip
// bit for bit.  The optional projection writes plain `v x y z` / `f i j k`
// lines using three chosen coordinates.

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lagmesh/plmap.hpp"

namespace lagmesh {

struct SymMesh {
  int dim = 0;
  Eigen::MatrixXd vertices;  // dim x num_vertices
  std::vector<std::array<std::int64_t, 3>> faces;  // 0-based
};

SymMesh to_symmesh(const PLMap& map);

void write_symmesh(const SymMesh& mesh, const std::string& path);
SymMesh read_symmesh(const std::string& path);

/// Writes a 3-coordinate triangle file using coordinates `projection`.
void write_projection(const SymMesh& mesh, const std::array<int, 3>& projection,
                      const std::string& path);

struct ProjectedMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<std::int64_t, 3>> faces;  // 0-based
};
/// Parses a projection file and checks every face index is in range.
ProjectedMesh read_projection(const std::string& path);

/// Writes `<stem>.symmesh` and, when a projection is given, `<stem>.obj`.
void export_mesh(const PLMap& map, const std::string& stem,
                 const std::optional<std::array<int, 3>>& projection = std::nullopt);

}  // namespace lagmesh
