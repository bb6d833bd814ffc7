#include "lagmesh/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lagmesh/errors.hpp"

namespace lagmesh {
namespace {

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SymMesh to_symmesh(const PLMap& map) {
  SymMesh mesh;
  const TriMesh& tri = map.tri();
  mesh.dim = static_cast<int>(tri.dim());
  mesh.vertices.resize(tri.dim(), map.vertex_count());
  mesh.vertices << tri.corners(), tri.apexes();
  mesh.faces.reserve(static_cast<std::size_t>(map.triangle_count()));
  for (const auto& t : map.triangles()) mesh.faces.push_back(t.vertex_ids);
  return mesh;
}

void write_symmesh(const SymMesh& mesh, const std::string& path) {
  std::ofstream out = open_for_writing(path);
  out << "symmesh " << mesh.dim << ' ' << mesh.vertices.cols() << ' ' << mesh.faces.size() << '\n';
  for (Eigen::Index v = 0; v < mesh.vertices.cols(); ++v) {
    out << 'v';
    for (Eigen::Index c = 0; c < mesh.vertices.rows(); ++c) out << ' ' << format_double(mesh.vertices(c, v));
    out << '\n';
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

SymMesh read_symmesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string tag;
  std::int64_t nv = 0, nf = 0;
  SymMesh mesh;
  if (!(in >> tag >> mesh.dim >> nv >> nf) || tag != "symmesh" || mesh.dim <= 0 || nv < 0 || nf < 0) {
    throw IoError("'" + path + "' is not a symmesh file");
  }
  mesh.vertices.resize(mesh.dim, nv);
  for (std::int64_t v = 0; v < nv; ++v) {
    if (!(in >> tag) || tag != "v") throw IoError("expected vertex record in '" + path + "'");
    for (int c = 0; c < mesh.dim; ++c) {
      // strtod keeps the 17-digit decimal exact on the way back in.
      std::string word;
      if (!(in >> word)) throw IoError("truncated vertex record in '" + path + "'");
      char* end = nullptr;
      mesh.vertices(c, v) = std::strtod(word.c_str(), &end);
      if (end != word.c_str() + word.size()) throw IoError("bad coordinate '" + word + "' in '" + path + "'");
    }
  }
  mesh.faces.resize(static_cast<std::size_t>(nf));
  for (auto& f : mesh.faces) {
    if (!(in >> tag >> f[0] >> f[1] >> f[2]) || tag != "f") {
      throw IoError("expected face record in '" + path + "'");
    }
    for (auto& i : f) {
      if (i < 1 || i > nv) throw IoError("face index out of range in '" + path + "'");
      --i;
    }
  }
  return mesh;
}

void write_projection(const SymMesh& mesh, const std::array<int, 3>& projection,
                      const std::string& path) {
  for (int c : projection) {
    if (c < 0 || c >= mesh.dim) throw IoError("projection coordinate out of range");
  }
  std::ofstream out = open_for_writing(path);
  for (Eigen::Index v = 0; v < mesh.vertices.cols(); ++v) {
    out << "v " << format_double(mesh.vertices(projection[0], v)) << ' '
        << format_double(mesh.vertices(projection[1], v)) << ' '
        << format_double(mesh.vertices(projection[2], v)) << '\n';
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

ProjectedMesh read_projection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  ProjectedMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(row >> p(0) >> p(1) >> p(2))) throw IoError("bad vertex line in '" + path + "'");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::array<std::int64_t, 3> f{};
      if (!(row >> f[0] >> f[1] >> f[2])) throw IoError("bad face line in '" + path + "'");
      mesh.faces.push_back(f);
    }
  }
  const auto count = static_cast<std::int64_t>(mesh.vertices.size());
  for (auto& f : mesh.faces) {
    for (auto& i : f) {
      if (i < 1 || i > count) throw IoError("face index out of range in '" + path + "'");
      --i;
    }
  }
  return mesh;
}

void export_mesh(const PLMap& map, const std::string& stem,
                 const std::optional<std::array<int, 3>>& projection) {
  const SymMesh mesh = to_symmesh(map);
  write_symmesh(mesh, stem + ".symmesh");
  if (projection) write_projection(mesh, *projection, stem + ".obj");
}

}  // namespace lagmesh
