#pragma once

// Piecewise-linear maps defined by triangular meshes: evaluation, facet
// differentials, distances to a smooth map, isotropy residuals and the
// immersion / embedding verdicts.

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lagmesh/immersion.hpp"
#include "lagmesh/mesh.hpp"

namespace lagmesh {

class PLMap {
 public:
  struct Triangle {
    /// Quotient vertex ids: corners are chart linear ids, the apex of facet
    /// f is facet_count + id(f).
    std::array<std::int64_t, 3> vertex_ids;
    Eigen::Matrix<double, 2, 3> domain;  // parameter-plane positions
    Eigen::MatrixXd image;               // 2n x 3, lifted in the facet's frame
  };

  PLMap() = default;
  explicit PLMap(TriMesh tri);

  const TriMesh& tri() const { return tri_; }
  Eigen::Index dim() const { return tri_.dim(); }
  std::int64_t triangle_count() const { return static_cast<std::int64_t>(triangles_.size()); }
  std::int64_t vertex_count() const { return 2 * tri_.facet_count(); }
  const Triangle& triangle(std::int64_t id) const { return triangles_[static_cast<std::size_t>(id)]; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  /// Value at a point of the parameter plane; points outside the
  /// fundamental domain are handled through the period lattice.
  Eigen::VectorXd eval(const Eigen::Vector2d& p) const;

  /// Id of the triangle containing p together with its raw facet index.
  std::pair<std::int64_t, CellIndex> locate(const Eigen::Vector2d& p) const;

  /// Constant differential (2n x 2) of the affine piece, with respect to
  /// Euclidean coordinates of the parameter plane.
  Eigen::MatrixXd differential(std::int64_t id) const;

 private:
  TriMesh tri_;
  std::vector<Triangle> triangles_;
};

PLMap build_pl(const TriMesh& tri);
inline Eigen::VectorXd eval_pl(const PLMap& map, const Eigen::Vector2d& p) { return map.eval(p); }
inline Eigen::MatrixXd facet_differential(const PLMap& map, std::int64_t id) {
  return map.differential(id);
}

/// max over an oversample-level barycentric grid per triangle of
/// |l(p) - l_N(p)|.
double distance_c0(const PLMap& map, const ImmersionSpec& spec, int oversample = 4);

/// distance_c0 plus the max spectral norm of dl(p) - dl_N over the same
/// points.
double distance_c1(const PLMap& map, const ImmersionSpec& spec, int oversample = 4);

/// max over triangles of the spectral norm of the difference of the facet
/// differentials of two PL maps on the same triangulation.
double differential_distance(const PLMap& a, const PLMap& b);

/// |omega(B - A, C - A)| per triangle.
Eigen::VectorXd pl_isotropy_residual(const PLMap& map);

/// 2 |Liouville integral| along each triangle boundary; agrees with
/// pl_isotropy_residual by Stokes.
Eigen::VectorXd triangle_liouville_residual(const PLMap& map);

/// Largest image edge length of each triangle.
Eigen::VectorXd triangle_scales(const PLMap& map);

/// Minimum Euclidean distance between two simplices of R^d (columns are
/// vertices, one to three each).
double simplex_distance(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2);

struct ImmersionVerdict {
  bool passed = false;
  std::vector<std::int64_t> degenerate_triangles;
  /// (vertex id, triangle a, triangle b) whose images overlap in the star.
  std::vector<std::array<std::int64_t, 3>> star_conflicts;
};

/// Nondegeneracy of every affine piece plus local injectivity on vertex
/// stars, both at tolerance tol * scale.
ImmersionVerdict check_immersion(const PLMap& map, double tol);

struct EmbeddingVerdict {
  bool passed = false;
  /// Sorted pairs (a < b) of triangles closer than tol * scale; pairs that
  /// share vertices count only when they meet beyond the shared simplex.
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
};

/// Candidate pairs come from an AABB hierarchy built over the triangles in
/// the order given by `build_order` (identity when empty).
EmbeddingVerdict check_embedding(const PLMap& map, double tol,
                                 const std::vector<std::int64_t>& build_order = {});

/// Reference all-pairs version of check_embedding.
EmbeddingVerdict check_embedding_brute_force(const PLMap& map, double tol);

}  // namespace lagmesh
