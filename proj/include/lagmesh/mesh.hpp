#pragma once

// Discrete fields on the quotient quadrangulation: quadrangular meshes
// (R^{2n} per vertex), scalar facet fields, and triangular meshes (corners
// plus one apex per facet).
//
// Values are stored per canonical index, one column each.  A mesh may carry
// a period shift S (2n x 2): the value at a raw index is the stored value
// plus S c, where raw = canonical + M c.  S = 0 for maps of the torus; a
// nonzero S represents a Gamma-equivariant map of the plane such as an
// affine one.

#include <Eigen/Core>
#include <cstdint>

#include "lagmesh/lattice.hpp"

namespace lagmesh {

class QuadMesh {
 public:
  QuadMesh() = default;
  QuadMesh(Chart chart, Eigen::MatrixXd values);
  QuadMesh(Chart chart, Eigen::MatrixXd values, Eigen::MatrixXd period_shift);

  const Chart& chart() const { return chart_; }
  Eigen::Index dim() const { return values_.rows(); }
  std::int64_t size() const { return chart_.cell_count(); }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& period_shift() const { return shift_; }

  /// Lifted value at any raw vertex index.
  Eigen::VectorXd at(CellIndex raw) const;

  /// The quadrilateral (A0, A1, A2, A3) of facet f_kl as columns, lifted
  /// consistently around the raw facet index.
  Eigen::MatrixXd facet_quad(CellIndex f) const;

 private:
  Chart chart_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd shift_;
};

/// Scalar function on the facets of the quotient quadrangulation.
class FacetField {
 public:
  FacetField() = default;
  FacetField(Chart chart, Eigen::VectorXd values);

  const Chart& chart() const { return chart_; }
  std::int64_t size() const { return chart_.cell_count(); }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }

  double at(CellIndex raw) const { return values_(chart_.id_of(raw)); }

 private:
  Chart chart_;
  Eigen::VectorXd values_;
};

/// Values on the vertices of the triangulation T_N: the quadrangulation
/// vertices v_kl and the facet barycenters z_kl.  Triangles are numbered
/// 4 * facet_id + j with, for facet f_kl,
///   j = 0: (v_kl,       v_{k+1,l},   z_kl)
///   j = 1: (v_{k+1,l},  v_{k+1,l+1}, z_kl)
///   j = 2: (v_{k+1,l+1}, v_{k,l+1},  z_kl)
///   j = 3: (v_{k,l+1},  v_kl,        z_kl)
class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(Chart chart, Eigen::MatrixXd corners, Eigen::MatrixXd apexes,
          Eigen::MatrixXd period_shift);

  const Chart& chart() const { return chart_; }
  Eigen::Index dim() const { return corners_.rows(); }
  std::int64_t facet_count() const { return chart_.cell_count(); }
  std::int64_t triangle_count() const { return 4 * chart_.cell_count(); }

  const Eigen::MatrixXd& corners() const { return corners_; }
  Eigen::MatrixXd& corners() { return corners_; }
  const Eigen::MatrixXd& apexes() const { return apexes_; }
  Eigen::MatrixXd& apexes() { return apexes_; }
  const Eigen::MatrixXd& period_shift() const { return shift_; }

  Eigen::VectorXd corner_at(CellIndex raw) const;
  Eigen::VectorXd apex_at(CellIndex raw) const;

  /// Corner part as a quadrangular mesh.
  QuadMesh quad() const { return QuadMesh(chart_, corners_, shift_); }

 private:
  Chart chart_;
  Eigen::MatrixXd corners_;
  Eigen::MatrixXd apexes_;
  Eigen::MatrixXd shift_;
};

/// Offsets of the two corners of sub-triangle j relative to the facet's
/// lower-left corner; the third vertex is the apex at (1/2, 1/2).
struct SubTriangle {
  int corner_a[2];
  int corner_b[2];
};
inline constexpr SubTriangle kSubTriangles[4] = {
    {{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}};

/// Componentwise maximum Euclidean norm of the column differences.
double c0_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace lagmesh
