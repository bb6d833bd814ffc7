#pragma once

// Square lattices Lambda_N = (Z e1 + Z e2) / N, their quotient by a period
// lattice Gamma, and the almost-isometric linear charts r_N identifying the
// two.  Indices (k, l) address both the vertex v_kl = (k, l) / N and the
// facet f_kl whose lower-left corner is v_kl.

#include <Eigen/Core>
#include <cstdint>
#include <utility>

namespace lagmesh {

using Matrix2i64 = Eigen::Matrix<std::int64_t, 2, 2>;
using Vector2i64 = Eigen::Matrix<std::int64_t, 2, 1>;

struct CellIndex {
  std::int64_t k = 0;
  std::int64_t l = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

enum class Direction { Tu, Tv, E1, E2 };

/// Lattice data of the N-th quadrangulation of the torus R^2 / Gamma.
///
/// The columns m1, m2 of M are the index coordinates of the periods:
/// A_N (m_i / N) = gamma_i exactly.  Coset representatives of Z^2 / M Z^2
/// come from the column Hermite normal form H = M U,
///   H = [[h11, 0], [h21, h22]],  h11, h22 > 0,  0 <= h21 < h22,
/// and are the indices with 0 <= k < h11, 0 <= l < h22.
class Chart {
 public:
  Chart() = default;

  int n() const { return n_; }
  const Eigen::Matrix2d& gamma_basis() const { return gamma_; }
  const Matrix2i64& m_matrix() const { return m_; }
  const Eigen::Matrix2d& a_matrix() const { return a_; }
  const Eigen::Matrix2d& reference_isometry() const { return reference_; }
  const Matrix2i64& hermite_form() const { return hnf_; }

  /// Number of vertices (equivalently facets) of the quotient, |det M|.
  std::int64_t cell_count() const { return hnf_(0, 0) * hnf_(1, 1); }

  /// Canonical representative together with the coefficients c of the
  /// period lattice such that raw = canonical + M c.
  std::pair<CellIndex, Vector2i64> reduce(CellIndex raw) const;
  CellIndex canonical(CellIndex raw) const { return reduce(raw).first; }

  /// Dense id in [0, cell_count()) of a canonical index.
  std::int64_t linear_id(CellIndex canonical) const {
    return canonical.k * hnf_(1, 1) + canonical.l;
  }
  std::int64_t id_of(CellIndex raw) const { return linear_id(canonical(raw)); }
  CellIndex from_linear(std::int64_t id) const {
    return {id / hnf_(1, 1), id % hnf_(1, 1)};
  }

  /// A_N (k, l) / N, a point of the parameter plane E.
  Eigen::Vector2d vertex_position(CellIndex v) const;
  /// Barycenter z_kl of the facet f_kl in E.
  Eigen::Vector2d facet_center(CellIndex f) const;
  /// Inverse of the vertex map: N A_N^{-1} p, real-valued index coordinates.
  Eigen::Vector2d index_coordinates(const Eigen::Vector2d& p) const;

  friend Chart build_chart(const Eigen::Matrix2d& gamma_basis,
                           const Eigen::Matrix2d& reference_isometry, int n);

 private:
  int n_ = 0;
  Eigen::Matrix2d gamma_ = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d reference_ = Eigen::Matrix2d::Identity();
  Matrix2i64 m_ = Matrix2i64::Identity();
  Eigen::Matrix2d a_ = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d a_inv_ = Eigen::Matrix2d::Identity();
  Matrix2i64 hnf_ = Matrix2i64::Identity();
  Matrix2i64 unimodular_ = Matrix2i64::Identity();  // hnf_ = m_ * unimodular_
};

/// m_i = round(N R^{-1} gamma_i) (half away from zero), A_N = B (M / N)^{-1}.
/// Throws DegenerateLattice when det M = 0.
Chart build_chart(const Eigen::Matrix2d& gamma_basis,
                  const Eigen::Matrix2d& reference_isometry, int n);

inline CellIndex canonical_index(const Chart& chart, CellIndex raw) {
  return chart.canonical(raw);
}

inline Eigen::Vector2d vertex_position(const Chart& chart, CellIndex v) {
  return chart.vertex_position(v);
}

/// T_u: (k, l) -> (k + s, l + s);  T_v: (k, l) -> (k - s, l + s).
constexpr CellIndex translate(CellIndex cell, Direction dir, std::int64_t steps = 1) {
  switch (dir) {
    case Direction::Tu:
      return {cell.k + steps, cell.l + steps};
    case Direction::Tv:
      return {cell.k - steps, cell.l + steps};
    case Direction::E1:
      return {cell.k + steps, cell.l};
    case Direction::E2:
      return {cell.k, cell.l + steps};
  }
  return cell;
}

/// Rotation of the plane by `angle` radians.
Eigen::Matrix2d rotation(double angle);

/// Floor division for signed integers.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace lagmesh
