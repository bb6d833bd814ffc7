#pragma once

// Discrete symplectic geometry of quadrangular meshes: facet diagonals,
// the symplectic density mu_N, finite differences along the diagonal
// translations T_u and T_v, and the weak norms built from them.

#include <Eigen/Core>
#include <cstdint>
#include <utility>

#include "lagmesh/mesh.hpp"
#include "lagmesh/symplectic.hpp"

namespace lagmesh {

/// Renormalized diagonals of the quadrilateral of facet f:
///   U = N / sqrt(2) (tau(v_{k+1,l+1}) - tau(v_kl)),
///   V = N / sqrt(2) (tau(v_{k,l+1}) - tau(v_{k+1,l})).
std::pair<Eigen::VectorXd, Eigen::VectorXd> diagonals(const QuadMesh& mesh, CellIndex f);

/// mu(f) = omega(U(f), V(f)) for every facet.  N^{-2} mu(f) is the Liouville
/// integral along the facet's quadrilateral.
FacetField symplectic_density(const QuadMesh& mesh);

/// Largest |Liouville integral| over the facet quadrilaterals, computed
/// directly from the polygon rather than through mu.
double max_facet_liouville(const QuadMesh& mesh);

/// (N / sqrt 2)(phi o T - phi) for T = T_u or T_v.
FacetField finite_difference(const FacetField& field, Direction dir);

enum class NormKind { C0, C1Weak, HolderWeak };

struct WeakNorm {
  NormKind kind = NormKind::C0;
  double alpha = 0.5;
  /// Above this many facets the Holder supremum is estimated from
  /// `sampled_pairs` random pairs drawn with `seed`.
  std::int64_t exact_limit = 4096;
  std::int64_t sampled_pairs = 100000;
  std::uint64_t seed = 1;
};

/// C0 = max |phi|; C1_w = C0 + max(|d phi/du|_C0, |d phi/dv|_C0);
/// C0alpha_w = C0 + sup |phi(f1) - phi(f2)| / d(f1, f2)^alpha over pairs
/// related by diagonal translations, d measured between barycenters in
/// chart coordinates (index / N) and minimized over period translates.
double weak_norm(const FacetField& field, const WeakNorm& norm);

inline double c0_norm(const FacetField& field) { return weak_norm(field, {NormKind::C0}); }
inline double c1w_norm(const FacetField& field) { return weak_norm(field, {NormKind::C1Weak}); }
inline double holder_w_norm(const FacetField& field, double alpha = 0.5) {
  return weak_norm(field, {NormKind::HolderWeak, alpha});
}

/// Chart distance between the barycenters of two facets joined by a
/// diagonal translation path, minimized over period translates; infinity
/// when no such path exists.  `diff` is the raw index difference f1 - f2.
/// Entries are tabulated per canonical difference class.
class DiagonalDistanceTable {
 public:
  explicit DiagonalDistanceTable(const Chart& chart);
  double operator()(CellIndex diff) const { return table_(chart_.id_of(diff)); }

 private:
  Chart chart_;
  Eigen::VectorXd table_;
};

}  // namespace lagmesh
