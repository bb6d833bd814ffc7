#pragma once

// Linear symplectic algebra on R^{2n} with coordinates ordered
// (x1, y1, ..., xn, yn).  omega = sum dx_j ^ dy_j, lambda = sum x_j dy_j.

#include <Eigen/Core>
#include <cassert>

namespace lagmesh {

template <typename Scalar>
using PointN = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// omega(a, b) = sum_j a_xj b_yj - a_yj b_xj.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar omega(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
  assert(a.size() == b.size() && a.size() % 2 == 0);
  typename DerivedA::Scalar s(0);
  for (Eigen::Index j = 0; j + 1 < a.size(); j += 2) {
    s += a(j) * b(j + 1) - a(j + 1) * b(j);
  }
  return s;
}

/// Complex structure J(x_j, y_j) = (-y_j, x_j), so that omega(a, b) = <Ja, b>.
template <typename Derived>
PointN<typename Derived::Scalar> apply_j(const Eigen::MatrixBase<Derived>& a) {
  PointN<typename Derived::Scalar> out(a.size());
  for (Eigen::Index j = 0; j + 1 < a.size(); j += 2) {
    out(j) = -a(j + 1);
    out(j + 1) = a(j);
  }
  return out;
}

/// Matrix of J in the canonical basis.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> j_matrix(Eigen::Index dim) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  for (Eigen::Index j = 0; j + 1 < dim; j += 2) {
    m(j, j + 1) = Scalar(-1);
    m(j + 1, j) = Scalar(1);
  }
  return m;
}

/// Integral of the Liouville form along the closed polygon whose vertices
/// are the columns of `points`.  Evaluated relative to the first vertex,
/// which leaves the exact value unchanged and avoids cancellation.
template <typename Derived>
typename Derived::Scalar liouville_polygon(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index count = points.cols();
  assert(count >= 3);
  Scalar s(0);
  for (Eigen::Index i = 1; i + 1 < count; ++i) {
    s += omega(points.col(i) - points.col(0), points.col(i + 1) - points.col(0));
  }
  return s / Scalar(2);
}

/// Pullback of omega by the linear map with columns (ds, dt).
template <typename Derived>
typename Derived::Scalar pullback_omega(const Eigen::MatrixBase<Derived>& differential) {
  return omega(differential.col(0), differential.col(1));
}

}  // namespace lagmesh
