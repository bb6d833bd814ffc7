#pragma once

// Projection of a nearly isotropic quadrangular mesh onto mu_N^{-1}(0) by
// Gauss-Newton iteration with minimum-norm steps.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <utility>

#include "lagmesh/mesh.hpp"

namespace lagmesh {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Linearization of mu at `mesh`: a (facets) x (2n * vertices) matrix
/// acting on displacements stacked vertex by vertex, so that
///   L(delta)(f) = omega(U_delta(f), V(f)) + omega(U(f), V_delta(f)).
SparseMatrix mu_jacobian(const QuadMesh& mesh);

/// Stacks a 2n x V value matrix into the column vector L acts on.
inline Eigen::Map<const Eigen::VectorXd> flatten(const Eigen::MatrixXd& values) {
  return {values.data(), values.size()};
}

struct SolveOptions {
  double tol = 1e-10;        // target max facet |mu|
  int max_iter = 50;
  double inner_tol = 1e-12;  // relative residual of the inner solve
  int max_halvings = 10;     // step halvings when the residual grows
};

struct SolveReport {
  int iterations = 0;
  double residual_c0 = 0.0;
  double correction_c0 = 0.0;
  bool converged = false;
};

/// Minimum-norm solution of L delta = -mu restricted to the mean-zero part
/// of mu: delta = L^T y with (L L^T) y = -(mu - mean mu), solved by
/// conjugate gradients.  Throws LinearSolveFailure if the inner solve
/// does not reach `inner_tol`.
Eigen::VectorXd gauss_newton_step(const QuadMesh& mesh, double inner_tol = 1e-12);

/// Runs Gauss-Newton until max |mu| <= tol.  Throws MaxIterExceeded or
/// LinearSolveFailure.
std::pair<QuadMesh, SolveReport> project_isotropic(const QuadMesh& tau0,
                                                   const SolveOptions& options = {});

}  // namespace lagmesh
