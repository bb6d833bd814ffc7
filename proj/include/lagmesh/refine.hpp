#pragma once

// Completion of quadrangular meshes into triangular meshes by placing an
// apex over every facet: either the barycenter, or the optimal apex that
// makes the four triangles of the pyramid isotropic.

#include <Eigen/Core>

#include "lagmesh/mesh.hpp"

namespace lagmesh {

/// The linear system of the isotropic pyramid over (A0, A1, A2, A3):
/// row i is (J(A_{i+1} - A_i))^T and rhs_i = -omega(A_i, A_{i+1}), so that
/// matrix * P = rhs iff every triangle (P, A_i, A_{i+1}) is isotropic.
struct ApexSystem {
  Eigen::MatrixXd matrix;  // 4 x 2n
  Eigen::Vector4d rhs;
};
ApexSystem apex_system(const Eigen::MatrixXd& quad);

/// Largest edge length of the closed polygon with the given columns.
double polygon_scale(const Eigen::MatrixXd& points);

/// Point closest to the barycenter G solving the apex system, computed as
/// G + pinv(matrix) (rhs - matrix G) with singular values below
/// 1e-10 sigma_max discarded.  Throws NotIsotropic when
/// |Liouville(A0..A3)| > iso_tol.
Eigen::VectorXd optimal_apex(const Eigen::MatrixXd& quad, double iso_tol);

/// Dimension of the affine span of the four points: numerical rank of the
/// edge vectors from A0, singular values below rank_tol * sigma_max
/// treated as zero.
int quad_dimension(const Eigen::MatrixXd& quad, double rank_tol = 1e-9);

/// Numerical rank of the apex system matrix, same convention.
int apex_system_rank(const Eigen::MatrixXd& quad, double rank_tol = 1e-9);

/// Apex at z_kl = average of the four corners of f_kl.
TriMesh barycentric_apexes(const QuadMesh& mesh);

/// Apex at z_kl = optimal apex of the quadrilateral of f_kl.  Throws
/// NotIsotropic carrying the offending facet id.
TriMesh apex_refine(const QuadMesh& mesh, double iso_tol);

/// Default isotropy tolerance for apex_refine after a projection to
/// max |mu| <= solver_tol: 10 solver_tol N^{-2}.
double default_iso_tol(double solver_tol, int n);

}  // namespace lagmesh
