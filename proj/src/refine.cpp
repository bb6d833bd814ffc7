#include "lagmesh/refine.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "lagmesh/errors.hpp"
#include "lagmesh/symplectic.hpp"

namespace lagmesh {
namespace {

constexpr double kApexCutoff = 1e-10;

int numerical_rank(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol * s(0)) ++rank;
  }
  return rank;
}

}  // namespace

ApexSystem apex_system(const Eigen::MatrixXd& quad) {
  ApexSystem sys;
  sys.matrix.resize(4, quad.rows());
  for (int i = 0; i < 4; ++i) {
    const int next = (i + 1) % 4;
    sys.matrix.row(i) = apply_j(quad.col(next) - quad.col(i)).transpose();
    sys.rhs(i) = -omega(quad.col(i), quad.col(next));
  }
  return sys;
}

double polygon_scale(const Eigen::MatrixXd& points) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    scale = std::max(scale, (points.col((i + 1) % points.cols()) - points.col(i)).norm());
  }
  return scale;
}

Eigen::VectorXd optimal_apex(const Eigen::MatrixXd& quad, double iso_tol) {
  const double liouville = liouville_polygon(quad);
  if (std::abs(liouville) > iso_tol) {
    std::ostringstream msg;
    msg << "quadrilateral is not isotropic: Liouville integral " << liouville
        << " exceeds tolerance " << iso_tol;
    throw NotIsotropic(msg.str());
  }
  const Eigen::VectorXd barycenter = quad.rowwise().mean();
  // Shift the origin to the barycenter: the unknown is q = P - G.
  const Eigen::MatrixXd centered = quad.colwise() - barycenter;
  const ApexSystem sys = apex_system(centered);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(quad.rows());
  if (s.size() > 0 && s(0) > 0.0) {
    const Eigen::VectorXd utb = svd.matrixU().transpose() * sys.rhs;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > kApexCutoff * s(0)) q += (utb(i) / s(i)) * svd.matrixV().col(i);
    }
  }
  return barycenter + q;
}

int quad_dimension(const Eigen::MatrixXd& quad, double rank_tol) {
  Eigen::MatrixXd edges(quad.rows(), 3);
  for (int i = 0; i < 3; ++i) edges.col(i) = quad.col(i + 1) - quad.col(0);
  return numerical_rank(edges, rank_tol);
}

int apex_system_rank(const Eigen::MatrixXd& quad, double rank_tol) {
  return numerical_rank(apex_system(quad).matrix, rank_tol);
}

TriMesh barycentric_apexes(const QuadMesh& mesh) {
  const Chart& chart = mesh.chart();
  Eigen::MatrixXd apexes(mesh.dim(), mesh.size());
  for (std::int64_t id = 0; id < mesh.size(); ++id) {
    apexes.col(id) = mesh.facet_quad(chart.from_linear(id)).rowwise().mean();
  }
  return TriMesh(chart, mesh.values(), std::move(apexes), mesh.period_shift());
}

TriMesh apex_refine(const QuadMesh& mesh, double iso_tol) {
  const Chart& chart = mesh.chart();
  Eigen::MatrixXd apexes(mesh.dim(), mesh.size());
  for (std::int64_t id = 0; id < mesh.size(); ++id) {
    try {
      apexes.col(id) = optimal_apex(mesh.facet_quad(chart.from_linear(id)), iso_tol);
    } catch (const NotIsotropic& e) {
      throw NotIsotropic("facet " + std::to_string(id) + ": " + e.what(), id);
    }
  }
  return TriMesh(chart, mesh.values(), std::move(apexes), mesh.period_shift());
}

double default_iso_tol(double solver_tol, int n) {
  return 10.0 * solver_tol / (double(n) * double(n));
}

}  // namespace lagmesh
