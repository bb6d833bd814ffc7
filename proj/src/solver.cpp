#include "lagmesh/solver.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "lagmesh/density.hpp"
#include "lagmesh/errors.hpp"
#include "lagmesh/symplectic.hpp"

namespace lagmesh {
namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

SparseMatrix mu_jacobian(const QuadMesh& mesh) {
  const Chart& chart = mesh.chart();
  const Eigen::Index dim = mesh.dim();
  const std::int64_t count = mesh.size();
  const double scale = double(chart.n()) / std::sqrt(2.0);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(count * 4 * dim));
  for (std::int64_t row = 0; row < count; ++row) {
    const CellIndex f = chart.from_linear(row);
    const auto [u, v] = diagonals(mesh, f);
    const Eigen::VectorXd ju = scale * apply_j(u);
    const Eigen::VectorXd jv = scale * apply_j(v);
    const std::int64_t corner[4] = {
        chart.id_of(f), chart.id_of(translate(f, Direction::E1)),
        chart.id_of(translate(f, Direction::Tu)), chart.id_of(translate(f, Direction::E2))};
    for (Eigen::Index c = 0; c < dim; ++c) {
      triplets.emplace_back(row, corner[0] * dim + c, jv(c));
      triplets.emplace_back(row, corner[2] * dim + c, -jv(c));
      triplets.emplace_back(row, corner[1] * dim + c, -ju(c));
      triplets.emplace_back(row, corner[3] * dim + c, ju(c));
    }
  }
  SparseMatrix jac(count, count * dim);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

Eigen::VectorXd gauss_newton_step(const QuadMesh& mesh, double inner_tol) {
  const SparseMatrix jac = mu_jacobian(mesh);
  Eigen::VectorXd rhs = -symplectic_density(mesh).values();
  rhs.array() -= rhs.mean();
  if (rhs.norm() == 0.0) return Eigen::VectorXd::Zero(jac.cols());

  const Eigen::SparseMatrix<double> normal = jac * jac.transpose();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(inner_tol);
  cg.setMaxIterations(static_cast<Eigen::Index>(10 * normal.rows() + 100));
  cg.compute(normal);
  const Eigen::VectorXd y = cg.solve(rhs);
  const double rel = (normal * y - rhs).norm() / rhs.norm();
  if (!std::isfinite(rel) || rel > std::sqrt(inner_tol)) {
    std::ostringstream msg;
    msg << "inner least-squares solve stagnated (relative residual " << rel << " after "
        << cg.iterations() << " iterations)";
    throw LinearSolveFailure(msg.str());
  }
  return jac.transpose() * y;
}

std::pair<QuadMesh, SolveReport> project_isotropic(const QuadMesh& tau0,
                                                   const SolveOptions& options) {
  QuadMesh rho = tau0;
  SolveReport report;
  double residual = max_abs(symplectic_density(rho).values());
  while (residual > options.tol) {
    if (report.iterations >= options.max_iter) {
      std::ostringstream msg;
      msg << "residual " << residual << " above tolerance " << options.tol << " after "
          << options.max_iter << " iterations";
      throw MaxIterExceeded(msg.str());
    }
    const Eigen::VectorXd step = gauss_newton_step(rho, options.inner_tol);
    const Eigen::Map<const Eigen::MatrixXd> step_cols(step.data(), rho.dim(), rho.size());
    double length = 1.0;
    QuadMesh trial = rho;
    double trial_residual = 0.0;
    for (int halving = 0;; ++halving) {
      trial.values() = rho.values() + length * step_cols;
      trial_residual = max_abs(symplectic_density(trial).values());
      if (trial_residual <= residual || halving >= options.max_halvings) break;
      length *= 0.5;
    }
    rho = std::move(trial);
    residual = trial_residual;
    ++report.iterations;
  }
  report.residual_c0 = residual;
  report.correction_c0 = c0_distance(rho.values(), tau0.values());
  report.converged = true;
  return {std::move(rho), report};
}

}  // namespace lagmesh
