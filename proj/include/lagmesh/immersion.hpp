#pragma once

// Smooth Gamma-periodic maps from the parameter plane E = R^2 to R^{2n},
// the built-in isotropic examples, and sampling onto meshes.

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>

#include "lagmesh/lattice.hpp"
#include "lagmesh/mesh.hpp"

namespace lagmesh {

/// Value and first derivatives [d/ds, d/dt] of a map at a point.
struct Jet {
  Eigen::VectorXd value;
  Eigen::MatrixXd differential;  // 2n x 2
};

struct ImmersionSpec {
  std::string name;
  int dim_n = 2;
  std::function<Eigen::VectorXd(const Eigen::Vector2d&)> eval;
  std::function<Jet(const Eigen::Vector2d&)> jet;
  Eigen::Matrix2d gamma_basis = Eigen::Matrix2d::Identity();
  /// eval(p + gamma_i) = eval(p) + period_shift.col(i); zero for tori.
  Eigen::MatrixXd period_shift;

  Eigen::Index dim() const { return 2 * dim_n; }
};

/// Closed plane curve of period 1 with its derivative.
struct PlaneCurve {
  std::function<Eigen::Vector2d(double)> point;
  std::function<Eigen::Vector2d(double)> tangent;
};

PlaneCurve circle_curve(double radius);

/// Lemniscate of Gerono, s -> (cos 2 pi s, sin 4 pi s / 2).  It crosses
/// itself at the origin, reached at the two parameters of
/// figure_eight_node_parameters().
PlaneCurve figure_eight_curve();
std::pair<double, double> figure_eight_node_parameters();

/// l(s, t) = (r1 cos 2 pi s, r1 sin 2 pi s, r2 cos 2 pi t, r2 sin 2 pi t).
ImmersionSpec make_clifford(double r1, double r2);

/// l(s, t) = (a(s), b(t)) in R^4.
ImmersionSpec make_product_torus(const PlaneCurve& curve_a, const PlaneCurve& curve_b,
                                 std::string name = "product");

/// The affine isotropic map l(s, t) = (s, 0, t, 0) with Gamma = Z^2,
/// equivariant with period shifts e_x1, e_x2.
ImmersionSpec make_flat_plane();

/// Wraps a user map; the jet falls back to central differences with step
/// `fd_step`.
ImmersionSpec make_from_map(std::string name, int dim_n,
                            std::function<Eigen::VectorXd(const Eigen::Vector2d&)> eval,
                            const Eigen::Matrix2d& gamma_basis,
                            Eigen::MatrixXd period_shift = Eigen::MatrixXd(),
                            double fd_step = 1e-5);

/// Central finite-difference differential of spec.eval.
Eigen::MatrixXd finite_difference_differential(const ImmersionSpec& spec,
                                               const Eigen::Vector2d& p, double step = 1e-5);

/// Built-in lookup: "clifford", "flat-plane", "product:<a>,<b>" with
/// curves "circle" or "figure8".  Throws ConfigError on unknown names.
ImmersionSpec spec_by_name(const std::string& name);

/// max over a grid_res x grid_res grid of the fundamental domain of
/// |omega(dl/ds, dl/dt)|.
double smooth_isotropy_defect(const ImmersionSpec& spec, int grid_res);

/// tau_N(v) = l(vertex_position(v)) for every canonical vertex.
QuadMesh sample_quad(const ImmersionSpec& spec, const Chart& chart);

/// tau'_N: the quad samples plus l(z_kl) at every facet barycenter.
TriMesh sample_tri(const ImmersionSpec& spec, const Chart& chart);

}  // namespace lagmesh
