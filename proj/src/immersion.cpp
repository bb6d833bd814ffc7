#include "lagmesh/immersion.hpp"

#include <cmath>
#include <numbers>

#include "lagmesh/errors.hpp"
#include "lagmesh/symplectic.hpp"

namespace lagmesh {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PlaneCurve curve_by_name(const std::string& name) {
  if (name == "circle") return circle_curve(1.0);
  if (name == "figure8") return figure_eight_curve();
  throw ConfigError("unknown curve '" + name + "'");
}

}  // namespace

PlaneCurve circle_curve(double radius) {
  return {[radius](double s) {
            return Eigen::Vector2d(radius * std::cos(kTwoPi * s), radius * std::sin(kTwoPi * s));
          },
          [radius](double s) {
            return Eigen::Vector2d(-kTwoPi * radius * std::sin(kTwoPi * s),
                                   kTwoPi * radius * std::cos(kTwoPi * s));
          }};
}

PlaneCurve figure_eight_curve() {
  return {[](double s) {
            return Eigen::Vector2d(std::cos(kTwoPi * s), 0.5 * std::sin(2.0 * kTwoPi * s));
          },
          [](double s) {
            return Eigen::Vector2d(-kTwoPi * std::sin(kTwoPi * s),
                                   kTwoPi * std::cos(2.0 * kTwoPi * s));
          }};
}

std::pair<double, double> figure_eight_node_parameters() { return {0.25, 0.75}; }

ImmersionSpec make_product_torus(const PlaneCurve& curve_a, const PlaneCurve& curve_b,
                                 std::string name) {
  ImmersionSpec spec;
  spec.name = std::move(name);
  spec.dim_n = 2;
  spec.eval = [curve_a, curve_b](const Eigen::Vector2d& p) {
    Eigen::VectorXd v(4);
    v.head<2>() = curve_a.point(p(0));
    v.tail<2>() = curve_b.point(p(1));
    return v;
  };
  spec.jet = [curve_a, curve_b](const Eigen::Vector2d& p) {
    Jet j;
    j.value.resize(4);
    j.value.head<2>() = curve_a.point(p(0));
    j.value.tail<2>() = curve_b.point(p(1));
    j.differential = Eigen::MatrixXd::Zero(4, 2);
    j.differential.block<2, 1>(0, 0) = curve_a.tangent(p(0));
    j.differential.block<2, 1>(2, 1) = curve_b.tangent(p(1));
    return j;
  };
  spec.gamma_basis = Eigen::Matrix2d::Identity();
  spec.period_shift = Eigen::MatrixXd::Zero(4, 2);
  return spec;
}

ImmersionSpec make_clifford(double r1, double r2) {
  return make_product_torus(circle_curve(r1), circle_curve(r2), "clifford");
}

ImmersionSpec make_flat_plane() {
  ImmersionSpec spec;
  spec.name = "flat-plane";
  spec.dim_n = 2;
  spec.eval = [](const Eigen::Vector2d& p) {
    Eigen::VectorXd v(4);
    v << p(0), 0.0, p(1), 0.0;
    return v;
  };
  spec.jet = [eval = spec.eval](const Eigen::Vector2d& p) {
    Jet j;
    j.value = eval(p);
    j.differential = Eigen::MatrixXd::Zero(4, 2);
    j.differential(0, 0) = 1.0;
    j.differential(2, 1) = 1.0;
    return j;
  };
  spec.gamma_basis = Eigen::Matrix2d::Identity();
  spec.period_shift = Eigen::MatrixXd::Zero(4, 2);
  spec.period_shift(0, 0) = 1.0;
  spec.period_shift(2, 1) = 1.0;
  return spec;
}

Eigen::MatrixXd finite_difference_differential(const ImmersionSpec& spec,
                                               const Eigen::Vector2d& p, double step) {
  Eigen::MatrixXd d(spec.dim(), 2);
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2d h = Eigen::Vector2d::Zero();
    h(i) = step;
    d.col(i) = (spec.eval(p + h) - spec.eval(p - h)) / (2.0 * step);
  }
  return d;
}

ImmersionSpec make_from_map(std::string name, int dim_n,
                            std::function<Eigen::VectorXd(const Eigen::Vector2d&)> eval,
                            const Eigen::Matrix2d& gamma_basis, Eigen::MatrixXd period_shift,
                            double fd_step) {
  ImmersionSpec spec;
  spec.name = std::move(name);
  spec.dim_n = dim_n;
  spec.eval = std::move(eval);
  spec.gamma_basis = gamma_basis;
  spec.period_shift = period_shift.size() == 0 ? Eigen::MatrixXd::Zero(2 * dim_n, 2)
                                               : std::move(period_shift);
  spec.jet = [eval = spec.eval, dim_n, fd_step](const Eigen::Vector2d& p) {
    Jet j;
    j.value = eval(p);
    j.differential.resize(2 * dim_n, 2);
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d h = Eigen::Vector2d::Zero();
      h(i) = fd_step;
      j.differential.col(i) = (eval(p + h) - eval(p - h)) / (2.0 * fd_step);
    }
    return j;
  };
  return spec;
}

ImmersionSpec spec_by_name(const std::string& name) {
  if (name == "clifford") return make_clifford(1.0, 1.0);
  if (name == "flat-plane") return make_flat_plane();
  const std::string prefix = "product:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ConfigError("product spec needs two curves: " + name);
    return make_product_torus(curve_by_name(rest.substr(0, comma)),
                              curve_by_name(rest.substr(comma + 1)), name);
  }
  throw ConfigError("unknown spec '" + name + "'");
}

double smooth_isotropy_defect(const ImmersionSpec& spec, int grid_res) {
  double defect = 0.0;
  for (int i = 0; i < grid_res; ++i) {
    for (int j = 0; j < grid_res; ++j) {
      const Eigen::Vector2d p = spec.gamma_basis * Eigen::Vector2d(double(i) / grid_res,
                                                                   double(j) / grid_res);
      const Jet jet = spec.jet(p);
      defect = std::max(defect, std::abs(pullback_omega(jet.differential)));
    }
  }
  return defect;
}

QuadMesh sample_quad(const ImmersionSpec& spec, const Chart& chart) {
  const std::int64_t count = chart.cell_count();
  Eigen::MatrixXd values(spec.dim(), count);
  for (std::int64_t id = 0; id < count; ++id) {
    values.col(id) = spec.eval(chart.vertex_position(chart.from_linear(id)));
  }
  return QuadMesh(chart, std::move(values), spec.period_shift);
}

TriMesh sample_tri(const ImmersionSpec& spec, const Chart& chart) {
  const std::int64_t count = chart.cell_count();
  QuadMesh quad = sample_quad(spec, chart);
  Eigen::MatrixXd apexes(spec.dim(), count);
  for (std::int64_t id = 0; id < count; ++id) {
    apexes.col(id) = spec.eval(chart.facet_center(chart.from_linear(id)));
  }
  return TriMesh(chart, quad.values(), std::move(apexes), spec.period_shift);
}

}  // namespace lagmesh
