#include "lagmesh/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

namespace lagmesh {
namespace {

// Lagrange-Gauss reduction of an integer lattice basis (columns) for the
// quadratic form `gram`.
Matrix2i64 reduce_basis(Matrix2i64 b, const Eigen::Matrix2d& gram) {
  using Vec = Vector2i64;
  const auto dot = [&](const Vec& x, const Vec& y) {
    return x.cast<double>().dot(gram * y.cast<double>());
  };
  Vec u = b.col(0), v = b.col(1);
  if (dot(u, u) > dot(v, v)) std::swap(u, v);
  for (;;) {
    const auto mu = static_cast<std::int64_t>(std::llround(dot(u, v) / dot(u, u)));
    v -= mu * u;
    if (dot(v, v) >= dot(u, u)) break;
    std::swap(u, v);
  }
  Matrix2i64 out;
  out << u, v;
  return out;
}

double holder_seminorm_exact(const FacetField& field, double alpha,
                             const DiagonalDistanceTable& dist) {
  const Chart& chart = field.chart();
  const std::int64_t count = field.size();
  const Eigen::VectorXd& phi = field.values();
  double sup = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    const CellIndex fi = chart.from_linear(i);
    for (std::int64_t j = i + 1; j < count; ++j) {
      const CellIndex fj = chart.from_linear(j);
      const double d = dist({fi.k - fj.k, fi.l - fj.l});
      if (!std::isfinite(d) || d <= 0.0) continue;
      sup = std::max(sup, std::abs(phi(i) - phi(j)) / std::pow(d, alpha));
    }
  }
  return sup;
}

double holder_seminorm_sampled(const FacetField& field, double alpha,
                               const DiagonalDistanceTable& dist, std::int64_t pairs,
                               std::uint64_t seed) {
  const Chart& chart = field.chart();
  const Eigen::VectorXd& phi = field.values();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(0, field.size() - 1);
  double sup = 0.0;
  for (std::int64_t s = 0; s < pairs; ++s) {
    const std::int64_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const CellIndex fi = chart.from_linear(i), fj = chart.from_linear(j);
    const double d = dist({fi.k - fj.k, fi.l - fj.l});
    if (!std::isfinite(d) || d <= 0.0) continue;
    sup = std::max(sup, std::abs(phi(i) - phi(j)) / std::pow(d, alpha));
  }
  return sup;
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> diagonals(const QuadMesh& mesh, CellIndex f) {
  const double scale = double(mesh.chart().n()) / std::sqrt(2.0);
  const Eigen::MatrixXd q = mesh.facet_quad(f);
  return {scale * (q.col(2) - q.col(0)), scale * (q.col(3) - q.col(1))};
}

FacetField symplectic_density(const QuadMesh& mesh) {
  const Chart& chart = mesh.chart();
  Eigen::VectorXd mu(mesh.size());
  for (std::int64_t id = 0; id < mesh.size(); ++id) {
    const auto [u, v] = diagonals(mesh, chart.from_linear(id));
    mu(id) = omega(u, v);
  }
  return FacetField(chart, std::move(mu));
}

double max_facet_liouville(const QuadMesh& mesh) {
  double worst = 0.0;
  for (std::int64_t id = 0; id < mesh.size(); ++id) {
    const Eigen::MatrixXd q = mesh.facet_quad(mesh.chart().from_linear(id));
    worst = std::max(worst, std::abs(liouville_polygon(q)));
  }
  return worst;
}

FacetField finite_difference(const FacetField& field, Direction dir) {
  const Chart& chart = field.chart();
  const double scale = double(chart.n()) / std::sqrt(2.0);
  Eigen::VectorXd out(field.size());
  for (std::int64_t id = 0; id < field.size(); ++id) {
    const CellIndex f = chart.from_linear(id);
    out(id) = scale * (field.at(translate(f, dir)) - field.values()(id));
  }
  return FacetField(chart, std::move(out));
}

DiagonalDistanceTable::DiagonalDistanceTable(const Chart& chart) : chart_(chart) {
  const std::int64_t count = chart.cell_count();
  // Index differences w map to chart displacements A w / N.
  const Eigen::Matrix2d to_chart = chart.a_matrix() / double(chart.n());
  const Eigen::Matrix2d gram = to_chart.transpose() * to_chart;
  const Matrix2i64 reduced = reduce_basis(chart.m_matrix(), gram);
  const Eigen::Matrix2d reduced_inv = reduced.cast<double>().inverse();

  constexpr int kSearch = 3;
  table_.resize(count);
  for (std::int64_t id = 0; id < count; ++id) {
    const CellIndex delta = chart.from_linear(id);
    const Eigen::Vector2d coeffs = reduced_inv * Eigen::Vector2d(double(delta.k), double(delta.l));
    const std::int64_t c0 = std::llround(coeffs(0));
    const std::int64_t c1 = std::llround(coeffs(1));
    double best = std::numeric_limits<double>::infinity();
    for (int a = -kSearch; a <= kSearch; ++a) {
      for (int b = -kSearch; b <= kSearch; ++b) {
        const Vector2i64 w = Vector2i64(delta.k, delta.l) - (c0 + a) * reduced.col(0) - (c1 + b) * reduced.col(1);
        // Only differences reachable by diagonal translations.
        if (((w(0) + w(1)) % 2 + 2) % 2 != 0) continue;
        best = std::min(best, (to_chart * w.cast<double>()).norm());
      }
    }
    table_(id) = best;
  }
}

double weak_norm(const FacetField& field, const WeakNorm& norm) {
  const double c0 = field.size() == 0 ? 0.0 : field.values().cwiseAbs().maxCoeff();
  switch (norm.kind) {
    case NormKind::C0:
      return c0;
    case NormKind::C1Weak: {
      const double du = finite_difference(field, Direction::Tu).values().cwiseAbs().maxCoeff();
      const double dv = finite_difference(field, Direction::Tv).values().cwiseAbs().maxCoeff();
      return c0 + std::max(du, dv);
    }
    case NormKind::HolderWeak: {
      const DiagonalDistanceTable dist(field.chart());
      const double semi =
          field.size() <= norm.exact_limit
              ? holder_seminorm_exact(field, norm.alpha, dist)
              : holder_seminorm_sampled(field, norm.alpha, dist, norm.sampled_pairs, norm.seed);
      return c0 + semi;
    }
  }
  return c0;
}

}  // namespace lagmesh
