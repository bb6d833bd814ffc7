#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "lagmesh/immersion.hpp"
#include "lagmesh/plmap.hpp"
#include "lagmesh/refine.hpp"
#include "lagmesh/solver.hpp"

using namespace lagmesh;

namespace {

PLMap solved_map(const std::string& name, int n, double angle) {
  const ImmersionSpec spec = spec_by_name(name);
  const QuadMesh tau = sample_quad(spec, build_chart(spec.gamma_basis, rotation(angle), n));
  const QuadMesh rho = project_isotropic(tau).first;
  return PLMap(apex_refine(rho, default_iso_tol(1e-10, n)));
}

// Value of the affine piece of triangle t at domain point p.
Eigen::VectorXd affine_piece(const PLMap::Triangle& t, const Eigen::Vector2d& p) {
  Eigen::Matrix3d sys;
  sys << t.domain, Eigen::RowVector3d::Ones();
  const Eigen::Vector3d w = sys.inverse() * Eigen::Vector3d(p(0), p(1), 1.0);
  return t.image * w;
}

}  // namespace

TEST_SUITE("plmap") {

TEST_CASE("interpolation at vertices, apexes and edge midpoints") {
  std::mt19937_64 rng(1);
  const Chart chart = build_chart(testing::hexagonal_basis(), rotation(0.2), 6);
  const TriMesh tri(chart, testing::random_matrix(4, chart.cell_count(), rng),
                    testing::random_matrix(4, chart.cell_count(), rng), Eigen::MatrixXd::Zero(4, 2));
  const PLMap map = build_pl(tri);
  CHECK(map.triangle_count() == 4 * chart.cell_count());
  CHECK(map.vertex_count() == 2 * chart.cell_count());
  for (std::int64_t id = 0; id < chart.cell_count(); ++id) {
    const CellIndex f = chart.from_linear(id);
    CHECK((eval_pl(map, chart.vertex_position(f)) - tri.corners().col(id)).norm() <= 1e-13);
    const Eigen::Vector2d z = chart.facet_center(f);
    CHECK((eval_pl(map, z) - tri.apexes().col(id)).norm() <= 1e-13);
    const Eigen::Vector2d mid = 0.5 * (chart.vertex_position(f) + z);
    CHECK((eval_pl(map, mid) - 0.5 * (tri.corners().col(id) + tri.apexes().col(id))).norm() <= 1e-13);
  }
}

TEST_CASE("triangle connectivity follows the pyramid pattern") {
  const Chart chart = testing::identity_chart(3);
  const PLMap map(sample_tri(make_clifford(1, 1), chart));
  const std::int64_t f = chart.linear_id({2, 1});
  const auto id = [&](std::int64_t k, std::int64_t l) { return chart.id_of({k, l}); };
  const std::int64_t apex = chart.cell_count() + f;
  CHECK(map.triangle(4 * f + 0).vertex_ids == std::array<std::int64_t, 3>{id(2, 1), id(3, 1), apex});
  CHECK(map.triangle(4 * f + 1).vertex_ids == std::array<std::int64_t, 3>{id(3, 1), id(3, 2), apex});
  CHECK(map.triangle(4 * f + 2).vertex_ids == std::array<std::int64_t, 3>{id(3, 2), id(2, 2), apex});
  CHECK(map.triangle(4 * f + 3).vertex_ids == std::array<std::int64_t, 3>{id(2, 2), id(2, 1), apex});
}

TEST_CASE("affine maps are reproduced exactly") {
  const ImmersionSpec flat = make_flat_plane();
  for (int n : {2, 4, 7}) {
    const Chart chart = testing::identity_chart(n);
    const QuadMesh tau = sample_quad(flat, chart);
    const PLMap map(apex_refine(tau, 1e-12));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
      const Eigen::Vector2d p(u(rng), u(rng));
      CHECK((map.eval(p) - flat.eval(p)).norm() <= 1e-12);
    }
    CHECK(distance_c0(map, flat) <= 1e-13);
    CHECK(distance_c1(map, flat) <= 1e-13);
    for (std::int64_t t = 0; t < map.triangle_count(); ++t) {
      CHECK((facet_differential(map, t) - flat.jet(Eigen::Vector2d::Zero()).differential).norm() <= 1e-13);
    }
    CHECK(pl_isotropy_residual(map).maxCoeff() == 0.0);
  }
}

TEST_CASE("evaluation is periodic and continuous") {
  const Chart chart = build_chart(testing::hexagonal_basis(), rotation(0.1), 7);
  std::mt19937_64 rng(3);
  const TriMesh tri(chart, testing::random_matrix(4, chart.cell_count(), rng),
                    testing::random_matrix(4, chart.cell_count(), rng), Eigen::MatrixXd::Zero(4, 2));
  const PLMap map(tri);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector2d p(u(rng), u(rng));
    for (int g = 0; g < 2; ++g) {
      CHECK((map.eval(p + chart.gamma_basis().col(g)) - map.eval(p)).norm() <= 1e-12);
    }
  }
  // Interior edges: corner-apex edges shared by consecutive sub-triangles of a facet,
  // and facet boundary edges shared with the neighbouring facet.
  std::uniform_int_distribution<std::int64_t> pick(0, chart.cell_count() - 1);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t f = pick(rng);
    const int j = static_cast<int>(i % 4);
    const double s = u(rng);
    const PLMap::Triangle& t = map.triangle(4 * f + j);
    if (i % 2 == 0) {
      const PLMap::Triangle& next = map.triangle(4 * f + (j + 1) % 4);
      const Eigen::Vector2d p = (1 - s) * t.domain.col(1) + s * t.domain.col(2);
      CHECK((affine_piece(t, p) - affine_piece(next, p)).norm() <= 1e-12);
    } else {
      const Eigen::Vector2d p = (1 - s) * t.domain.col(0) + s * t.domain.col(1);
      const Eigen::Vector2d inward = (t.domain.col(2) - p) * 1e-9;
      const Eigen::Vector2d outward = -inward;
      const auto [other, raw] = map.locate(p + outward);
      const PLMap::Triangle& o = map.triangle(other);
      // Move p into the lift of the neighbouring facet.
      const Eigen::Vector2d offset = chart.vertex_position(chart.canonical(raw)) - chart.vertex_position(raw);
      CHECK(other / 4 != f);
      CHECK((affine_piece(t, p) - affine_piece(o, p + offset)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("facet differentials") {
  const Chart chart = testing::identity_chart(4);
  const TriMesh constant(chart, Eigen::MatrixXd::Ones(4, chart.cell_count()),
                         Eigen::MatrixXd::Ones(4, chart.cell_count()), Eigen::MatrixXd::Zero(4, 2));
  const PLMap cmap(constant);
  for (std::int64_t t = 0; t < cmap.triangle_count(); ++t) CHECK(cmap.differential(t).norm() == 0.0);

  std::mt19937_64 rng(4);
  const Chart hex = build_chart(testing::hexagonal_basis(), rotation(0.5), 8);
  const PLMap map(TriMesh(hex, testing::random_matrix(4, hex.cell_count(), rng),
                          testing::random_matrix(4, hex.cell_count(), rng), Eigen::MatrixXd::Zero(4, 2)));
  for (std::int64_t t = 0; t < map.triangle_count(); t += 5) {
    const Eigen::Vector2d c = map.triangle(t).domain.rowwise().mean();
    REQUIRE(map.locate(c).first == t);
    const Eigen::MatrixXd d = map.differential(t);
    const double h = 1e-3;
    for (int i = 0; i < 2; ++i) {
      const Eigen::Vector2d e = Eigen::Vector2d::Unit(i) * h;
      const Eigen::VectorXd fd = (map.eval(c + e) - map.eval(c)) / h;
      CHECK((fd - d.col(i)).norm() <= 1e-10);
    }
  }
}

TEST_CASE("distances decay and bound pointwise errors") {
  const ImmersionSpec spec = spec_by_name("product:figure8,circle");
  const PLMap map = solved_map("product:figure8,circle", 16, 0.3);
  const double d0 = distance_c0(map, spec);
  const double d1 = distance_c1(map, spec);
  CHECK(d0 > 0.0);
  CHECK(d1 > d0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d p(u(rng), u(rng));
    worst = std::max(worst, (map.eval(p) - spec.eval(p)).norm());
  }
  CHECK(worst <= 1.05 * d0);
  CHECK(distance_c0(map, spec, 8) >= d0 * 0.999);
}

TEST_CASE("isotropy residuals") {
  for (const char* name : {"clifford", "product:figure8,circle"}) {
    const PLMap map = solved_map(name, 8, 0.3);
    const Eigen::VectorXd r = pl_isotropy_residual(map);
    const Eigen::VectorXd b = triangle_liouville_residual(map);
    const Eigen::VectorXd s = triangle_scales(map);
    CHECK((r.array() / s.array().square()).maxCoeff() <= 1e-9);
    CHECK((r - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // Barycentric apexes of a solved clifford mesh on a rotated chart are not
  // isotropic.
  const ImmersionSpec c = make_clifford(1, 1);
  const QuadMesh rho = project_isotropic(sample_quad(c, build_chart(c.gamma_basis, rotation(0.3), 8))).first;
  const PLMap bary(barycentric_apexes(rho));
  CHECK(pl_isotropy_residual(bary).maxCoeff() > 1e-6);
  CHECK((pl_isotropy_residual(bary) - triangle_liouville_residual(bary)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("simplex distances") {
  Eigen::MatrixXd a(4, 3), b(4, 3);
  a << 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0;  // triangle in the (x1, y1) plane
  b << 0, 1, 0, 0, 0, 1, 2, 2, 2, 0, 0, 0;  // the same, lifted by 2 in x2
  CHECK(simplex_distance(a, b) == doctest::Approx(2.0));
  // Transverse planes in R^4 meeting at a single interior point.
  Eigen::MatrixXd c(4, 3);
  c << 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, -1, 1, 0, -1, 0, 1;
  CHECK(simplex_distance(a, c) <= 1e-12);
  CHECK(simplex_distance(a.col(0), a.col(1)) == doctest::Approx(1.0));
  Eigen::MatrixXd p(4, 1);
  p << 1, 1, 0, 0;
  CHECK(simplex_distance(p, a) == doctest::Approx(std::sqrt(0.5)));
  CHECK(simplex_distance(a, b) == simplex_distance(b, a));
}

TEST_CASE("immersion verdicts") {
  const Chart chart = testing::identity_chart(4);
  const PLMap constant(TriMesh(chart, Eigen::MatrixXd::Ones(4, 16), Eigen::MatrixXd::Ones(4, 16),
                               Eigen::MatrixXd::Zero(4, 2)));
  const ImmersionVerdict v = check_immersion(constant, 1e-3);
  CHECK_FALSE(v.passed);
  CHECK(v.degenerate_triangles.size() == 64);

  CHECK(check_immersion(solved_map("clifford", 16, 0.0), 1e-3).passed);
  CHECK(check_immersion(solved_map("product:figure8,circle", 16, 0.0), 1e-3).passed);

  // Folding one apex back onto its facet's corner creates a star conflict.
  const ImmersionSpec spec = make_clifford(1, 1);
  TriMesh folded = sample_tri(spec, testing::identity_chart(8));
  folded.apexes().col(10) = 0.5 * (folded.corners().col(folded.chart().id_of({2, 2})) +
                                   folded.corners().col(folded.chart().id_of({3, 2})));
  const ImmersionVerdict fv = check_immersion(PLMap(folded), 1e-3);
  CHECK_FALSE(fv.passed);
}

TEST_CASE("embedding verdicts") {
  const PLMap clifford = solved_map("clifford", 16, 0.0);
  CHECK(check_embedding(clifford, 1e-3).passed);

  const PLMap flat(apex_refine(sample_quad(make_flat_plane(), testing::identity_chart(4)), 1e-12));
  CHECK(check_embedding(flat, 1e-3).passed);

  const int n = 16;
  const PLMap fig8 = solved_map("product:figure8,circle", n, 0.0);
  const EmbeddingVerdict v = check_embedding(fig8, 1e-3);
  CHECK_FALSE(v.passed);
  REQUIRE_FALSE(v.pairs.empty());
  const auto [s1, s2] = figure_eight_node_parameters();
  for (const auto& [a, b] : v.pairs) {
    CHECK(a < b);
    for (std::int64_t t : {a, b}) {
      const Eigen::Vector2d c = fig8.triangle(t).domain.rowwise().mean();
      const double s = c(0) - std::floor(c(0));
      const double d = std::min(std::abs(s - s1), std::abs(s - s2));
      CHECK(d <= 2.0 / n);
    }
  }
}

TEST_CASE("hierarchy agrees with brute force for any build order") {
  const PLMap fig8 = solved_map("product:figure8,circle", 8, 0.0);
  const EmbeddingVerdict brute = check_embedding_brute_force(fig8, 1e-3);
  const EmbeddingVerdict fast = check_embedding(fig8, 1e-3);
  CHECK(fast.pairs == brute.pairs);
  CHECK_FALSE(fast.pairs.empty());
  std::vector<std::int64_t> order(static_cast<std::size_t>(fig8.triangle_count()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    CHECK(check_embedding(fig8, 1e-3, order).pairs == brute.pairs);
  }
  const PLMap clifford = solved_map("clifford", 8, 0.3);
  CHECK(check_embedding(clifford, 1e-3).pairs == check_embedding_brute_force(clifford, 1e-3).pairs);
}

}  // TEST_SUITE
