#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "lagmesh/density.hpp"
#include "lagmesh/immersion.hpp"
#include "lagmesh/symplectic.hpp"

using namespace lagmesh;

namespace {

const double kRoot2 = std::sqrt(2.0);

// Shoelace area of the projection onto the (x1, y1) plane.
double shoelace(const Eigen::MatrixXd& pts) {
  double area = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const Eigen::Index j = (i + 1) % pts.cols();
    area += pts(0, i) * pts(1, j) - pts(0, j) * pts(1, i);
  }
  return 0.5 * area;
}

FacetField field_of(const Chart& chart, const std::function<double(CellIndex)>& f) {
  Eigen::VectorXd v(chart.cell_count());
  for (std::int64_t id = 0; id < chart.cell_count(); ++id) v(id) = f(chart.from_linear(id));
  return FacetField(chart, v);
}

// Hoelder seminorm by direct search over lifts in a window of periods.
double holder_oracle(const FacetField& field, double alpha) {
  const Chart& chart = field.chart();
  const Eigen::Matrix2d to_chart = chart.a_matrix() / double(chart.n());
  const Matrix2i64& m = chart.m_matrix();
  double sup = 0.0;
  for (std::int64_t i = 0; i < field.size(); ++i) {
    for (std::int64_t j = 0; j < field.size(); ++j) {
      if (i == j) continue;
      const CellIndex a = chart.from_linear(i), b = chart.from_linear(j);
      double d = std::numeric_limits<double>::infinity();
      for (int p = -3; p <= 3; ++p) {
        for (int q = -3; q <= 3; ++q) {
          const Vector2i64 w = Vector2i64(a.k - b.k, a.l - b.l) + p * m.col(0) + q * m.col(1);
          if ((w(0) + w(1)) % 2 != 0) continue;
          d = std::min(d, (to_chart * w.cast<double>()).norm());
        }
      }
      if (std::isfinite(d)) {
        sup = std::max(sup, std::abs(field.values()(i) - field.values()(j)) / std::pow(d, alpha));
      }
    }
  }
  return sup;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("diagonals") {
  std::mt19937_64 rng(1);
  const Chart chart = testing::identity_chart(5);
  const QuadMesh constant(chart, Eigen::Vector4d(1, 2, 3, 4).replicate(1, chart.cell_count()));
  const auto [u0, v0] = diagonals(constant, {2, 3});
  CHECK(u0.norm() == 0.0);
  CHECK(v0.norm() == 0.0);

  const QuadMesh square = testing::parallelogram_mesh(testing::unit(0), testing::unit(1));
  const auto [u, v] = diagonals(square, {0, 0});
  CHECK((u - Eigen::Vector4d(1, 1, 0, 0) / kRoot2).norm() <= 1e-15);
  CHECK((v - Eigen::Vector4d(-1, 1, 0, 0) / kRoot2).norm() <= 1e-15);

  for (int n : {3, 8}) {
    const QuadMesh flat = sample_quad(make_flat_plane(), testing::identity_chart(n));
    for (CellIndex f : {CellIndex{0, 0}, CellIndex{n - 1, n - 1}, CellIndex{1, n - 1}}) {
      const auto [fu, fv] = diagonals(flat, f);
      CHECK((fu - Eigen::Vector4d(1, 0, 1, 0) / kRoot2).norm() <= 1e-14);
      CHECK((fv - Eigen::Vector4d(-1, 0, 1, 0) / kRoot2).norm() <= 1e-14);
    }
  }
}

TEST_CASE("symplectic density of simple meshes") {
  const QuadMesh square = testing::parallelogram_mesh(testing::unit(0), testing::unit(1));
  const Eigen::MatrixXd quad = square.facet_quad({0, 0});
  CHECK(shoelace(quad) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(liouville_polygon(quad) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(symplectic_density(square).values()(0) == doctest::Approx(1.0).epsilon(1e-15));

  const QuadMesh flat = sample_quad(make_flat_plane(), testing::identity_chart(6));
  CHECK(symplectic_density(flat).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Liouville integral of polygons") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd pts = testing::random_matrix(4, 5, rng);
    Eigen::MatrixXd planar = Eigen::MatrixXd::Zero(4, 5);
    planar.row(0) = pts.row(0);
    planar.row(1) = pts.row(1);
    CHECK(liouville_polygon(planar) == doctest::Approx(shoelace(planar)).epsilon(1e-13));
    Eigen::MatrixXd iso = Eigen::MatrixXd::Zero(4, 5);
    iso.row(0) = pts.row(0);
    iso.row(2) = pts.row(1);
    CHECK(liouville_polygon(iso) == 0.0);
    // Invariance under translation of the whole polygon.
    const Eigen::MatrixXd moved = pts.colwise() + Eigen::Vector4d(3, -1, 2, 5);
    CHECK(liouville_polygon(moved) == doctest::Approx(liouville_polygon(pts)).epsilon(1e-12));
  }
}

TEST_CASE("density equals N^2 times the facet Liouville integral") {
  std::mt19937_64 rng(3);
  const Chart charts[] = {testing::identity_chart(6),
                          build_chart(testing::hexagonal_basis(), rotation(0.3), 7)};
  for (const Chart& chart : charts) {
    for (int trial = 0; trial < 5; ++trial) {
      const QuadMesh mesh = testing::random_mesh(chart, rng);
      const FacetField mu = symplectic_density(mesh);
      const double n2 = double(chart.n()) * chart.n();
      for (std::int64_t id = 0; id < chart.cell_count(); ++id) {
        const double l = liouville_polygon(mesh.facet_quad(chart.from_linear(id)));
        CHECK(std::abs(mu.values()(id) / n2 - l) <= 1e-12);
      }
    }
  }
}

TEST_CASE("telescoping, translation, shear and symplectic invariance") {
  std::mt19937_64 rng(4);
  const Chart charts[] = {testing::identity_chart(8),
                          build_chart(testing::hexagonal_basis(), rotation(0.2), 6)};
  for (const Chart& chart : charts) {
    for (int trial = 0; trial < 10; ++trial) {
      const QuadMesh mesh = testing::random_mesh(chart, rng);
      const Eigen::VectorXd mu = symplectic_density(mesh).values();
      CHECK(std::abs(mu.sum()) <= 1e-12 * double(chart.cell_count()) * (1 + mu.cwiseAbs().maxCoeff()));

      QuadMesh moved = mesh;
      moved.values().colwise() += testing::random_matrix(4, 1, rng).col(0);
      CHECK((symplectic_density(moved).values() - mu).cwiseAbs().maxCoeff() <= 1e-12 * (1 + mu.norm()));

      const Eigen::Vector4d even = testing::random_matrix(4, 1, rng).col(0);
      const Eigen::Vector4d odd = testing::random_matrix(4, 1, rng).col(0);
      QuadMesh sheared = mesh;
      for (std::int64_t id = 0; id < chart.cell_count(); ++id) {
        const CellIndex v = chart.from_linear(id);
        sheared.values().col(id) += ((v.k + v.l) % 2 == 0) ? even : odd;
      }
      // Parity is only well defined on the quotient when the period lattice is even.
      const Matrix2i64& m = chart.m_matrix();
      if ((m(0, 0) + m(1, 0)) % 2 == 0 && (m(0, 1) + m(1, 1)) % 2 == 0) {
        CHECK((symplectic_density(sheared).values() - mu).cwiseAbs().maxCoeff() <= 1e-12 * (1 + mu.norm()));
      }

      const Eigen::MatrixXd a = testing::random_symplectic(2, rng);
      CHECK((a.transpose() * j_matrix(4) * a - j_matrix(4)).norm() <= 1e-12);
      const QuadMesh mapped(chart, a * mesh.values());
      CHECK((symplectic_density(mapped).values() - mu).cwiseAbs().maxCoeff() <=
            1e-11 * (1 + mu.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("finite differences") {
  const Chart chart = testing::identity_chart(8);
  const FacetField constant = field_of(chart, [](CellIndex) { return 2.5; });
  CHECK(finite_difference(constant, Direction::Tu).values().norm() == 0.0);
  const FacetField parity = field_of(chart, [](CellIndex f) { return (f.k + f.l) % 2 == 0 ? 1.0 : -1.0; });
  CHECK(finite_difference(parity, Direction::Tu).values().norm() == 0.0);
  CHECK(finite_difference(parity, Direction::Tv).values().norm() == 0.0);

  const Chart small = testing::identity_chart(4);
  const FacetField ramp = field_of(small, [](CellIndex f) { return double(f.k + f.l) / 4.0; });
  const FacetField du = finite_difference(ramp, Direction::Tu);
  const FacetField dv = finite_difference(ramp, Direction::Tv);
  for (std::int64_t k = 0; k < 3; ++k) {
    for (std::int64_t l = 0; l < 3; ++l) {
      CHECK(du.at({k, l}) == doctest::Approx(kRoot2).epsilon(1e-15));
    }
  }
  for (std::int64_t k = 1; k < 4; ++k) {
    for (std::int64_t l = 0; l < 3; ++l) CHECK(dv.at({k, l}) == 0.0);
  }
  // Across the seam the ramp wraps: (3,3) -> (0,0) drops by 6/4.
  CHECK(du.at({3, 3}) == doctest::Approx(4 / kRoot2 * (-1.5)).epsilon(1e-15));
}

TEST_CASE("weak norms of constant and parity fields") {
  const Chart chart = testing::identity_chart(8);
  const FacetField c = field_of(chart, [](CellIndex) { return -1.75; });
  CHECK(c0_norm(c) == 1.75);
  CHECK(c1w_norm(c) == 1.75);
  CHECK(holder_w_norm(c) == 1.75);

  for (int n : {8, 16}) {
    const Chart ch = testing::identity_chart(n);
    const FacetField parity = field_of(ch, [](CellIndex f) { return (f.k + f.l) % 2 == 0 ? 1.0 : -1.0; });
    CHECK(c1w_norm(parity) == 1.0);
    CHECK(holder_w_norm(parity) == 1.0);
    // Axis differences are not controlled.
    double axis = 0.0;
    for (std::int64_t id = 0; id < ch.cell_count(); ++id) {
      const CellIndex f = ch.from_linear(id);
      axis = std::max(axis, n * std::abs(parity.at(translate(f, Direction::E1)) - parity.at(f)));
    }
    CHECK(axis == 2.0 * n);
  }
}

TEST_CASE("Hoelder norm agrees with a direct search") {
  std::mt19937_64 rng(6);
  const Chart charts[] = {testing::identity_chart(6), build_chart(testing::hexagonal_basis(), rotation(0.4), 5),
                          testing::identity_chart(5)};
  for (const Chart& chart : charts) {
    const FacetField f(chart, testing::random_matrix(chart.cell_count(), 1, rng).col(0));
    const double semi = holder_oracle(f, 0.5);
    CHECK(holder_w_norm(f) == doctest::Approx(c0_norm(f) + semi).epsilon(1e-12));
    CHECK(weak_norm(f, {NormKind::HolderWeak, 0.3}) ==
          doctest::Approx(c0_norm(f) + holder_oracle(f, 0.3)).epsilon(1e-12));
  }
}

TEST_CASE("sampled Hoelder norm is a deterministic lower bound") {
  std::mt19937_64 rng(7);
  const Chart chart = testing::identity_chart(20);
  const FacetField f(chart, testing::random_matrix(chart.cell_count(), 1, rng).col(0));
  const double exact = holder_w_norm(f);
  WeakNorm sampled{NormKind::HolderWeak};
  sampled.exact_limit = 0;
  sampled.seed = 42;
  const double s1 = weak_norm(f, sampled);
  const double s2 = weak_norm(f, sampled);
  CHECK(s1 == s2);
  CHECK(s1 <= exact);
  CHECK(s1 >= 0.8 * exact);
}

TEST_CASE("Hoelder norm is controlled by the weak C1 norm") {
  std::mt19937_64 rng(8);
  const Chart chart = testing::identity_chart(16);
  for (int trial = 0; trial < 100; ++trial) {
    const FacetField f(chart, testing::random_matrix(chart.cell_count(), 1, rng).col(0));
    CHECK(holder_w_norm(f) <= 3.0 * c1w_norm(f));
  }
}

TEST_CASE("density of samples decays quadratically") {
  const ImmersionSpec spec = spec_by_name("product:figure8,circle");
  double previous = 0.0;
  for (int n : {8, 16, 32, 64}) {
    const QuadMesh tau = sample_quad(spec, build_chart(spec.gamma_basis, rotation(0.3), n));
    const double norm = c1w_norm(symplectic_density(tau)) * n * n;
    if (previous > 0.0) CHECK(norm <= 2.0 * previous);
    previous = norm;
  }
  // Product of circles: exactly isotropic under any linear chart.
  for (double angle : {0.0, 0.3, 1.1}) {
    const QuadMesh tau = sample_quad(make_clifford(1, 1), build_chart(Eigen::Matrix2d::Identity(), rotation(angle), 16));
    CHECK(c0_norm(symplectic_density(tau)) <= 1e-12);
  }
}

}  // TEST_SUITE
