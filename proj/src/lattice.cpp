#include "lagmesh/lattice.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "lagmesh/errors.hpp"

namespace lagmesh {
namespace {

// Extended Euclid: returns g = gcd(a, b) >= 0 and (x, y) with a x + b y = g.
std::int64_t extended_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

// Column Hermite normal form of a nonsingular 2x2 integer matrix.
void column_hermite(const Matrix2i64& m, Matrix2i64& h, Matrix2i64& u) {
  const std::int64_t a = m(0, 0);
  const std::int64_t b = m(0, 1);
  std::int64_t x = 0, y = 0;
  const std::int64_t g = extended_gcd(a, b, x, y);
  // Column operations on (m1, m2): new m1 = x m1 + y m2, new m2 = -b/g m1 + a/g m2.
  u << x, -b / g, y, a / g;
  h = m * u;
  if (h(1, 1) < 0) {
    h.col(1) = -h.col(1);
    u.col(1) = -u.col(1);
  }
  if (h(0, 0) < 0) {
    h.col(0) = -h.col(0);
    u.col(0) = -u.col(0);
  }
  const std::int64_t q = floor_div(h(1, 0), h(1, 1));
  h.col(0) -= q * h.col(1);
  u.col(0) -= q * u.col(1);
}

}  // namespace

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Chart build_chart(const Eigen::Matrix2d& gamma_basis,
                  const Eigen::Matrix2d& reference_isometry, int n) {
  if (n < 1) throw DegenerateLattice("subdivision count must be positive");
  if (std::abs(gamma_basis.determinant()) <= 0.0) {
    throw DegenerateLattice("period basis is singular");
  }
  Chart c;
  c.n_ = n;
  c.gamma_ = gamma_basis;
  c.reference_ = reference_isometry;
  const Eigen::Matrix2d scaled = double(n) * reference_isometry.inverse() * gamma_basis;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c.m_(i, j) = static_cast<std::int64_t>(std::round(scaled(i, j)));
  }
  const std::int64_t det = c.m_(0, 0) * c.m_(1, 1) - c.m_(0, 1) * c.m_(1, 0);
  if (det == 0) {
    throw DegenerateLattice("rounded lattice matrix is singular at N = " + std::to_string(n));
  }
  column_hermite(c.m_, c.hnf_, c.unimodular_);
  c.a_ = double(n) * gamma_basis * c.m_.cast<double>().inverse();
  c.a_inv_ = c.a_.inverse();
  return c;
}

std::pair<CellIndex, Vector2i64> Chart::reduce(CellIndex raw) const {
  const std::int64_t p = floor_div(raw.k, hnf_(0, 0));
  std::int64_t k = raw.k - p * hnf_(0, 0);
  std::int64_t l = raw.l - p * hnf_(1, 0);
  const std::int64_t q = floor_div(l, hnf_(1, 1));
  l -= q * hnf_(1, 1);
  const Vector2i64 coeffs = unimodular_ * Vector2i64(p, q);
  return {CellIndex{k, l}, coeffs};
}

Eigen::Vector2d Chart::vertex_position(CellIndex v) const {
  return a_ * Eigen::Vector2d(double(v.k), double(v.l)) / double(n_);
}

Eigen::Vector2d Chart::facet_center(CellIndex f) const {
  return a_ * Eigen::Vector2d(double(f.k) + 0.5, double(f.l) + 0.5) / double(n_);
}

Eigen::Vector2d Chart::index_coordinates(const Eigen::Vector2d& p) const {
  return double(n_) * (a_inv_ * p);
}

}  // namespace lagmesh
