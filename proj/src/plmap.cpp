#include "lagmesh/plmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/LU>
#include <Eigen/QR>

#include "lagmesh/symplectic.hpp"

namespace lagmesh {
namespace {

constexpr double kFeasibilitySlack = 1e-12;

// Largest singular value of a (rows x 2) matrix.
double spectral_norm2(const Eigen::MatrixXd& m) {
  const Eigen::Matrix2d g = m.transpose() * m;
  const double tr = g.trace();
  const double det = g.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return std::sqrt(std::max(0.0, tr / 2.0 + disc));
}

// Singular values (max, min) of a (rows x 2) matrix.
std::pair<double, double> singular_values2(const Eigen::MatrixXd& m) {
  const Eigen::Matrix2d g = m.transpose() * m;
  const double tr = g.trace();
  const double det = g.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {std::sqrt(std::max(0.0, tr / 2.0 + disc)), std::sqrt(std::max(0.0, tr / 2.0 - disc))};
}

Eigen::Vector3d barycentric(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                            const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Matrix2d t;
  t << b - a, c - a;
  const Eigen::Vector2d w = t.inverse() * (p - a);
  return {1.0 - w(0) - w(1), w(0), w(1)};
}

// Minimum distance between the affine hulls of two point sets restricted
// to the simplices they span, when the minimizer is interior.  Returns
// infinity when the unconstrained minimizer leaves either simplex.
double face_pair_distance(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2) {
  const Eigen::Index p = f1.cols() - 1, q = f2.cols() - 1;
  const Eigen::VectorXd rhs = f2.col(0) - f1.col(0);
  if (p + q == 0) return rhs.norm();
  Eigen::MatrixXd k(f1.rows(), p + q);
  for (Eigen::Index i = 0; i < p; ++i) k.col(i) = f1.col(i + 1) - f1.col(0);
  for (Eigen::Index j = 0; j < q; ++j) k.col(p + j) = f2.col(0) - f2.col(j + 1);
  const Eigen::VectorXd z = k.completeOrthogonalDecomposition().solve(rhs);
  const auto feasible = [](const Eigen::VectorXd& w) {
    return (w.array() >= -kFeasibilitySlack).all() && w.sum() <= 1.0 + kFeasibilitySlack;
  };
  if (!feasible(z.head(p)) || !feasible(z.tail(q))) return std::numeric_limits<double>::infinity();
  return (k * z - rhs).norm();
}

struct Box {
  Eigen::VectorXd lo, hi;
  bool overlaps(const Box& o) const {
    return (lo.array() <= o.hi.array()).all() && (o.lo.array() <= hi.array()).all();
  }
};

Box triangle_box(const Eigen::MatrixXd& image, double margin) {
  return {image.rowwise().minCoeff().array() - margin, image.rowwise().maxCoeff().array() + margin};
}

class Bvh {
 public:
  Bvh(std::vector<Box> boxes, std::vector<std::int64_t> order)
      : boxes_(std::move(boxes)), items_(std::move(order)) {
    if (!items_.empty()) build(0, items_.size());
  }

  template <typename Visit>
  void self_pairs(Visit&& visit) const {
    if (!nodes_.empty()) descend(0, 0, visit);
  }

 private:
  struct Node {
    Box box;
    std::size_t begin = 0, end = 0;
    int left = -1, right = -1;
    bool leaf() const { return left < 0; }
  };
  static constexpr std::size_t kLeafSize = 4;

  int build(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box = boxes_[static_cast<std::size_t>(items_[begin])];
    for (std::size_t i = begin + 1; i < end; ++i) {
      const Box& b = boxes_[static_cast<std::size_t>(items_[i])];
      node.box.lo = node.box.lo.cwiseMin(b.lo);
      node.box.hi = node.box.hi.cwiseMax(b.hi);
    }
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) return index;

    Eigen::Index axis = 0;
    (node.box.hi - node.box.lo).maxCoeff(&axis);
    const auto center = [&](std::int64_t item) {
      const Box& b = boxes_[static_cast<std::size_t>(item)];
      return b.lo(axis) + b.hi(axis);
    };
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(items_.begin() + static_cast<std::ptrdiff_t>(begin),
                     items_.begin() + static_cast<std::ptrdiff_t>(mid),
                     items_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::int64_t a, std::int64_t b) { return center(a) < center(b); });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(index)].left = left;
    nodes_[static_cast<std::size_t>(index)].right = right;
    return index;
  }

  template <typename Visit>
  void descend(int a, int b, Visit& visit) const {
    const Node& na = nodes_[static_cast<std::size_t>(a)];
    const Node& nb = nodes_[static_cast<std::size_t>(b)];
    if (!na.box.overlaps(nb.box)) return;
    if (a == b) {
      if (na.leaf()) {
        for (std::size_t i = na.begin; i < na.end; ++i)
          for (std::size_t j = i + 1; j < na.end; ++j) emit(items_[i], items_[j], visit);
        return;
      }
      descend(na.left, na.left, visit);
      descend(na.right, na.right, visit);
      descend(na.left, na.right, visit);
      return;
    }
    if (na.leaf() && nb.leaf()) {
      for (std::size_t i = na.begin; i < na.end; ++i)
        for (std::size_t j = nb.begin; j < nb.end; ++j) emit(items_[i], items_[j], visit);
      return;
    }
    if (nb.leaf() || (!na.leaf() && na.end - na.begin >= nb.end - nb.begin)) {
      descend(na.left, b, visit);
      descend(na.right, b, visit);
    } else {
      descend(a, nb.left, visit);
      descend(a, nb.right, visit);
    }
  }

  template <typename Visit>
  void emit(std::int64_t i, std::int64_t j, Visit& visit) const {
    if (boxes_[static_cast<std::size_t>(i)].overlaps(boxes_[static_cast<std::size_t>(j)]))
      visit(std::min(i, j), std::max(i, j));
  }

  std::vector<Box> boxes_;
  std::vector<std::int64_t> items_;
  std::vector<Node> nodes_;
};

int shared_vertex_count(const PLMap::Triangle& a, const PLMap::Triangle& b) {
  int shared = 0;
  for (auto va : a.vertex_ids)
    for (auto vb : b.vertex_ids) shared += (va == vb);
  return shared;
}

int slot_of(const PLMap::Triangle& t, std::int64_t vertex) {
  for (int i = 0; i < 3; ++i)
    if (t.vertex_ids[static_cast<std::size_t>(i)] == vertex) return i;
  return -1;
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& m, std::initializer_list<int> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (int c : cols) out.col(j++) = m.col(c);
  return out;
}

Eigen::VectorXd unit(const Eigen::VectorXd& v) {
  const double n = v.norm();
  return n > 0.0 ? Eigen::VectorXd(v / n) : v;
}

// Whether two triangles sharing vertices overlap anywhere beyond their
// shared simplex.
bool adjacent_overlap(const PLMap::Triangle& t1, const PLMap::Triangle& t2, double tol,
                      double abs_tol) {
  std::vector<std::pair<int, int>> shared;
  for (int i = 0; i < 3; ++i) {
    const int j = slot_of(t2, t1.vertex_ids[static_cast<std::size_t>(i)]);
    if (j >= 0) shared.emplace_back(i, j);
  }
  if (shared.size() >= 3) return false;
  const auto others = [](int a, int b) {
    for (int i = 0; i < 3; ++i)
      if (i != a && i != b) return i;
    return -1;
  };
  const Eigen::MatrixXd& a = t1.image;
  const Eigen::MatrixXd& b = t2.image;

  if (shared.size() == 1) {
    const auto [i1, i2] = shared.front();
    const int a1 = (i1 + 1) % 3, a2 = (i1 + 2) % 3;
    const int b1 = (i2 + 1) % 3, b2 = (i2 + 2) % 3;
    if (simplex_distance(columns(a, {a1, a2}), b) <= abs_tol) return true;
    if (simplex_distance(columns(b, {b1, b2}), a) <= abs_tol) return true;
    if ((a.col(i1) - b.col(i2)).norm() <= abs_tol) {
      for (int ea : {a1, a2}) {
        for (int eb : {b1, b2}) {
          if ((unit(a.col(ea) - a.col(i1)) - unit(b.col(eb) - b.col(i2))).norm() <= tol) return true;
        }
      }
    }
    return false;
  }

  const auto [i1, j1] = shared[0];
  const auto [i2, j2] = shared[1];
  const int oa = others(i1, i2);
  const int ob = others(j1, j2);
  if (simplex_distance(a.col(oa), b) <= abs_tol) return true;
  if (simplex_distance(b.col(ob), a) <= abs_tol) return true;
  const bool edge_coincides =
      (a.col(i1) - b.col(j1)).norm() <= abs_tol && (a.col(i2) - b.col(j2)).norm() <= abs_tol;
  if (edge_coincides) {
    const Eigen::VectorXd e = unit(a.col(i2) - a.col(i1));
    Eigen::VectorXd pa = a.col(oa) - a.col(i1);
    Eigen::VectorXd pb = b.col(ob) - b.col(j1);
    pa -= pa.dot(e) * e;
    pb -= pb.dot(e) * e;
    if ((unit(pa) - unit(pb)).norm() <= tol) return true;
  }
  return false;
}

// Triangles sharing vertices only count when they meet beyond the shared
// simplex.
bool pair_overlaps(const PLMap::Triangle& a, const PLMap::Triangle& b, double tol, double abs_tol) {
  if (shared_vertex_count(a, b) > 0) return adjacent_overlap(a, b, tol, abs_tol);
  return simplex_distance(a.image, b.image) <= abs_tol;
}

double global_scale(const PLMap& map) {
  const Eigen::VectorXd s = triangle_scales(map);
  return s.size() == 0 ? 0.0 : s.maxCoeff();
}

}  // namespace

PLMap::PLMap(TriMesh tri) : tri_(std::move(tri)) {
  const Chart& chart = tri_.chart();
  const std::int64_t facets = tri_.facet_count();
  triangles_.reserve(static_cast<std::size_t>(4 * facets));
  for (std::int64_t id = 0; id < facets; ++id) {
    const CellIndex f = chart.from_linear(id);
    for (const SubTriangle& sub : kSubTriangles) {
      const CellIndex ra{f.k + sub.corner_a[0], f.l + sub.corner_a[1]};
      const CellIndex rb{f.k + sub.corner_b[0], f.l + sub.corner_b[1]};
      Triangle t;
      t.vertex_ids = {chart.id_of(ra), chart.id_of(rb), facets + id};
      t.domain.col(0) = chart.vertex_position(ra);
      t.domain.col(1) = chart.vertex_position(rb);
      t.domain.col(2) = chart.facet_center(f);
      t.image.resize(tri_.dim(), 3);
      t.image.col(0) = tri_.corner_at(ra);
      t.image.col(1) = tri_.corner_at(rb);
      t.image.col(2) = tri_.apexes().col(id);
      triangles_.push_back(std::move(t));
    }
  }
}

PLMap build_pl(const TriMesh& tri) { return PLMap(tri); }

std::pair<std::int64_t, CellIndex> PLMap::locate(const Eigen::Vector2d& p) const {
  const Chart& chart = tri_.chart();
  const Eigen::Vector2d x = chart.index_coordinates(p);
  const CellIndex facet{static_cast<std::int64_t>(std::floor(x(0))),
                        static_cast<std::int64_t>(std::floor(x(1)))};
  const double a = x(0) - double(facet.k);
  const double b = x(1) - double(facet.l);
  int sub = 0;
  if (b <= a) {
    sub = (a + b <= 1.0) ? 0 : 1;
  } else {
    sub = (a + b >= 1.0) ? 2 : 3;
  }
  return {4 * chart.id_of(facet) + sub, facet};
}

Eigen::VectorXd PLMap::eval(const Eigen::Vector2d& p) const {
  const Chart& chart = tri_.chart();
  const auto [id, facet] = locate(p);
  const Triangle& t = triangles_[static_cast<std::size_t>(id)];
  const SubTriangle& sub = kSubTriangles[id % 4];
  const Eigen::Vector2d x = chart.index_coordinates(p);
  const Eigen::Vector2d local(x(0) - double(facet.k), x(1) - double(facet.l));
  const Eigen::Vector3d w =
      barycentric(local, Eigen::Vector2d(sub.corner_a[0], sub.corner_a[1]),
                  Eigen::Vector2d(sub.corner_b[0], sub.corner_b[1]), Eigen::Vector2d(0.5, 0.5));
  Eigen::VectorXd value = t.image * w;
  const Vector2i64 coeffs = chart.reduce(facet).second;
  value += tri_.period_shift() * coeffs.cast<double>();
  return value;
}

Eigen::MatrixXd PLMap::differential(std::int64_t id) const {
  const Triangle& t = triangles_[static_cast<std::size_t>(id)];
  Eigen::Matrix2d dom;
  dom << t.domain.col(1) - t.domain.col(0), t.domain.col(2) - t.domain.col(0);
  Eigen::MatrixXd img(t.image.rows(), 2);
  img << t.image.col(1) - t.image.col(0), t.image.col(2) - t.image.col(0);
  return img * dom.inverse();
}

namespace {

template <typename Fn>
void for_each_sample(const PLMap& map, int oversample, Fn&& fn) {
  const int m = std::max(1, oversample);
  for (std::int64_t id = 0; id < map.triangle_count(); ++id) {
    const PLMap::Triangle& t = map.triangle(id);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; i + j <= m; ++j) {
        const Eigen::Vector3d w(1.0 - double(i + j) / m, double(i) / m, double(j) / m);
        fn(id, t, Eigen::Vector2d(t.domain * w), Eigen::VectorXd(t.image * w));
      }
    }
  }
}

}  // namespace

double distance_c0(const PLMap& map, const ImmersionSpec& spec, int oversample) {
  double worst = 0.0;
  for_each_sample(map, oversample, [&](std::int64_t, const PLMap::Triangle&,
                                       const Eigen::Vector2d& p, const Eigen::VectorXd& v) {
    worst = std::max(worst, (spec.eval(p) - v).norm());
  });
  return worst;
}

double distance_c1(const PLMap& map, const ImmersionSpec& spec, int oversample) {
  std::vector<Eigen::MatrixXd> diffs(static_cast<std::size_t>(map.triangle_count()));
  for (std::int64_t id = 0; id < map.triangle_count(); ++id)
    diffs[static_cast<std::size_t>(id)] = map.differential(id);
  double c0 = 0.0, c1 = 0.0;
  for_each_sample(map, oversample, [&](std::int64_t id, const PLMap::Triangle&,
                                       const Eigen::Vector2d& p, const Eigen::VectorXd& v) {
    const Jet jet = spec.jet(p);
    c0 = std::max(c0, (jet.value - v).norm());
    c1 = std::max(c1, spectral_norm2(jet.differential - diffs[static_cast<std::size_t>(id)]));
  });
  return c0 + c1;
}

double differential_distance(const PLMap& a, const PLMap& b) {
  double worst = 0.0;
  for (std::int64_t id = 0; id < a.triangle_count(); ++id) {
    worst = std::max(worst, spectral_norm2(a.differential(id) - b.differential(id)));
  }
  return worst;
}

Eigen::VectorXd pl_isotropy_residual(const PLMap& map) {
  Eigen::VectorXd r(map.triangle_count());
  for (std::int64_t id = 0; id < map.triangle_count(); ++id) {
    const Eigen::MatrixXd& img = map.triangle(id).image;
    r(id) = std::abs(omega(img.col(1) - img.col(0), img.col(2) - img.col(0)));
  }
  return r;
}

Eigen::VectorXd triangle_liouville_residual(const PLMap& map) {
  Eigen::VectorXd r(map.triangle_count());
  for (std::int64_t id = 0; id < map.triangle_count(); ++id) {
    const Eigen::MatrixXd& img = map.triangle(id).image;
    // Cyclic sum over the boundary A -> B -> C -> A.
    const double integral = 0.5 * (omega(img.col(0), img.col(1)) + omega(img.col(1), img.col(2)) +
                                   omega(img.col(2), img.col(0)));
    r(id) = 2.0 * std::abs(integral);
  }
  return r;
}

Eigen::VectorXd triangle_scales(const PLMap& map) {
  Eigen::VectorXd s(map.triangle_count());
  for (std::int64_t id = 0; id < map.triangle_count(); ++id) {
    const Eigen::MatrixXd& img = map.triangle(id).image;
    s(id) = std::max({(img.col(1) - img.col(0)).norm(), (img.col(2) - img.col(1)).norm(),
                      (img.col(0) - img.col(2)).norm()});
  }
  return s;
}

double simplex_distance(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2) {
  const int n1 = static_cast<int>(s1.cols()), n2 = static_cast<int>(s2.cols());
  double best = std::numeric_limits<double>::infinity();
  for (int m1 = 1; m1 < (1 << n1); ++m1) {
    std::vector<int> c1;
    for (int i = 0; i < n1; ++i)
      if (m1 & (1 << i)) c1.push_back(i);
    Eigen::MatrixXd f1(s1.rows(), static_cast<Eigen::Index>(c1.size()));
    for (std::size_t i = 0; i < c1.size(); ++i) f1.col(static_cast<Eigen::Index>(i)) = s1.col(c1[i]);
    for (int m2 = 1; m2 < (1 << n2); ++m2) {
      std::vector<int> c2;
      for (int j = 0; j < n2; ++j)
        if (m2 & (1 << j)) c2.push_back(j);
      Eigen::MatrixXd f2(s2.rows(), static_cast<Eigen::Index>(c2.size()));
      for (std::size_t j = 0; j < c2.size(); ++j) f2.col(static_cast<Eigen::Index>(j)) = s2.col(c2[j]);
      best = std::min(best, face_pair_distance(f1, f2));
    }
  }
  return best;
}

ImmersionVerdict check_immersion(const PLMap& map, double tol) {
  ImmersionVerdict verdict;
  const std::int64_t count = map.triangle_count();

  double sigma_scale = 0.0;
  std::vector<double> sigma_min(static_cast<std::size_t>(count));
  for (std::int64_t id = 0; id < count; ++id) {
    const auto [smax, smin] = singular_values2(map.differential(id));
    sigma_scale = std::max(sigma_scale, smax);
    sigma_min[static_cast<std::size_t>(id)] = smin;
  }
  for (std::int64_t id = 0; id < count; ++id) {
    if (!(sigma_min[static_cast<std::size_t>(id)] > tol * sigma_scale)) {
      verdict.degenerate_triangles.push_back(id);
    }
  }

  const double abs_tol = tol * global_scale(map);
  std::vector<std::vector<std::int64_t>> star(static_cast<std::size_t>(map.vertex_count()));
  for (std::int64_t id = 0; id < count; ++id)
    for (auto v : map.triangle(id).vertex_ids) star[static_cast<std::size_t>(v)].push_back(id);
  // Degenerate pieces already fail the map; the star test needs proper triangles.
  if (verdict.degenerate_triangles.empty()) {
    for (std::int64_t v = 0; v < map.vertex_count(); ++v) {
      const auto& tris = star[static_cast<std::size_t>(v)];
      for (std::size_t i = 0; i < tris.size(); ++i) {
        for (std::size_t j = i + 1; j < tris.size(); ++j) {
          const auto& t1 = map.triangle(tris[i]);
          const auto& t2 = map.triangle(tris[j]);
          if (adjacent_overlap(t1, t2, tol, abs_tol)) {
            verdict.star_conflicts.push_back({v, tris[i], tris[j]});
          }
        }
      }
    }
  }
  verdict.passed = verdict.degenerate_triangles.empty() && verdict.star_conflicts.empty();
  return verdict;
}

EmbeddingVerdict check_embedding(const PLMap& map, double tol,
                                 const std::vector<std::int64_t>& build_order) {
  const double abs_tol = tol * global_scale(map);
  std::vector<Box> boxes;
  boxes.reserve(static_cast<std::size_t>(map.triangle_count()));
  for (const auto& t : map.triangles()) boxes.push_back(triangle_box(t.image, 0.5 * abs_tol));
  std::vector<std::int64_t> order = build_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(map.triangle_count()));
    std::iota(order.begin(), order.end(), 0);
  }
  const Bvh bvh(std::move(boxes), std::move(order));

  EmbeddingVerdict verdict;
  bvh.self_pairs([&](std::int64_t a, std::int64_t b) {
    const auto& ta = map.triangle(a);
    const auto& tb = map.triangle(b);
    if (pair_overlaps(ta, tb, tol, abs_tol)) verdict.pairs.emplace_back(std::min(a, b), std::max(a, b));
  });
  std::sort(verdict.pairs.begin(), verdict.pairs.end());
  verdict.pairs.erase(std::unique(verdict.pairs.begin(), verdict.pairs.end()), verdict.pairs.end());
  verdict.passed = verdict.pairs.empty();
  return verdict;
}

EmbeddingVerdict check_embedding_brute_force(const PLMap& map, double tol) {
  const double abs_tol = tol * global_scale(map);
  EmbeddingVerdict verdict;
  for (std::int64_t a = 0; a < map.triangle_count(); ++a) {
    for (std::int64_t b = a + 1; b < map.triangle_count(); ++b) {
      const auto& ta = map.triangle(a);
      const auto& tb = map.triangle(b);
      if (pair_overlaps(ta, tb, tol, abs_tol)) verdict.pairs.emplace_back(a, b);
    }
  }
  verdict.passed = verdict.pairs.empty();
  return verdict;
}

}  // namespace lagmesh
