#include "lagmesh/mesh.hpp"

#include <cassert>
#include <utility>

namespace lagmesh {
namespace {

Eigen::MatrixXd zero_shift_if_empty(Eigen::MatrixXd shift, Eigen::Index dim) {
  if (shift.size() == 0) return Eigen::MatrixXd::Zero(dim, 2);
  assert(shift.rows() == dim && shift.cols() == 2);
  return shift;
}

Eigen::VectorXd lifted(const Chart& chart, const Eigen::MatrixXd& values,
                       const Eigen::MatrixXd& shift, CellIndex raw) {
  const auto [canon, coeffs] = chart.reduce(raw);
  Eigen::VectorXd v = values.col(chart.linear_id(canon));
  if (coeffs(0) != 0) v += double(coeffs(0)) * shift.col(0);
  if (coeffs(1) != 0) v += double(coeffs(1)) * shift.col(1);
  return v;
}

}  // namespace

QuadMesh::QuadMesh(Chart chart, Eigen::MatrixXd values)
    : QuadMesh(std::move(chart), std::move(values), Eigen::MatrixXd()) {}

QuadMesh::QuadMesh(Chart chart, Eigen::MatrixXd values, Eigen::MatrixXd period_shift)
    : chart_(std::move(chart)), values_(std::move(values)) {
  assert(values_.cols() == chart_.cell_count());
  shift_ = zero_shift_if_empty(std::move(period_shift), values_.rows());
}

Eigen::VectorXd QuadMesh::at(CellIndex raw) const {
  return lifted(chart_, values_, shift_, raw);
}

Eigen::MatrixXd QuadMesh::facet_quad(CellIndex f) const {
  Eigen::MatrixXd quad(dim(), 4);
  quad.col(0) = at(f);
  quad.col(1) = at(translate(f, Direction::E1));
  quad.col(2) = at(translate(f, Direction::Tu));
  quad.col(3) = at(translate(f, Direction::E2));
  return quad;
}

FacetField::FacetField(Chart chart, Eigen::VectorXd values)
    : chart_(std::move(chart)), values_(std::move(values)) {
  assert(values_.size() == chart_.cell_count());
}

TriMesh::TriMesh(Chart chart, Eigen::MatrixXd corners, Eigen::MatrixXd apexes,
                 Eigen::MatrixXd period_shift)
    : chart_(std::move(chart)), corners_(std::move(corners)), apexes_(std::move(apexes)) {
  assert(corners_.cols() == chart_.cell_count());
  assert(apexes_.cols() == chart_.cell_count());
  shift_ = zero_shift_if_empty(std::move(period_shift), corners_.rows());
}

Eigen::VectorXd TriMesh::corner_at(CellIndex raw) const {
  return lifted(chart_, corners_, shift_, raw);
}

Eigen::VectorXd TriMesh::apex_at(CellIndex raw) const {
  return lifted(chart_, apexes_, shift_, raw);
}

double c0_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  if (a.cols() == 0) return 0.0;
  return (a - b).colwise().norm().maxCoeff();
}

}  // namespace lagmesh
