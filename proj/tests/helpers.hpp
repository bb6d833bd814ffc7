#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "lagmesh/lattice.hpp"
#include "lagmesh/mesh.hpp"

namespace testing {

inline Eigen::Matrix2d hexagonal_basis() {
  Eigen::Matrix2d b;
  b << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  return b;
}

inline lagmesh::Chart identity_chart(int n) {
  return lagmesh::build_chart(Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity(), n);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                     double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline lagmesh::QuadMesh random_mesh(const lagmesh::Chart& chart, std::mt19937_64& rng, int dim = 4) {
  return lagmesh::QuadMesh(chart, random_matrix(dim, chart.cell_count(), rng));
}

// Real 2n x 2n matrix of a random unitary map of C^n, in (x1,y1,...,xn,yn)
// coordinates with z_j = x_j + i y_j.
inline Eigen::MatrixXd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {normal(rng), normal(rng)};
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
  Eigen::MatrixXd a(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::complex<double> c = q(i, j);
      a.block<2, 2>(2 * i, 2 * j) << c.real(), -c.imag(), c.imag(), c.real();
    }
  }
  return a;
}

// Random linear symplectic map: a unitary factor times a symmetric shear
// [[I, S], [0, I]] written in interleaved coordinates.
inline Eigen::MatrixXd random_symplectic(int n, std::mt19937_64& rng) {
  Eigen::MatrixXd s = random_matrix(n, n, rng, 0.5);
  s = (s + s.transpose()).eval();
  Eigen::MatrixXd shear = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) shear(2 * i, 2 * j + 1) += s(i, j);
  return random_unitary(n, rng) * shear;
}

// Single-vertex mesh on the N = 1 chart whose period shift turns the facet
// quadrilateral into the given corners A0 = 0, A1 = e1, A2 = e1 + e2, A3 = e2.
inline lagmesh::QuadMesh parallelogram_mesh(const Eigen::VectorXd& e1, const Eigen::VectorXd& e2) {
  Eigen::MatrixXd shift(e1.size(), 2);
  shift << e1, e2;
  return lagmesh::QuadMesh(identity_chart(1), Eigen::MatrixXd::Zero(e1.size(), 1), shift);
}

inline Eigen::Vector4d unit(int i) { return Eigen::Vector4d::Unit(i); }

}  // namespace testing
