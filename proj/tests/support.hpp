#pragma once
#include "spinorforge/clifford.hpp"

#include <Eigen/Dense>
#include <random>

namespace sftest {

using spinorforge::Multivector;

inline std::mt19937_64 &rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

inline double uniform(double a = -1, double b = 1) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline Eigen::VectorXd random_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform();
  return v;
}

inline Eigen::MatrixXd random_matrix(int r, int c) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = uniform();
  return m;
}

inline Eigen::MatrixXd random_skew(int n) {
  Eigen::MatrixXd m = random_matrix(n, n);
  return m - m.transpose();
}

inline Eigen::MatrixXd random_rotation(int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(n, n));
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

inline Multivector random_multivector(int n) {
  Multivector m(n);
  for (std::uint32_t k = 0; k < m.size(); ++k) m[k] = uniform();
  return m;
}

// product of an even number of unit vectors
inline Multivector random_spin(int n) {
  Multivector g = Multivector::scalar(n, 1.0);
  for (int k = 0; k < 4; ++k) g = g * Multivector::vector(random_vector(n).normalized());
  return g;
}

} // namespace sftest
