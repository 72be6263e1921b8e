#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace ucollab::testing {

inline Eigen::MatrixXd gaussian(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(gen);
  return m;
}

/// Uniformly distributed (Haar) matrix with orthonormal columns.
inline Eigen::MatrixXd random_stiefel(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::MatrixXd g = gaussian(gen, rows, cols);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index k = 0; k < cols; ++k)
    if (r(k, k) < 0) q.col(k) = -q.col(k);
  return q;
}

/// Projector by the textbook formula W^T (W W^T)^{-1} W.
inline Eigen::MatrixXd direct_projector(const Eigen::MatrixXd& w) {
  return w.transpose() * (w * w.transpose()).inverse() * w;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace ucollab::testing
