#pragma once

#include <Eigen/Dense>

namespace chordsim {

// Upper bound on 2N for the stack-allocated small matrices used in the
// per-trajectory hot loops (N <= 4).
inline constexpr int kMaxRank = 8;

using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxRank, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxRank, kMaxRank>;

Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

// Skew-symmetric J in (p, q) ordering; see symplectic_j.
SmallMat small_j(int dof);

// Largest |entry| of a matrix.
double max_abs(const Eigen::MatrixXd& a);

// n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
const QuadratureRule& gauss_legendre(int n);

}  // namespace chordsim
