#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <span>

namespace chordsim {

// Point (or chord) of the 2N-dimensional phase space, stored as (p_1..p_N, q_1..q_N).
class PhaseVector {
 public:
  PhaseVector() = default;
  explicit PhaseVector(int dof);
  explicit PhaseVector(Eigen::VectorXd coords);

  static PhaseVector from_pq(std::span<const double> p, std::span<const double> q);
  // Convenience for N = 1.
  static PhaseVector pq(double p, double q);

  int dof() const { return static_cast<int>(coords_.size() / 2); }
  int size() const { return static_cast<int>(coords_.size()); }

  double p(int i) const { return coords_[i]; }
  double q(int i) const { return coords_[dof() + i]; }
  double& p(int i) { return coords_[i]; }
  double& q(int i) { return coords_[dof() + i]; }

  double operator[](int i) const { return coords_[i]; }
  double& operator[](int i) { return coords_[i]; }

  const Eigen::VectorXd& vec() const { return coords_; }
  Eigen::VectorXd& vec() { return coords_; }

  bool is_finite() const { return coords_.allFinite(); }
  double norm() const { return coords_.norm(); }

  PhaseVector& operator+=(const PhaseVector& o);
  PhaseVector& operator-=(const PhaseVector& o);
  PhaseVector& operator*=(double s);

  friend PhaseVector operator+(PhaseVector a, const PhaseVector& b) { return a += b; }
  friend PhaseVector operator-(PhaseVector a, const PhaseVector& b) { return a -= b; }
  friend PhaseVector operator*(double s, PhaseVector a) { return a *= s; }
  friend PhaseVector operator*(PhaseVector a, double s) { return a *= s; }
  friend PhaseVector operator-(PhaseVector a) { return a *= -1.0; }
  friend bool operator==(const PhaseVector& a, const PhaseVector& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  Eigen::VectorXd coords_;
};

// x ∧ x' = Σ_n (p_n q'_n − q_n p'_n).
double skew_product(const PhaseVector& x, const PhaseVector& x2);
double skew_product(const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

// Jx with (Jx)_p = −q, (Jx)_q = p, so that x ∧ x' = Jx · x'.
PhaseVector j_apply(const PhaseVector& x);

// The 2N×2N matrix of j_apply.
Eigen::MatrixXd symplectic_j(int dof);

}  // namespace chordsim
