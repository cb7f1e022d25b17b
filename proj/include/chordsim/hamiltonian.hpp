#pragma once

#include <string>

#include "chordsim/linalg.hpp"
#include "chordsim/phase_vector.hpp"

namespace chordsim {

// Weyl symbol H(x) of the internal Hamiltonian together with its first and
// second derivatives.
//
//   quadratic : ½ x·Bx + b·x           (any N, B symmetric)
//   quartic   : p²/2 + q⁴/4 + κ q²     (N = 1)
//   pendulum  : p²/2 − cos q           (N = 1)
class SmoothHamiltonian {
 public:
  enum class Kind { quadratic, quartic, pendulum };

  static SmoothHamiltonian quadratic(Eigen::MatrixXd b_matrix, Eigen::VectorXd linear);
  static SmoothHamiltonian quadratic(Eigen::MatrixXd b_matrix);
  // (ω/2)(p² + q²) on every mode.
  static SmoothHamiltonian harmonic(int dof = 1, double omega = 1.0);
  static SmoothHamiltonian zero(int dof = 1);
  static SmoothHamiltonian quartic(double kappa = 0.0);
  static SmoothHamiltonian pendulum();

  Kind kind() const { return kind_; }
  int dof() const { return dof_; }
  bool is_quadratic() const { return kind_ == Kind::quadratic; }
  // Throws ConfigError unless kind() == quadratic.
  const Eigen::MatrixXd& quadratic_matrix() const;
  const Eigen::VectorXd& linear_coefficients() const;
  double kappa() const { return kappa_; }

  double value(const PhaseVector& x) const;
  PhaseVector gradient(const PhaseVector& x) const;
  Eigen::MatrixXd hessian(const PhaseVector& x) const;

  // Allocation-free forms for integrator inner loops.
  double value(const SmallVec& x) const;
  void gradient(const SmallVec& x, SmallVec& out) const;
  void hessian(const SmallVec& x, SmallMat& out) const;

  std::string describe() const;

 private:
  SmoothHamiltonian(Kind kind, int dof) : kind_(kind), dof_(dof) {}
  void check_dim(Eigen::Index n) const;

  Kind kind_;
  int dof_;
  Eigen::MatrixXd b_matrix_;
  Eigen::VectorXd linear_;
  double kappa_ = 0.0;
};

const char* to_string(SmoothHamiltonian::Kind kind);

}  // namespace chordsim
