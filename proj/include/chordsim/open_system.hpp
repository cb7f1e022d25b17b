#pragma once

#include <span>
#include <vector>

#include "chordsim/hamiltonian.hpp"

namespace chordsim {

// Linear Lindblad function L(x) = (l′ + i l″)·x.
struct LindbladChannel {
  PhaseVector lp;   // l′
  PhaseVector lpp;  // l″

  // √strength · â on `mode`, â = (q̂ + i p̂)/√2.
  static LindbladChannel annihilation(double strength = 1.0, int mode = 0, int dof = 1);
  // √strength · â† on `mode`.
  static LindbladChannel creation(double strength = 1.0, int mode = 0, int dof = 1);
  // Self-adjoint channel L = l·x.
  static LindbladChannel hermitian(PhaseVector l);

  int dof() const { return lp.dof(); }
  void validate() const;
};

// γ = Σ_k l″_k ∧ l′_k. The orientation is chosen so that the annihilation
// channel gives γ = +1/2 and contracts the centre flow.
double dissipation_coefficient(std::span<const LindbladChannel> channels);

// Hamiltonian + linear Lindblad channels + ħ. Immutable after construction.
class OpenSystem {
 public:
  OpenSystem(SmoothHamiltonian hamiltonian, std::vector<LindbladChannel> channels, double hbar = 1.0);

  // Damped-oscillator bath on one mode: l₁ = √(A(ν+1)) â, l₂ = √(Aν) â†.
  static std::vector<LindbladChannel> thermal_channels(double rate_a, double nu, int mode = 0, int dof = 1);

  const SmoothHamiltonian& hamiltonian() const { return hamiltonian_; }
  const std::vector<LindbladChannel>& channels() const { return channels_; }
  double hbar() const { return hbar_; }
  double gamma() const { return gamma_; }
  int dof() const { return hamiltonian_.dof(); }
  bool is_quadratic() const { return hamiltonian_.is_quadratic(); }
  bool unitary() const { return channels_.empty(); }

  // Λ = Σ_k (l′_k l′_kᵀ + l″_k l″_kᵀ).
  const Eigen::MatrixXd& environment_matrix() const { return lambda_; }

 private:
  SmoothHamiltonian hamiltonian_;
  std::vector<LindbladChannel> channels_;
  double hbar_;
  double gamma_;
  Eigen::MatrixXd lambda_;
};

}  // namespace chordsim
