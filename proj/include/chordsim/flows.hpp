#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "chordsim/open_system.hpp"

namespace chordsim {

// Point X = (x, y) of double phase space, with y = Jξ.
struct DoublePhasePoint {
  PhaseVector x;
  PhaseVector y;

  static DoublePhasePoint from_chord(PhaseVector centre, const PhaseVector& chord);
  // ξ = −Jy.
  PhaseVector chord() const;
  // Chord tips x± = x ∓ Jy/2 = x ± ξ/2.
  PhaseVector plus() const;
  PhaseVector minus() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseVector> points;
};

struct DoubleTrajectory {
  std::vector<double> times;
  std::vector<DoublePhasePoint> points;
};

inline constexpr double kDefaultDt = 1e-3;

// ẋ = J∇H(x) − γx by fixed-step RK4; t < 0 integrates backwards. The step is
// shrunk so that |t| is an integer number of steps ≤ dt.
Trajectory centre_flow(const OpenSystem& system, const PhaseVector& x0, double t, double dt = kDefaultDt);
PhaseVector centre_flow_endpoint(const OpenSystem& system, const PhaseVector& x0, double t,
                                 double dt = kDefaultDt);

// exp[t(JB + γI)] ξ0 for a quadratic Hamiltonian.
PhaseVector chord_flow_quadratic(const OpenSystem& system, const PhaseVector& xi0, double t);

// 𝕀H(X) = H(x − Jy/2) − H(x + Jy/2) − γ x·y.
double double_hamiltonian(const OpenSystem& system, const DoublePhasePoint& X);

// Hamilton's equations of 𝕀H in double phase space, RK4.
DoubleTrajectory double_flow(const OpenSystem& system, const DoublePhasePoint& X0, double t,
                             double dt = kDefaultDt);

// Cumulative D(t_i) = Σ_k ∫ [(l′_k·ξ)² + (l″_k·ξ)²] dt′ by trapezoid quadrature.
std::vector<double> decoherence_functional(const OpenSystem& system, const DoubleTrajectory& trajectory);

// Columns t, p…, q… (and y_p…, y_q… for double trajectories).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(std::ostream& out, const DoubleTrajectory& trajectory);

}  // namespace chordsim
