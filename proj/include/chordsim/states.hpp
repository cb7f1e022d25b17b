#pragma once

#include <vector>

#include "chordsim/phase_grid.hpp"

namespace chordsim {

// Initial states with closed-form Wigner functions.
struct StateSpec {
  enum class Kind { coherent, cat, fock };

  Kind kind = Kind::coherent;
  // coherent: one centre; cat: two distinct centres.
  std::vector<PhaseVector> centres;
  // Relative phase θ of the cat superposition |x1⟩ + e^{iθ}|x2⟩.
  double phase = 0.0;
  // Fock index for kind == fock (N = 1 only).
  int fock_index = 0;

  static StateSpec coherent(PhaseVector centre);
  static StateSpec cat(PhaseVector first, PhaseVector second, double phase = 0.0);
  static StateSpec fock(int n);

  int dof() const;
  // Throws ConfigError when the parameters do not describe a state.
  void validate() const;
  // Phase-space centroid of the state (mean of x under W).
  PhaseVector centroid(double hbar) const;
};

const char* to_string(StateSpec::Kind kind);

// Closed-form Wigner function sampled on `grid` (a centre grid), normalized
// so that its grid quadrature is exactly one. Throws AccuracyError when more
// than 1e-6 of the state's weight sits on the outer layer of the grid.
PhaseGrid build_state(const StateSpec& state, const GridSpec& grid);

// tr ρ² = (2πħ)^N Σ |f|² ΔV, for either a centre or a chord grid.
double purity(const PhaseGrid& state);

// Threshold used by build_state and the oracle extraction for the boundary check.
inline constexpr double kBoundaryTolerance = 1e-6;

}  // namespace chordsim
