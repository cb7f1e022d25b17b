#pragma once

#include <Eigen/Dense>

#include "chordsim/open_system.hpp"
#include "chordsim/phase_grid.hpp"

namespace chordsim {

enum class FlowDirection { forward, backward };

// Chord propagation G_t and backward decoherence form M⁻_t for duration t.
struct GaussianKernel {
  Eigen::MatrixXd G;
  Eigen::MatrixXd Mminus;
  double t = 0.0;
};

// G_t = exp[t(JB + γI)]. Throws ConfigError for non-quadratic H.
Eigen::MatrixXd propagation_matrix(const OpenSystem& system, double t);

// forward : ∫₀ᵗ G_sᵀ Λ G_s ds
// backward: ∫₀ᵗ G_{−s}ᵀ Λ G_{−s} ds
// Gauss-Legendre with 64 nodes per unit time. t must be ≥ 0.
Eigen::MatrixXd decoherence_matrix(const OpenSystem& system, double t,
                                   FlowDirection direction = FlowDirection::backward);

// K_t = ∫₀ᵗ G_{−s} ds, which carries the linear part b·x of H into the phase.
Eigen::MatrixXd backward_flow_integral(const OpenSystem& system, double t);

GaussianKernel gaussian_kernel(const OpenSystem& system, double t);

enum class Interpolation { spectral, bilinear };

struct ExactOptions {
  // How χ0 is read at the back-flowed chords G_{−t}ξ, which are off the grid.
  Interpolation interpolation = Interpolation::spectral;
};

// χ(ξ,t) = χ0(G_{−t}ξ) exp(−(i/ħ) b·K_tξ) exp(−ξ·M⁻_tξ / 2ħ).
// Throws AccuracyError when G_{−t}ξ leaves the grid where |χ0| > 1e-8.
PhaseGrid evolve_chord_exact(const OpenSystem& system, const PhaseGrid& chi0, double t,
                             const ExactOptions& options = {});

// Transform, evolve the chord function, transform back and keep the real part.
PhaseGrid evolve_wigner_exact(const OpenSystem& system, const PhaseGrid& w0, double t,
                              const ExactOptions& options = {});

}  // namespace chordsim
