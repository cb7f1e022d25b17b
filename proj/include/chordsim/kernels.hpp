#pragma once

#include <vector>

#include <Eigen/Dense>

#include "chordsim/phase_grid.hpp"

namespace chordsim {

// χ(η) = (2πħ)^{-N} Σ_x ΔV W(x) exp(i x∧η/ħ) at arbitrary chords η, one per
// column of `etas` (2N × K). On the conjugate grid this reproduces
// wigner_to_chord exactly; off the grid it is the spectral interpolant.
std::vector<cplx> chord_samples(const PhaseGrid& w, const Eigen::MatrixXd& etas);
// Serial direct sum, for testing.
std::vector<cplx> chord_samples_reference(const PhaseGrid& w, const Eigen::MatrixXd& etas);

// A cloud of Gaussian-windowed plane waves in chord space,
//   χ(ξ) = Σ_s w_s exp(i x_s∧ξ/ħ − ξ·Q_s ξ / 2ħ).
struct GaussianSources {
  int dof = 1;
  double hbar = 1.0;
  Eigen::MatrixXd centres;  // 2N × K
  Eigen::MatrixXd quench;   // 2N × 2N·K, Q_s stacked horizontally, symmetric PSD
  std::vector<cplx> weights;

  std::size_t count() const { return weights.size(); }
  void validate() const;
};

// Evaluates the source sum on every sample of a chord grid. Rows along the
// last axis are filled by a complex-Gaussian recurrence started at the row
// maximum, so each (row, source) pair costs two exponentials.
PhaseGrid gaussian_source_sum(const GridSpec& chord_spec, const GaussianSources& sources);
// Serial direct evaluation, for testing.
PhaseGrid gaussian_source_sum_reference(const GridSpec& chord_spec, const GaussianSources& sources);

}  // namespace chordsim
