#pragma once

#include "chordsim/phase_grid.hpp"

namespace chordsim {

// W(x) = (2πħ)^{-N} Σ_ξ ΔΞ exp(i ξ∧x / ħ) χ(ξ) on the conjugate grid.
// Requires a chord grid centred on the origin.
PhaseGrid chord_to_wigner(const PhaseGrid& chi);

// χ(ξ) = (2πħ)^{-N} Σ_x ΔV exp(i x∧ξ / ħ) W(x) on the conjugate grid.
// Requires a centre grid centred on the origin. (2πħ)^N χ(0) equals
// quadrature(w) exactly.
PhaseGrid wigner_to_chord(const PhaseGrid& w);

// In-place centred DFT along one axis of a row-major array:
// out_k = Σ_j in_j exp(sign · 2πi (j − n/2)(k − n/2) / n).
void centred_dft_axis(std::span<cplx> data, std::span<const int> dims, int axis, int sign);

}  // namespace chordsim
