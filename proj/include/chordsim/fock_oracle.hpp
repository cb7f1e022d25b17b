#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chordsim/open_system.hpp"
#include "chordsim/phase_grid.hpp"
#include "chordsim/states.hpp"

namespace chordsim {

inline constexpr int kDefaultTruncation = 80;

// Truncated Fock-space density matrix of one mode.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(Eigen::MatrixXcd entries, double hbar);

  int dim() const { return static_cast<int>(rho_.rows()); }
  double hbar() const { return hbar_; }
  const Eigen::MatrixXcd& entries() const { return rho_; }

  cplx trace() const { return rho_.trace(); }
  double purity() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  // Population of the top `levels` Fock states.
  double top_population(int levels = 10) const;
  // ⟨p̂⟩, ⟨q̂⟩.
  PhaseVector mean() const;

 private:
  Eigen::MatrixXcd rho_;
  double hbar_ = 1.0;
};

// a, a†, q̂ = √(ħ/2)(a + a†), p̂ = −i√(ħ/2)(a − a†) truncated to D levels.
struct OperatorSet {
  Eigen::MatrixXcd a, adag, qop, pop;
  static OperatorSet build(int dim, double hbar);
};

// |ψ⟩⟨ψ| for a coherent, cat or Fock state (N = 1).
DensityMatrix density_from_state(const StateSpec& state, int dim = kDefaultTruncation, double hbar = 1.0);

// Ĥ and L̂_k of a one-mode OpenSystem in the truncated basis. Quadratic
// Hamiltonians are Weyl-ordered; quartic uses q̂⁴ directly. Polynomials are
// formed in a larger basis and then truncated. Pendulum throws ConfigError.
struct FockModel {
  Eigen::MatrixXcd hamiltonian;
  std::vector<Eigen::MatrixXcd> lindblad;
  double hbar = 1.0;

  static FockModel build(const OpenSystem& system, int dim);
};

// −(i/ħ)[Ĥ,ρ] + (1/ħ) Σ_k (L̂ρL̂† − ½{L̂†L̂, ρ}).
DensityMatrix lindblad_rhs(const OpenSystem& system, const DensityMatrix& rho);

struct MasterOptions {
  double dt = 2e-3;
  // Leak guard on the top Fock levels.
  int guard_levels = 10;
  double guard_population = 1e-8;
};

// RK4 in time; the step is reduced below options.dt if the generator's norm
// demands it for stability. Throws AccuracyError when the guard trips.
DensityMatrix integrate_master(const OpenSystem& system, const DensityMatrix& rho0, double t,
                               const MasterOptions& options = {});
// States at each of the increasing `times` (≥ 0), from one integration.
std::vector<DensityMatrix> integrate_master(const OpenSystem& system, const DensityMatrix& rho0,
                                            std::span<const double> times, const MasterOptions& options = {});

// W(q,p) = (2πħ)^{-1} ∫ ds e^{−ips/ħ} ⟨q+s/2|ρ|q−s/2⟩ on a centred N = 1 grid.
// Throws AccuracyError when more than `boundary_tolerance` of Σ|W| sits on the
// outer layer of the grid.
PhaseGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& grid,
                              double boundary_tolerance = kBoundaryTolerance);
// wigner_to_chord of the above.
PhaseGrid chord_from_density(const DensityMatrix& rho, const GridSpec& grid);
// (2πħ)^{-1} tr(exp(i(ξ_q p̂ − ξ_p q̂)/ħ) ρ) evaluated by matrix exponential.
cplx chord_direct(const DensityMatrix& rho, const PhaseVector& xi);

// `.dm`: one JSON line {"format":"dm","version":1,"dim":D,"hbar":h} then D²
// little-endian (re, im) double pairs, row-major.
void write_dm(std::ostream& out, const DensityMatrix& rho);
void write_dm(const std::filesystem::path& path, const DensityMatrix& rho);
DensityMatrix read_dm(std::istream& in);
DensityMatrix read_dm(const std::filesystem::path& path);

}  // namespace chordsim
