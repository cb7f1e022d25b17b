#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "chordsim/flows.hpp"
#include "chordsim/phase_grid.hpp"

namespace chordsim {

// Linearized dynamics along one dissipative centre trajectory:
//   G(t): chord propagation, Ġ = (J∇²H(x(t)) + γ)G, G(0) = I
//   M(t): forward decoherence matrix, Ṁ = GᵀΛG, M(0) = 0
// integrated together with x(t) by RK4 on the same steps.
struct PropagationBundle {
  Trajectory x_traj;
  std::vector<Eigen::MatrixXd> G;
  std::vector<Eigen::MatrixXd> M;

  const std::vector<double>& times() const { return x_traj.times; }
  double duration() const { return x_traj.times.back(); }
  // Index of the stored sample at time t; throws ConfigError if t is not a step time.
  std::size_t index_at(double t) const;
  // Decoherence form pulled back to the chord at time t: G⁻ᵀ M G⁻¹.
  Eigen::MatrixXd pulled_back_decoherence(std::size_t index) const;
};

PropagationBundle local_bundle(const OpenSystem& system, const PhaseVector& x0, double t,
                               double dt = kDefaultDt);

// Endpoint data of a bundle: what the chord quadrature needs per source.
struct BundleEndpoint {
  PhaseVector x_t;
  Eigen::MatrixXd G;
  Eigen::MatrixXd M;
  // First time det M ≥ 4^{-N}, or +∞ if not reached within the bundle.
  double t_cross = std::numeric_limits<double>::infinity();
};

BundleEndpoint bundle_endpoint(const OpenSystem& system, const PhaseVector& x0, double t,
                               double dt = kDefaultDt);

// Thread-safe insert-or-get cache of endpoints keyed by (x0, t, dt). A cache
// belongs to one OpenSystem.
class BundleCache {
 public:
  BundleEndpoint get(const OpenSystem& system, const PhaseVector& x0, double t, double dt);
  std::size_t size() const;
  void clear();

 private:
  static std::string key(const PhaseVector& x0, double t, double dt);
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, BundleEndpoint> entries_;
};

// R̃_x(ξ,t) = 2^{-N} exp(i x(t)∧ξ/ħ) exp(−ξ·Q ξ / 2ħ) with Q the decoherence
// form pulled back to the chord at time t. t must be a step time of the bundle.
cplx mixed_propagator(const OpenSystem& system, const PropagationBundle& bundle, const PhaseVector& xi, double t);

struct IterationPolicy {
  double max_step = 0.5;
  // A single evolution may run to overshoot · (smallest t_dec over the
  // support of the input) before it counts as out of range.
  double overshoot = 2.0;
  // Out of range: throw AccuracyError when strict, otherwise warn.
  bool strict = true;
};

struct SmallChordOptions {
  double dt = kDefaultDt;
  IterationPolicy policy{};
  BundleCache* cache = nullptr;
};

// χ(ξ,t) = Σ_x ΔV/(2πħ)^N W0(x) exp(i x(t)∧ξ/ħ) exp(−ξ·Q_x ξ / 2ħ) on the
// chord grid conjugate to w0.
PhaseGrid evolve_chord_smallchord(const OpenSystem& system, const PhaseGrid& w0, double t,
                                  const SmallChordOptions& options = {});

// chord_to_wigner of the above, real part.
PhaseGrid evolve_wigner_smallchord(const OpenSystem& system, const PhaseGrid& w0, double t,
                                   const SmallChordOptions& options = {});

// Same evolution written as a sum of unit-mass Gaussian windows
// centred at x(t) with covariance ħ JᵀQJ, evaluated directly on the centre
// grid. Requires invertible Q; kept for cross-checks.
PhaseGrid evolve_wigner_smallchord_direct(const OpenSystem& system, const PhaseGrid& w0, double t,
                                          const SmallChordOptions& options = {});

// Share of (2πħ)^N Σ|χ|² ΔΞ lying at |ξ| > radius.
double long_chord_fraction(const PhaseGrid& chi, double radius);

struct DecoherenceReport {
  PhaseVector x;
  double t_dec = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> det_M_curve;

  bool decoheres() const { return std::isfinite(t_dec); }
};

DecoherenceReport decoherence_time(const OpenSystem& system, const PhaseVector& x, double t_max,
                                   double dt = kDefaultDt);

// Columns t, det_M.
void write_decoherence_csv(std::ostream& out, const DecoherenceReport& report);

// Repeats evolve_wigner_smallchord on equal steps no longer than
// min(max_step, t_dec at the current centroid); γ = 0 uses max_step alone.
PhaseGrid evolve_iterated(const OpenSystem& system, const PhaseGrid& w0, double t_total,
                          const SmallChordOptions& options = {});

// det M threshold 4^{-N} marking the decoherence time.
double decoherence_threshold(int dof);

}  // namespace chordsim
