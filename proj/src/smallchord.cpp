#include "chordsim/smallchord.hpp"

#include <cmath>
#include <cstring>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/kernels.hpp"
#include "chordsim/linalg.hpp"
#include "chordsim/log.hpp"
#include "chordsim/transform.hpp"

namespace chordsim {
namespace {

// Sources below this fraction of max|W0| are dropped from the chord sum.
constexpr double kSourceCutoff = 1e-14;
// Samples above this fraction of max|W0| count as the support of the state.
constexpr double kSupportCutoff = 1e-3;
// Validity guard of the small-chord premise.
constexpr double kLongChordMass = 1e-3;

struct BundleState {
  SmallVec x;
  SmallMat g;
  SmallMat m;
};

class BundleStepper {
 public:
  explicit BundleStepper(const OpenSystem& system)
      : sys_(system), j_(small_j(system.dof())), lambda_(system.environment_matrix()), gamma_(system.gamma()) {}

  void rhs(const BundleState& s, BundleState& d) {
    sys_.hamiltonian().gradient(s.x, grad_);
    sys_.hamiltonian().hessian(s.x, hess_);
    d.x.noalias() = j_ * grad_;
    d.x -= gamma_ * s.x;
    gen_.noalias() = j_ * hess_;
    gen_.diagonal().array() += gamma_;
    d.g.noalias() = gen_ * s.g;
    tmp_.noalias() = lambda_ * s.g;
    d.m.noalias() = s.g.transpose() * tmp_;
  }

  void step(BundleState& s, double h) {
    rhs(s, k1_);
    axpy(s, 0.5 * h, k1_, mid_);
    rhs(mid_, k2_);
    axpy(s, 0.5 * h, k2_, mid_);
    rhs(mid_, k3_);
    axpy(s, h, k3_, mid_);
    rhs(mid_, k4_);
    const double c = h / 6.0;
    s.x += c * (k1_.x + 2.0 * k2_.x + 2.0 * k3_.x + k4_.x);
    s.g += c * (k1_.g + 2.0 * k2_.g + 2.0 * k3_.g + k4_.g);
    dm_ = c * (k1_.m + 2.0 * k2_.m + 2.0 * k3_.m + k4_.m);
    // Symmetric increments keep M exactly symmetric.
    s.m += 0.5 * (dm_ + dm_.transpose());
  }

 private:
  static void axpy(const BundleState& s, double h, const BundleState& k, BundleState& out) {
    out.x = s.x + h * k.x;
    out.g = s.g + h * k.g;
    out.m = s.m + h * k.m;
  }

  const OpenSystem& sys_;
  SmallMat j_;
  SmallMat lambda_;
  double gamma_;
  SmallVec grad_;
  SmallMat hess_, gen_, tmp_, dm_;
  BundleState k1_, k2_, k3_, k4_, mid_;
};

// Integrates the bundle over [0, t]; visit(n, time, state) is called for
// every step including n = 0.
template <class Visit>
void integrate_bundle(const OpenSystem& system, const PhaseVector& x0, double t, double dt, Visit&& visit) {
  if (x0.dof() != system.dof()) throw DimensionError("local_bundle: x0 has wrong dimension");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("local_bundle: dt must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("local_bundle: t must be finite and >= 0");
  const int n2 = 2 * system.dof();
  const int steps = t == 0.0 ? 0 : std::max(1, static_cast<int>(std::ceil(t / dt - 1e-9)));
  const double h = steps == 0 ? 0.0 : t / steps;
  BundleState s{x0.vec(), SmallMat::Identity(n2, n2), SmallMat::Zero(n2, n2)};
  BundleStepper stepper(system);
  visit(0, 0.0, s);
  for (int k = 1; k <= steps; ++k) {
    stepper.step(s, h);
    const double tk = k == steps ? t : k * h;
    if (!s.x.allFinite() || !s.g.allFinite() || !s.m.allFinite()) {
      std::ostringstream msg;
      msg << "local_bundle: non-finite state at t = " << tk;
      throw DivergenceError(msg.str());
    }
    visit(k, tk, s);
  }
}

// Tracks the first crossing of det M ≥ threshold, refined linearly.
struct CrossingTracker {
  double threshold;
  double prev_t = 0.0;
  double prev_det = 0.0;
  double t_cross = std::numeric_limits<double>::infinity();

  void update(double t, double det) {
    if (!std::isfinite(t_cross) && det >= threshold) {
      t_cross = det > prev_det ? prev_t + (t - prev_t) * (threshold - prev_det) / (det - prev_det) : t;
    }
    prev_t = t;
    prev_det = det;
  }
};

// Q = G⁻ᵀ M G⁻¹
Eigen::MatrixXd pull_back(const Eigen::MatrixXd& g, const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd inv = g.partialPivLu().inverse();
  Eigen::MatrixXd q = inv.transpose() * m * inv;
  return 0.5 * (q + q.transpose());
}

void check_input(const OpenSystem& system, const PhaseGrid& w0, const char* what) {
  if (w0.tag() != SpaceTag::centre) throw ConfigError(std::string(what) + ": input is not a centre grid");
  if (w0.dof() != system.dof()) throw DimensionError(std::string(what) + ": grid and system dof differ");
  if (std::abs(w0.hbar() - system.hbar()) > 1e-12 * system.hbar())
    throw ConfigError(std::string(what) + ": grid and system hbar differ");
}

double max_magnitude(const PhaseGrid& g) {
  double m = 0.0;
  for (const auto& v : g.samples()) m = std::max(m, std::abs(v));
  return m;
}

struct Sources {
  GaussianSources sum;
  double min_t_cross = std::numeric_limits<double>::infinity();
};

// One bundle endpoint per significant centre sample.
Sources collect_sources(const OpenSystem& system, const PhaseGrid& w0, double t, const SmallChordOptions& options) {
  const auto& spec = w0.spec();
  const int rank = spec.rank();
  const double peak = max_magnitude(w0);
  std::vector<std::size_t> picked;
  for (std::size_t f = 0; f < w0.size(); ++f)
    if (std::abs(w0[f]) > kSourceCutoff * peak) picked.push_back(f);

  const auto k = static_cast<Eigen::Index>(picked.size());
  Sources out;
  out.sum.dof = spec.dof();
  out.sum.hbar = spec.hbar;
  out.sum.centres.resize(rank, k);
  out.sum.quench.resize(rank, rank * k);
  out.sum.weights.resize(picked.size());
  std::vector<double> crossing(picked.size());
  const double scale = spec.cell_volume() / std::pow(2.0 * std::numbers::pi * spec.hbar, spec.dof());

  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index s = 0; s < k; ++s) {
    try {
      const PhaseVector x0 = w0.point(picked[s]);
      const BundleEndpoint e = options.cache ? options.cache->get(system, x0, t, options.dt)
                                             : bundle_endpoint(system, x0, t, options.dt);
      out.sum.centres.col(s) = e.x_t.vec();
      out.sum.quench.block(0, s * rank, rank, rank) = pull_back(e.G, e.M);
      out.sum.weights[s] = scale * w0[picked[s]];
      crossing[s] = std::abs(w0[picked[s]]) >= kSupportCutoff * peak ? e.t_cross
                                                                      : std::numeric_limits<double>::infinity();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (double c : crossing) out.min_t_cross = std::min(out.min_t_cross, c);
  return out;
}

PhaseVector centroid(const PhaseGrid& w) {
  PhaseVector c(w.dof());
  double mass = 0.0;
  for (std::size_t f = 0; f < w.size(); ++f) {
    const double v = w[f].real();
    mass += v;
    c += v * w.point(f);
  }
  if (mass == 0.0) throw AccuracyError("centroid: state has zero mass");
  return (1.0 / mass) * c;
}

}  // namespace

double decoherence_threshold(int dof) { return std::pow(4.0, -dof); }

std::size_t PropagationBundle::index_at(double t) const {
  const auto& ts = times();
  const double tol = 1e-9 * std::max(1.0, std::abs(duration()));
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) <= tol) return i;
  std::ostringstream msg;
  msg << "PropagationBundle: t = " << t << " is not a step time within [0, " << duration() << "]";
  throw ConfigError(msg.str());
}

Eigen::MatrixXd PropagationBundle::pulled_back_decoherence(std::size_t index) const {
  return pull_back(G.at(index), M.at(index));
}

PropagationBundle local_bundle(const OpenSystem& system, const PhaseVector& x0, double t, double dt) {
  PropagationBundle b;
  integrate_bundle(system, x0, t, dt, [&](int, double tk, const BundleState& s) {
    b.x_traj.times.push_back(tk);
    b.x_traj.points.emplace_back(Eigen::VectorXd(s.x));
    b.G.emplace_back(s.g);
    b.M.emplace_back(s.m);
  });
  return b;
}

BundleEndpoint bundle_endpoint(const OpenSystem& system, const PhaseVector& x0, double t, double dt) {
  BundleEndpoint e;
  CrossingTracker tracker{decoherence_threshold(system.dof())};
  const bool dissipative = !system.unitary();
  integrate_bundle(system, x0, t, dt, [&](int, double tk, const BundleState& s) {
    if (dissipative) tracker.update(tk, s.m.determinant());
    e.x_t = PhaseVector(Eigen::VectorXd(s.x));
    e.G = s.g;
    e.M = s.m;
  });
  e.t_cross = tracker.t_cross;
  return e;
}

std::string BundleCache::key(const PhaseVector& x0, double t, double dt) {
  std::string k(sizeof(double) * (x0.size() + 2), '\0');
  std::memcpy(k.data(), x0.vec().data(), sizeof(double) * x0.size());
  std::memcpy(k.data() + sizeof(double) * x0.size(), &t, sizeof(double));
  std::memcpy(k.data() + sizeof(double) * (x0.size() + 1), &dt, sizeof(double));
  return k;
}

BundleEndpoint BundleCache::get(const OpenSystem& system, const PhaseVector& x0, double t, double dt) {
  const std::string k = key(x0, t, dt);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(k); it != entries_.end()) return it->second;
  }
  BundleEndpoint e = bundle_endpoint(system, x0, t, dt);
  std::unique_lock lock(mutex_);
  // A concurrent insert of the same key computed the same value.
  return entries_.try_emplace(k, std::move(e)).first->second;
}

std::size_t BundleCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void BundleCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

cplx mixed_propagator(const OpenSystem& system, const PropagationBundle& bundle, const PhaseVector& xi, double t) {
  if (xi.dof() != system.dof()) throw DimensionError("mixed_propagator: chord has wrong dimension");
  const std::size_t i = bundle.index_at(t);
  const double hbar = system.hbar();
  const Eigen::MatrixXd q = bundle.pulled_back_decoherence(i);
  const double phase = skew_product(bundle.x_traj.points[i], xi) / hbar;
  const double decay = -0.5 * xi.vec().dot(q * xi.vec()) / hbar;
  return std::pow(2.0, -system.dof()) * std::exp(cplx{decay, phase});
}

double long_chord_fraction(const PhaseGrid& chi, double radius) {
  if (chi.tag() != SpaceTag::chord) throw ConfigError("long_chord_fraction: input is not a chord grid");
  double total = 0.0, outer = 0.0;
  for (std::size_t f = 0; f < chi.size(); ++f) {
    const double v = std::norm(chi[f]);
    total += v;
    if (chi.point(f).norm() > radius) outer += v;
  }
  return total > 0.0 ? outer / total : 0.0;
}

PhaseGrid evolve_chord_smallchord(const OpenSystem& system, const PhaseGrid& w0, double t,
                                  const SmallChordOptions& options) {
  check_input(system, w0, "evolve_chord_smallchord");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("evolve_chord_smallchord: t must be finite and >= 0");
  const PhaseGrid chi0 = wigner_to_chord(w0);
  if (t == 0.0) return chi0;

  const double radius = 3.0 * std::sqrt(2.0 * system.hbar());
  if (const double frac = long_chord_fraction(chi0, radius); frac > kLongChordMass) {
    std::ostringstream msg;
    msg << "small-chord premise: " << frac << " of the chord weight lies beyond |xi| = " << radius
        << "; the input is not coarse enough";
    warn(msg.str());
  }

  Sources src = collect_sources(system, w0, t, options);
  const double limit = options.policy.overshoot * src.min_t_cross;
  if (t > limit) {
    std::ostringstream msg;
    msg << "small-chord step t = " << t << " exceeds " << options.policy.overshoot
        << " x the smallest decoherence time on the support (" << src.min_t_cross << ")";
    if (options.policy.strict) throw AccuracyError(msg.str());
    warn(msg.str());
  }

  PhaseGrid chi = gaussian_source_sum(chi0.spec(), src.sum);
  // Every source contributes exactly its weight at ξ = 0.
  cplx origin{0.0, 0.0};
  for (const auto& wgt : src.sum.weights) origin += wgt;
  chi[chi.origin_flat()] = origin;
  return chi;
}

PhaseGrid evolve_wigner_smallchord(const OpenSystem& system, const PhaseGrid& w0, double t,
                                   const SmallChordOptions& options) {
  check_input(system, w0, "evolve_wigner_smallchord");
  if (t == 0.0) return w0;
  return real_part(chord_to_wigner(evolve_chord_smallchord(system, w0, t, options)));
}

PhaseGrid evolve_wigner_smallchord_direct(const OpenSystem& system, const PhaseGrid& w0, double t,
                                          const SmallChordOptions& options) {
  check_input(system, w0, "evolve_wigner_smallchord_direct");
  if (!(t > 0.0)) throw ConfigError("evolve_wigner_smallchord_direct: t must be > 0");
  const Sources src = collect_sources(system, w0, t, options);
  const auto& spec = w0.spec();
  const int rank = spec.rank();
  const double hbar = system.hbar();
  const Eigen::MatrixXd j = symplectic_j(system.dof());

  const auto k = static_cast<Eigen::Index>(src.sum.count());
  std::vector<Eigen::MatrixXd> precision(k);
  std::vector<double> norm(k);
  for (Eigen::Index s = 0; s < k; ++s) {
    const Eigen::MatrixXd q = src.sum.quench.block(0, s * rank, rank, rank);
    const Eigen::MatrixXd cov = hbar * j.transpose() * q * j;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success || cov.determinant() <= 0.0)
      throw AccuracyError("evolve_wigner_smallchord_direct: window covariance is singular");
    precision[s] = llt.solve(Eigen::MatrixXd::Identity(rank, rank));
    norm[s] = 1.0 / std::sqrt(std::pow(2.0 * std::numbers::pi, rank) * cov.determinant());
  }
  // Back out W0(x)ΔV from the chord weights.
  const double to_mass = std::pow(2.0 * std::numbers::pi * hbar, system.dof());

  PhaseGrid out(spec);
  const auto size = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < size; ++f) {
    const Eigen::VectorXd xp = out.point(static_cast<std::size_t>(f)).vec();
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::VectorXd u = xp - src.sum.centres.col(i);
      const double e = -0.5 * u.dot(precision[i] * u);
      if (e < -60.0) continue;
      s += src.sum.weights[i].real() * to_mass * norm[i] * std::exp(e);
    }
    out[static_cast<std::size_t>(f)] = s;
  }
  return out;
}

DecoherenceReport decoherence_time(const OpenSystem& system, const PhaseVector& x, double t_max, double dt) {
  if (!(t_max > 0.0)) throw ConfigError("decoherence_time: t_max must be > 0");
  DecoherenceReport r;
  r.x = x;
  CrossingTracker tracker{decoherence_threshold(system.dof())};
  integrate_bundle(system, x, t_max, dt, [&](int, double tk, const BundleState& s) {
    const double det = s.m.determinant();
    r.det_M_curve.emplace_back(tk, det);
    if (!system.unitary()) tracker.update(tk, det);
  });
  r.t_dec = tracker.t_cross;
  return r;
}

void write_decoherence_csv(std::ostream& out, const DecoherenceReport& report) {
  out << "t,det_M\n" << std::setprecision(17);
  for (const auto& [t, d] : report.det_M_curve) out << t << ',' << d << '\n';
}

PhaseGrid evolve_iterated(const OpenSystem& system, const PhaseGrid& w0, double t_total,
                          const SmallChordOptions& options) {
  check_input(system, w0, "evolve_iterated");
  if (!(t_total >= 0.0) || !std::isfinite(t_total)) throw ConfigError("evolve_iterated: t_total must be >= 0");
  if (!(options.policy.max_step > 0.0)) throw ConfigError("evolve_iterated: max_step must be > 0");
  PhaseGrid w = w0;
  double remaining = t_total;
  while (remaining > 1e-12 * std::max(1.0, t_total)) {
    double bound = options.policy.max_step;
    if (system.gamma() != 0.0 && !system.unitary()) {
      const auto report = decoherence_time(system, centroid(w), options.policy.max_step, options.dt);
      bound = std::min(bound, report.t_dec);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(remaining / bound - 1e-9)));
    const double h = remaining / steps;
    w = evolve_wigner_smallchord(system, w, h, options);
    remaining -= h;
  }
  return w;
}

}  // namespace chordsim
