#include "chordsim/quadratic_exact.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/kernels.hpp"
#include "chordsim/linalg.hpp"
#include "chordsim/transform.hpp"

namespace chordsim {
namespace {

constexpr int kNodesPerUnitTime = 64;
constexpr double kOutsideTolerance = 1e-8;

Eigen::MatrixXd generator(const OpenSystem& system) {
  const int n2 = 2 * system.dof();
  return symplectic_j(system.dof()) * system.hamiltonian().quadratic_matrix() +
         system.gamma() * Eigen::MatrixXd::Identity(n2, n2);
}

void check_time(double t, const char* what) {
  if (!std::isfinite(t) || t < 0.0) throw ConfigError(std::string(what) + ": t must be finite and >= 0");
}

// ∫₀ᵗ f(G_{sign·s}) ds by composite Gauss-Legendre on unit-length panels.
template <class F>
Eigen::MatrixXd integrate(const Eigen::MatrixXd& a, double t, double sign, F&& f) {
  const int panels = std::max(1, static_cast<int>(std::ceil(t)));
  const double h = t / panels;
  const auto& rule = gauss_legendre(kNodesPerUnitTime);
  Eigen::MatrixXd sum;
  for (int k = 0; k < panels; ++k) {
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double s = h * (k + 0.5 * (rule.nodes[i] + 1.0));
      Eigen::MatrixXd term = 0.5 * h * rule.weights[i] * f(expm(sign * s * a));
      if (sum.size() == 0)
        sum = std::move(term);
      else
        sum += term;
    }
  }
  return sum;
}

// Multilinear interpolation of χ0 at chord η; nullopt when η is off the grid.
std::optional<cplx> multilinear(const PhaseGrid& chi, const Eigen::VectorXd& eta) {
  const auto& spec = chi.spec();
  const int rank = spec.rank();
  std::vector<int> base(rank);
  std::vector<double> frac(rank);
  for (int a = 0; a < rank; ++a) {
    const double u = (eta[a] - spec.origin[a]) / spec.spacing[a] + spec.dims[a] / 2;
    if (u < 0.0 || u > spec.dims[a] - 1) return std::nullopt;
    int i = std::min(static_cast<int>(std::floor(u)), spec.dims[a] - 2);
    base[a] = i;
    frac[a] = u - i;
  }
  cplx s{0.0, 0.0};
  std::vector<int> idx(rank);
  for (int corner = 0; corner < (1 << rank); ++corner) {
    double wgt = 1.0;
    for (int a = 0; a < rank; ++a) {
      const bool up = (corner >> a) & 1;
      idx[a] = base[a] + (up ? 1 : 0);
      wgt *= up ? frac[a] : 1.0 - frac[a];
    }
    if (wgt != 0.0) s += wgt * chi[chi.flat_of(idx)];
  }
  return s;
}

bool inside(const GridSpec& spec, const Eigen::VectorXd& eta) {
  for (int a = 0; a < spec.rank(); ++a) {
    const double u = (eta[a] - spec.origin[a]) / spec.spacing[a] + spec.dims[a] / 2;
    if (u < 0.0 || u > spec.dims[a] - 1) return false;
  }
  return true;
}

// |χ0| at the grid sample nearest to η.
double nearest_magnitude(const PhaseGrid& chi, const Eigen::VectorXd& eta) {
  const auto& spec = chi.spec();
  std::vector<int> idx(spec.rank());
  for (int a = 0; a < spec.rank(); ++a) {
    const double u = (eta[a] - spec.origin[a]) / spec.spacing[a] + spec.dims[a] / 2;
    idx[a] = std::clamp(static_cast<int>(std::lround(u)), 0, spec.dims[a] - 1);
  }
  return std::abs(chi[chi.flat_of(idx)]);
}

}  // namespace

Eigen::MatrixXd propagation_matrix(const OpenSystem& system, double t) {
  if (!std::isfinite(t)) throw ConfigError("propagation_matrix: t must be finite");
  return expm(t * generator(system));
}

Eigen::MatrixXd decoherence_matrix(const OpenSystem& system, double t, FlowDirection direction) {
  check_time(t, "decoherence_matrix");
  const Eigen::MatrixXd a = generator(system);
  const int n2 = 2 * system.dof();
  if (t == 0.0) return Eigen::MatrixXd::Zero(n2, n2);
  const Eigen::MatrixXd& lambda = system.environment_matrix();
  Eigen::MatrixXd m = integrate(a, t, direction == FlowDirection::forward ? 1.0 : -1.0,
                                [&](const Eigen::MatrixXd& g) { return Eigen::MatrixXd(g.transpose() * lambda * g); });
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd backward_flow_integral(const OpenSystem& system, double t) {
  check_time(t, "backward_flow_integral");
  const int n2 = 2 * system.dof();
  if (t == 0.0) return Eigen::MatrixXd::Zero(n2, n2);
  return integrate(generator(system), t, -1.0, [](const Eigen::MatrixXd& g) { return g; });
}

GaussianKernel gaussian_kernel(const OpenSystem& system, double t) {
  return GaussianKernel{propagation_matrix(system, t), decoherence_matrix(system, t, FlowDirection::backward), t};
}

PhaseGrid evolve_chord_exact(const OpenSystem& system, const PhaseGrid& chi0, double t, const ExactOptions& options) {
  if (chi0.tag() != SpaceTag::chord) throw ConfigError("evolve_chord_exact: input is not a chord grid");
  if (chi0.dof() != system.dof()) throw DimensionError("evolve_chord_exact: grid and system dof differ");
  if (std::abs(chi0.hbar() - system.hbar()) > 1e-12 * system.hbar())
    throw ConfigError("evolve_chord_exact: grid and system hbar differ");
  check_time(t, "evolve_chord_exact");
  if (t == 0.0) return chi0;

  const auto& spec = chi0.spec();
  const int rank = spec.rank();
  const double hbar = system.hbar();
  const Eigen::MatrixXd g_back = propagation_matrix(system, -t);
  const Eigen::MatrixXd m_back = decoherence_matrix(system, t, FlowDirection::backward);
  const Eigen::VectorXd b = system.hamiltonian().linear_coefficients();
  const Eigen::RowVectorXd bk = b.transpose() * backward_flow_integral(system, t);

  const std::size_t size = chi0.size();
  Eigen::MatrixXd etas(rank, static_cast<Eigen::Index>(size));
  for (std::size_t f = 0; f < size; ++f) etas.col(static_cast<Eigen::Index>(f)) = g_back * chi0.point(f).vec();

  // Back-flowed chords that leave the grid: allowed only where χ0 is negligible.
  std::vector<char> outside(size, 0);
  for (std::size_t f = 0; f < size; ++f) {
    const Eigen::VectorXd eta = etas.col(static_cast<Eigen::Index>(f));
    if (inside(spec, eta)) continue;
    const double mag = nearest_magnitude(chi0, eta);
    if (mag > kOutsideTolerance) {
      std::ostringstream msg;
      msg << "evolve_chord_exact: back-flowed chord leaves the grid where |chi0| = " << mag
          << " > " << kOutsideTolerance << "; enlarge the grid";
      throw AccuracyError(msg.str());
    }
    outside[f] = 1;
  }

  std::vector<cplx> values;
  if (options.interpolation == Interpolation::spectral) {
    values = chord_samples(chord_to_wigner(chi0), etas);
  } else {
    values.resize(size);
    for (std::size_t f = 0; f < size; ++f) {
      if (outside[f]) continue;
      values[f] = *multilinear(chi0, etas.col(static_cast<Eigen::Index>(f)));
    }
  }

  PhaseGrid out(spec);
  for (std::size_t f = 0; f < size; ++f) {
    if (outside[f]) continue;
    const Eigen::VectorXd xi = out.point(f).vec();
    const double decay = -0.5 * xi.dot(m_back * xi) / hbar;
    const double phase = -bk.dot(xi) / hbar;
    out[f] = values[f] * std::exp(cplx{decay, phase});
  }
  // ξ = 0 is a fixed point of the back-flow; keep the normalization bit-exact.
  out[out.origin_flat()] = chi0[chi0.origin_flat()];
  return out;
}

PhaseGrid evolve_wigner_exact(const OpenSystem& system, const PhaseGrid& w0, double t, const ExactOptions& options) {
  if (w0.tag() != SpaceTag::centre) throw ConfigError("evolve_wigner_exact: input is not a centre grid");
  if (t == 0.0) return w0;
  return real_part(chord_to_wigner(evolve_chord_exact(system, wigner_to_chord(w0), t, options)));
}

}  // namespace chordsim
