#include "chordsim/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "chordsim/errors.hpp"

namespace chordsim {
namespace {

std::complex<double> coherent_amplitude(const PhaseVector& x, int mode, double hbar) {
  return {x.q(mode) / std::sqrt(2.0 * hbar), x.p(mode) / std::sqrt(2.0 * hbar)};
}

// ⟨x1|x2⟩ for multimode coherent states.
std::complex<double> coherent_overlap(const PhaseVector& x1, const PhaseVector& x2, double hbar) {
  std::complex<double> log_overlap{0.0, 0.0};
  for (int m = 0; m < x1.dof(); ++m) {
    const auto a = coherent_amplitude(x1, m, hbar);
    const auto b = coherent_amplitude(x2, m, hbar);
    log_overlap += -0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b;
  }
  return std::exp(log_overlap);
}

}  // namespace

const char* to_string(StateSpec::Kind kind) {
  switch (kind) {
    case StateSpec::Kind::coherent: return "coherent";
    case StateSpec::Kind::cat: return "cat";
    case StateSpec::Kind::fock: return "fock";
  }
  return "?";
}

StateSpec StateSpec::coherent(PhaseVector centre) {
  StateSpec s;
  s.kind = Kind::coherent;
  s.centres = {std::move(centre)};
  return s;
}

StateSpec StateSpec::cat(PhaseVector first, PhaseVector second, double phase) {
  StateSpec s;
  s.kind = Kind::cat;
  s.centres = {std::move(first), std::move(second)};
  s.phase = phase;
  return s;
}

StateSpec StateSpec::fock(int n) {
  StateSpec s;
  s.kind = Kind::fock;
  s.fock_index = n;
  return s;
}

int StateSpec::dof() const { return kind == Kind::fock ? 1 : centres.front().dof(); }

void StateSpec::validate() const {
  switch (kind) {
    case Kind::coherent:
      if (centres.size() != 1) throw ConfigError("coherent state needs exactly one centre");
      if (!centres[0].is_finite()) throw ConfigError("coherent state centre is not finite");
      break;
    case Kind::cat:
      if (centres.size() != 2) throw ConfigError("cat state needs exactly two centres");
      if (centres[0].size() != centres[1].size())
        throw ConfigError("cat state centres have different dimensions");
      if (centres[0] == centres[1]) throw ConfigError("cat state centres must be distinct");
      if (!centres[0].is_finite() || !centres[1].is_finite() || !std::isfinite(phase))
        throw ConfigError("cat state parameters are not finite");
      break;
    case Kind::fock:
      if (fock_index < 0) throw ConfigError("Fock index must be >= 0");
      break;
  }
}

PhaseVector StateSpec::centroid(double hbar) const {
  validate();
  switch (kind) {
    case Kind::coherent: return centres[0];
    case Kind::fock: return PhaseVector(1);
    case Kind::cat: break;
  }
  const auto& x1 = centres[0];
  const auto& x2 = centres[1];
  const auto overlap = coherent_overlap(x1, x2, hbar);
  const auto e = std::polar(1.0, phase);
  const double norm2 = 1.0 / (2.0 + 2.0 * std::real(e * overlap));
  const double s = std::sqrt(hbar / 2.0);
  PhaseVector mean = x1 + x2;
  for (int m = 0; m < x1.dof(); ++m) {
    const auto a1 = coherent_amplitude(x1, m, hbar);
    const auto a2 = coherent_amplitude(x2, m, hbar);
    // ⟨x1| q̂ |x2⟩ and ⟨x1| p̂ |x2⟩.
    const auto q12 = s * (a2 + std::conj(a1)) * overlap;
    const auto p12 = std::complex<double>(0.0, -1.0) * s * (a2 - std::conj(a1)) * overlap;
    mean.q(m) += 2.0 * std::real(e * q12);
    mean.p(m) += 2.0 * std::real(e * p12);
  }
  return norm2 * mean;
}

PhaseGrid build_state(const StateSpec& state, const GridSpec& grid) {
  state.validate();
  grid.validate();
  if (grid.tag != SpaceTag::centre) throw ConfigError("build_state: grid must be a centre grid");
  if (state.dof() != grid.dof()) throw DimensionError("build_state: state and grid dimensions differ");
  if (state.kind == StateSpec::Kind::fock && grid.dof() != 1)
    throw ConfigError("build_state: Fock states are single-mode");

  const double hbar = grid.hbar;
  const int n = grid.dof();
  const double peak = std::pow(std::numbers::pi * hbar, -n);
  PhaseGrid out(grid);

  std::complex<double> cross_weight{0.0, 0.0};
  double norm2 = 1.0;
  PhaseVector mid, delta;
  double const_phase = 0.0;
  if (state.kind == StateSpec::Kind::cat) {
    const auto& x1 = state.centres[0];
    const auto& x2 = state.centres[1];
    const auto overlap = coherent_overlap(x1, x2, hbar);
    const auto e = std::polar(1.0, state.phase);
    norm2 = 1.0 / (2.0 + 2.0 * std::real(e * overlap));
    cross_weight = std::polar(1.0, -state.phase);
    mid = 0.5 * (x1 + x2);
    delta = x2 - x1;
    const_phase = 0.5 * skew_product(x2, x1);
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    const PhaseVector x = out.point(i);
    double w = 0.0;
    switch (state.kind) {
      case StateSpec::Kind::coherent: {
        const double r2 = (x - state.centres[0]).vec().squaredNorm();
        w = peak * std::exp(-r2 / hbar);
        break;
      }
      case StateSpec::Kind::fock: {
        const double r2 = x.vec().squaredNorm();
        const double sign = state.fock_index % 2 == 0 ? 1.0 : -1.0;
        w = sign * peak * std::laguerre(static_cast<unsigned>(state.fock_index), 2.0 * r2 / hbar) *
            std::exp(-r2 / hbar);
        break;
      }
      case StateSpec::Kind::cat: {
        const double r1 = (x - state.centres[0]).vec().squaredNorm();
        const double r2 = (x - state.centres[1]).vec().squaredNorm();
        const double rm = (x - mid).vec().squaredNorm();
        const double phi = skew_product(x, delta) + const_phase;
        const auto w12 = peak * std::exp(-rm / hbar) * std::polar(1.0, phi / hbar);
        w = norm2 * (peak * std::exp(-r1 / hbar) + peak * std::exp(-r2 / hbar) +
                     2.0 * std::real(cross_weight * w12));
        break;
      }
    }
    out[i] = w;
  }

  const double edge = boundary_fraction(out);
  if (edge > kBoundaryTolerance) {
    std::ostringstream msg;
    msg << "build_state: grid too small, boundary carries fraction " << edge
        << " of the state (threshold " << kBoundaryTolerance << ")";
    throw AccuracyError(msg.str());
  }
  const double mass = quadrature(out).real();
  for (auto& v : out.samples()) v /= mass;
  return out;
}

double purity(const PhaseGrid& state) {
  double s = 0.0;
  for (const auto& v : state.samples()) s += std::norm(v);
  return s * state.spec().cell_volume() * std::pow(2.0 * std::numbers::pi * state.hbar(), state.dof());
}

}  // namespace chordsim
