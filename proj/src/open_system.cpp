#include "chordsim/open_system.hpp"

#include <cmath>

#include "chordsim/errors.hpp"

namespace chordsim {

LindbladChannel LindbladChannel::annihilation(double strength, int mode, int dof) {
  if (!(strength >= 0.0)) throw ConfigError("channel strength must be >= 0");
  LindbladChannel c{PhaseVector(dof), PhaseVector(dof)};
  const double s = std::sqrt(strength / 2.0);
  c.lp.q(mode) = s;
  c.lpp.p(mode) = s;
  return c;
}

LindbladChannel LindbladChannel::creation(double strength, int mode, int dof) {
  auto c = annihilation(strength, mode, dof);
  c.lpp *= -1.0;
  return c;
}

LindbladChannel LindbladChannel::hermitian(PhaseVector l) {
  const int n = l.dof();
  return LindbladChannel{std::move(l), PhaseVector(n)};
}

void LindbladChannel::validate() const {
  if (lp.size() != lpp.size() || lp.size() == 0) throw DimensionError("LindbladChannel: l′ and l″ differ in size");
  if (!lp.is_finite() || !lpp.is_finite()) throw ConfigError("LindbladChannel: non-finite coefficients");
  if (lp.norm() == 0.0 && lpp.norm() == 0.0) throw ConfigError("LindbladChannel: l′ and l″ are both zero");
}

double dissipation_coefficient(std::span<const LindbladChannel> channels) {
  double gamma = 0.0;
  for (const auto& c : channels) gamma += skew_product(c.lpp, c.lp);
  return gamma;
}

OpenSystem::OpenSystem(SmoothHamiltonian hamiltonian, std::vector<LindbladChannel> channels, double hbar)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)), hbar_(hbar) {
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ConfigError("OpenSystem: hbar must be positive");
  const int n = hamiltonian_.dof();
  lambda_ = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (const auto& c : channels_) {
    c.validate();
    if (c.dof() != n) throw DimensionError("OpenSystem: channel dimension differs from Hamiltonian");
    lambda_ += c.lp.vec() * c.lp.vec().transpose() + c.lpp.vec() * c.lpp.vec().transpose();
  }
  gamma_ = dissipation_coefficient(channels_);
}

std::vector<LindbladChannel> OpenSystem::thermal_channels(double rate_a, double nu, int mode, int dof) {
  if (!(rate_a >= 0.0) || !(nu >= 0.0)) throw ConfigError("thermal bath: need A >= 0 and nu >= 0");
  std::vector<LindbladChannel> out;
  if (rate_a * (nu + 1.0) > 0.0) out.push_back(LindbladChannel::annihilation(rate_a * (nu + 1.0), mode, dof));
  if (rate_a * nu > 0.0) out.push_back(LindbladChannel::creation(rate_a * nu, mode, dof));
  return out;
}

}  // namespace chordsim
