#include "chordsim/flows.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/linalg.hpp"

namespace chordsim {
namespace {

int step_count(double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator step dt must be positive");
  if (!std::isfinite(t)) throw ConfigError("integration time must be finite");
  return std::max(1, static_cast<int>(std::ceil(std::abs(t) / dt - 1e-9)));
}

void centre_rhs(const OpenSystem& sys, const SmallMat& j, const SmallVec& x, SmallVec& grad, SmallVec& out) {
  sys.hamiltonian().gradient(x, grad);
  out.noalias() = j * grad;
  out -= sys.gamma() * x;
}

[[noreturn]] void diverged(const char* what, double t) {
  std::ostringstream msg;
  msg << what << ": non-finite state at t = " << t;
  throw DivergenceError(msg.str());
}

}  // namespace

DoublePhasePoint DoublePhasePoint::from_chord(PhaseVector centre, const PhaseVector& chord) {
  return DoublePhasePoint{std::move(centre), j_apply(chord)};
}

PhaseVector DoublePhasePoint::chord() const { return -j_apply(y); }
PhaseVector DoublePhasePoint::plus() const { return x - 0.5 * j_apply(y); }
PhaseVector DoublePhasePoint::minus() const { return x + 0.5 * j_apply(y); }

Trajectory centre_flow(const OpenSystem& system, const PhaseVector& x0, double t, double dt) {
  if (x0.dof() != system.dof()) throw DimensionError("centre_flow: x0 has wrong dimension");
  const int steps = t == 0.0 ? 0 : step_count(t, dt);
  const double h = steps == 0 ? 0.0 : t / steps;
  const SmallMat j = small_j(system.dof());

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.points.reserve(steps + 1);
  SmallVec x = x0.vec();
  SmallVec g, k1, k2, k3, k4, tmp;
  traj.times.push_back(0.0);
  traj.points.push_back(x0);
  for (int n = 0; n < steps; ++n) {
    centre_rhs(system, j, x, g, k1);
    tmp = x + 0.5 * h * k1;
    centre_rhs(system, j, tmp, g, k2);
    tmp = x + 0.5 * h * k2;
    centre_rhs(system, j, tmp, g, k3);
    tmp = x + h * k3;
    centre_rhs(system, j, tmp, g, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = (n + 1) * h;
    if (!x.allFinite()) diverged("centre_flow", tn);
    traj.times.push_back(tn);
    traj.points.emplace_back(Eigen::VectorXd(x));
  }
  return traj;
}

PhaseVector centre_flow_endpoint(const OpenSystem& system, const PhaseVector& x0, double t, double dt) {
  return centre_flow(system, x0, t, dt).points.back();
}

PhaseVector chord_flow_quadratic(const OpenSystem& system, const PhaseVector& xi0, double t) {
  const auto& b = system.hamiltonian().quadratic_matrix();
  if (xi0.dof() != system.dof()) throw DimensionError("chord_flow_quadratic: chord has wrong dimension");
  const int n2 = 2 * system.dof();
  const Eigen::MatrixXd gen = symplectic_j(system.dof()) * b + system.gamma() * Eigen::MatrixXd::Identity(n2, n2);
  return PhaseVector(Eigen::VectorXd(expm(t * gen) * xi0.vec()));
}

double double_hamiltonian(const OpenSystem& system, const DoublePhasePoint& X) {
  const auto& h = system.hamiltonian();
  return h.value(X.plus()) - h.value(X.minus()) - system.gamma() * X.x.vec().dot(X.y.vec());
}

DoubleTrajectory double_flow(const OpenSystem& system, const DoublePhasePoint& X0, double t, double dt) {
  const int n = system.dof();
  if (X0.x.dof() != n || X0.y.dof() != n) throw DimensionError("double_flow: point has wrong dimension");
  const int steps = t == 0.0 ? 0 : step_count(t, dt);
  const double h = steps == 0 ? 0.0 : t / steps;
  const SmallMat j = small_j(n);
  const double gamma = system.gamma();
  const auto& ham = system.hamiltonian();

  // State z = (x, y) of length 4N.
  auto rhs = [&](const SmallVec& x, const SmallVec& y, SmallVec& dx, SmallVec& dy) {
    SmallVec jy = j * y;
    SmallVec xp = x - 0.5 * jy;
    SmallVec xm = x + 0.5 * jy;
    SmallVec gp, gm;
    ham.gradient(xp, gp);
    ham.gradient(xm, gm);
    dx.noalias() = 0.5 * (j * (gp + gm));
    dx -= gamma * x;
    dy = gm - gp + gamma * y;
  };

  DoubleTrajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(X0);
  SmallVec x = X0.x.vec(), y = X0.y.vec();
  SmallVec k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
  for (int s = 0; s < steps; ++s) {
    rhs(x, y, k1x, k1y);
    rhs(x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
    rhs(x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
    rhs(x + h * k3x, y + h * k3y, k4x, k4y);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    const double ts = (s + 1) * h;
    if (!x.allFinite() || !y.allFinite()) diverged("double_flow", ts);
    traj.times.push_back(ts);
    traj.points.push_back(DoublePhasePoint{PhaseVector(Eigen::VectorXd(x)), PhaseVector(Eigen::VectorXd(y))});
  }
  return traj;
}

std::vector<double> decoherence_functional(const OpenSystem& system, const DoubleTrajectory& trajectory) {
  if (trajectory.times.size() != trajectory.points.size())
    throw DimensionError("decoherence_functional: times and points differ in length");
  auto integrand = [&](const DoublePhasePoint& X) {
    const PhaseVector xi = X.chord();
    double s = 0.0;
    for (const auto& c : system.channels()) {
      const double a = c.lp.vec().dot(xi.vec());
      const double b = c.lpp.vec().dot(xi.vec());
      s += a * a + b * b;
    }
    return s;
  };
  std::vector<double> d(trajectory.times.size(), 0.0);
  if (d.empty()) return d;
  double prev = integrand(trajectory.points[0]);
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double cur = integrand(trajectory.points[i]);
    const double dt = trajectory.times[i] - trajectory.times[i - 1];
    d[i] = d[i - 1] + 0.5 * std::abs(dt) * (prev + cur);
    prev = cur;
  }
  return d;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const int n = trajectory.points.empty() ? 1 : trajectory.points.front().dof();
  out << 't';
  for (int i = 0; i < n; ++i) out << ",p" << i + 1;
  for (int i = 0; i < n; ++i) out << ",q" << i + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    out << trajectory.times[k];
    for (int a = 0; a < 2 * n; ++a) out << ',' << trajectory.points[k][a];
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const DoubleTrajectory& trajectory) {
  const int n = trajectory.points.empty() ? 1 : trajectory.points.front().x.dof();
  out << 't';
  for (int i = 0; i < n; ++i) out << ",p" << i + 1;
  for (int i = 0; i < n; ++i) out << ",q" << i + 1;
  for (int i = 0; i < n; ++i) out << ",y_p" << i + 1;
  for (int i = 0; i < n; ++i) out << ",y_q" << i + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    out << trajectory.times[k];
    for (int a = 0; a < 2 * n; ++a) out << ',' << trajectory.points[k].x[a];
    for (int a = 0; a < 2 * n; ++a) out << ',' << trajectory.points[k].y[a];
    out << '\n';
  }
}

}  // namespace chordsim
