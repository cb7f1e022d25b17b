#include "chordsim/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "chordsim/errors.hpp"

namespace chordsim {

const char* to_string(SmoothHamiltonian::Kind kind) {
  switch (kind) {
    case SmoothHamiltonian::Kind::quadratic: return "quadratic";
    case SmoothHamiltonian::Kind::quartic: return "quartic";
    case SmoothHamiltonian::Kind::pendulum: return "pendulum";
  }
  return "?";
}

SmoothHamiltonian SmoothHamiltonian::quadratic(Eigen::MatrixXd b_matrix, Eigen::VectorXd linear) {
  if (b_matrix.rows() != b_matrix.cols() || b_matrix.rows() < 2 || b_matrix.rows() % 2 != 0)
    throw DimensionError("quadratic Hamiltonian: B must be square with even size >= 2");
  if (b_matrix.rows() > kMaxRank) throw DimensionError("quadratic Hamiltonian: at most 4 degrees of freedom");
  if (linear.size() != b_matrix.rows()) throw DimensionError("quadratic Hamiltonian: b has wrong length");
  if (!b_matrix.allFinite() || !linear.allFinite())
    throw ConfigError("quadratic Hamiltonian: non-finite coefficients");
  if ((b_matrix - b_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + b_matrix.cwiseAbs().maxCoeff()))
    throw ConfigError("quadratic Hamiltonian: B must be symmetric");
  SmoothHamiltonian h(Kind::quadratic, static_cast<int>(b_matrix.rows() / 2));
  h.b_matrix_ = 0.5 * (b_matrix + b_matrix.transpose());
  h.linear_ = std::move(linear);
  return h;
}

SmoothHamiltonian SmoothHamiltonian::quadratic(Eigen::MatrixXd b_matrix) {
  const auto n = b_matrix.rows();
  return quadratic(std::move(b_matrix), Eigen::VectorXd::Zero(n));
}

SmoothHamiltonian SmoothHamiltonian::harmonic(int dof, double omega) {
  return quadratic(omega * Eigen::MatrixXd::Identity(2 * dof, 2 * dof));
}

SmoothHamiltonian SmoothHamiltonian::zero(int dof) {
  return quadratic(Eigen::MatrixXd::Zero(2 * dof, 2 * dof));
}

SmoothHamiltonian SmoothHamiltonian::quartic(double kappa) {
  if (!std::isfinite(kappa)) throw ConfigError("quartic Hamiltonian: kappa must be finite");
  SmoothHamiltonian h(Kind::quartic, 1);
  h.kappa_ = kappa;
  return h;
}

SmoothHamiltonian SmoothHamiltonian::pendulum() { return SmoothHamiltonian(Kind::pendulum, 1); }

const Eigen::MatrixXd& SmoothHamiltonian::quadratic_matrix() const {
  if (!is_quadratic()) throw ConfigError(std::string("Hamiltonian is not quadratic (kind ") + to_string(kind_) + ")");
  return b_matrix_;
}

const Eigen::VectorXd& SmoothHamiltonian::linear_coefficients() const {
  if (!is_quadratic()) throw ConfigError(std::string("Hamiltonian is not quadratic (kind ") + to_string(kind_) + ")");
  return linear_;
}

void SmoothHamiltonian::check_dim(Eigen::Index n) const {
  if (n != 2 * dof_) throw DimensionError("Hamiltonian: phase vector has wrong dimension");
}

double SmoothHamiltonian::value(const SmallVec& x) const {
  switch (kind_) {
    case Kind::quadratic: return 0.5 * x.dot(b_matrix_ * x) + linear_.dot(x);
    case Kind::quartic: {
      const double p = x[0], q = x[1];
      return 0.5 * p * p + 0.25 * q * q * q * q + kappa_ * q * q;
    }
    case Kind::pendulum: return 0.5 * x[0] * x[0] - std::cos(x[1]);
  }
  return 0.0;
}

void SmoothHamiltonian::gradient(const SmallVec& x, SmallVec& out) const {
  switch (kind_) {
    case Kind::quadratic:
      out.noalias() = b_matrix_ * x;
      out += linear_;
      return;
    case Kind::quartic:
      out.resize(2);
      out[0] = x[0];
      out[1] = x[1] * x[1] * x[1] + 2.0 * kappa_ * x[1];
      return;
    case Kind::pendulum:
      out.resize(2);
      out[0] = x[0];
      out[1] = std::sin(x[1]);
      return;
  }
}

void SmoothHamiltonian::hessian(const SmallVec& x, SmallMat& out) const {
  switch (kind_) {
    case Kind::quadratic: out = b_matrix_; return;
    case Kind::quartic:
      out.setZero(2, 2);
      out(0, 0) = 1.0;
      out(1, 1) = 3.0 * x[1] * x[1] + 2.0 * kappa_;
      return;
    case Kind::pendulum:
      out.setZero(2, 2);
      out(0, 0) = 1.0;
      out(1, 1) = std::cos(x[1]);
      return;
  }
}

double SmoothHamiltonian::value(const PhaseVector& x) const {
  check_dim(x.size());
  return value(SmallVec(x.vec()));
}

PhaseVector SmoothHamiltonian::gradient(const PhaseVector& x) const {
  check_dim(x.size());
  SmallVec g;
  gradient(SmallVec(x.vec()), g);
  return PhaseVector(Eigen::VectorXd(g));
}

Eigen::MatrixXd SmoothHamiltonian::hessian(const PhaseVector& x) const {
  check_dim(x.size());
  SmallMat h;
  hessian(SmallVec(x.vec()), h);
  return Eigen::MatrixXd(h);
}

std::string SmoothHamiltonian::describe() const {
  std::ostringstream s;
  switch (kind_) {
    case Kind::quadratic: s << "quadratic (N=" << dof_ << ", B=" << b_matrix_.format(Eigen::IOFormat(6, 0, ",", ";", "", "", "[", "]")) << ")"; break;
    case Kind::quartic: s << "quartic p^2/2 + q^4/4 + " << kappa_ << " q^2"; break;
    case Kind::pendulum: s << "pendulum p^2/2 - cos q"; break;
  }
  return s.str();
}

}  // namespace chordsim
