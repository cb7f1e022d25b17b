#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "chordsim/phase_grid.hpp"

namespace testing {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Fixed-seed generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Eigen::VectorXd vector(int n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  chordsim::PhaseVector phase_vector(int dof, double scale = 1.0) { return chordsim::PhaseVector(vector(2 * dof, scale)); }
  Eigen::MatrixXd matrix(int n, double scale = 1.0) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = scale * normal();
    return m;
  }
  Eigen::MatrixXd symmetric(int n, double scale = 1.0) {
    Eigen::MatrixXd m = matrix(n, scale);
    return 0.5 * (m + m.transpose());
  }
  Eigen::MatrixXd psd(int n, double scale = 1.0) {
    Eigen::MatrixXd m = matrix(n, scale);
    return m * m.transpose();
  }

 private:
  std::mt19937_64 rng_;
};

inline double wedge(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = a.size() / 2;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += a[i] * b[n + i] - a[n + i] * b[i];
  return s;
}

inline Eigen::MatrixXd j_matrix(int dof) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * dof, 2 * dof);
  for (int i = 0; i < dof; ++i) {
    j(i, dof + i) = -1.0;
    j(dof + i, i) = 1.0;
  }
  return j;
}

// Coherent-state Wigner function centred at x0.
inline double coherent_w(const Eigen::VectorXd& x, const Eigen::VectorXd& x0, double hbar) {
  const double n = x.size() / 2;
  return std::pow(kPi * hbar, -n) * std::exp(-(x - x0).squaredNorm() / hbar);
}

// Its chord function.
inline cplx coherent_chi(const Eigen::VectorXd& xi, const Eigen::VectorXd& x0, double hbar) {
  const double n = xi.size() / 2;
  return std::pow(2.0 * kPi * hbar, -n) * std::exp(cplx{-xi.squaredNorm() / (4.0 * hbar), wedge(x0, xi) / hbar});
}

template <class F>
chordsim::PhaseGrid sample(const chordsim::GridSpec& spec, F&& f) {
  chordsim::PhaseGrid g(spec);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f(g.point(i).vec());
  return g;
}

// exp(a) by scaling and squaring of a Taylor series; independent of the
// library's matrix exponential.
inline Eigen::MatrixXd expm_series(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.1) ++squarings;
  const Eigen::MatrixXd s = a / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * s / k;
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// Classical RK4 for ẋ = f(x), with `steps` equal steps over [0, t].
template <class F>
Eigen::VectorXd rk4(F&& f, Eigen::VectorXd x, double t, int steps) {
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace testing
