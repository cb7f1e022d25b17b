#include <doctest.h>

#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/flows.hpp"
#include "support.hpp"

using namespace chordsim;
using testing::Gen;

namespace {

OpenSystem harmonic(double gamma_strength = 0.0) {
  std::vector<LindbladChannel> ch;
  if (gamma_strength > 0.0) ch.push_back(LindbladChannel::annihilation(gamma_strength));
  return OpenSystem(SmoothHamiltonian::harmonic(), ch);
}

OpenSystem free_particle(std::vector<LindbladChannel> ch = {}) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(0, 0) = 1.0;
  return OpenSystem(SmoothHamiltonian::quadratic(b), std::move(ch));
}

SmoothHamiltonian random_quadratic(Gen& gen, int dof) {
  return SmoothHamiltonian::quadratic(gen.symmetric(2 * dof), gen.vector(2 * dof, 0.3));
}

}  // namespace

TEST_CASE("dissipation coefficient examples") {
  const double s = std::sqrt(0.5);
  const LindbladChannel a{PhaseVector::pq(0, s), PhaseVector::pq(s, 0)};
  CHECK(dissipation_coefficient(std::vector{a}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dissipation_coefficient(std::vector{LindbladChannel::annihilation(1.0)}) == doctest::Approx(0.5));
  CHECK(dissipation_coefficient(std::vector{LindbladChannel::hermitian(PhaseVector::pq(0.3, 1.2))}) == 0.0);
  CHECK(dissipation_coefficient(std::vector{LindbladChannel::annihilation(0.2)}) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(dissipation_coefficient(std::vector{LindbladChannel::creation(0.2)}) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(dissipation_coefficient(OpenSystem::thermal_channels(0.2, 1.5)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(dissipation_coefficient(std::vector<LindbladChannel>{}) == 0.0);
}

TEST_CASE("open system construction") {
  const OpenSystem sys = harmonic(0.2);
  CHECK(sys.gamma() == doctest::Approx(0.1));
  CHECK(sys.environment_matrix().isApprox(0.1 * Eigen::MatrixXd::Identity(2, 2)));
  CHECK(harmonic().unitary());
  CHECK_THROWS_AS(OpenSystem(SmoothHamiltonian::harmonic(2), {LindbladChannel::annihilation(1.0)}), DimensionError);
  CHECK_THROWS_AS(OpenSystem(SmoothHamiltonian::harmonic(), {}, 0.0), ConfigError);
  CHECK_THROWS_AS(OpenSystem(SmoothHamiltonian::harmonic(), {LindbladChannel::hermitian(PhaseVector::pq(0, 0))}),
                  ConfigError);
  CHECK_THROWS_AS(OpenSystem::thermal_channels(-1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(LindbladChannel::annihilation(-0.1), ConfigError);
}

TEST_CASE("hamiltonian derivatives against finite differences") {
  Gen gen(3);
  std::vector<SmoothHamiltonian> hs = {SmoothHamiltonian::quartic(0.0), SmoothHamiltonian::quartic(-0.7),
                                       SmoothHamiltonian::pendulum(), random_quadratic(gen, 1),
                                       random_quadratic(gen, 2)};
  for (const auto& h : hs) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = gen.phase_vector(h.dof(), 1.5);
      const double eps = 1e-5;
      const auto g = h.gradient(x);
      const auto hess = h.hessian(x);
      CHECK(hess.isApprox(hess.transpose()));
      for (int a = 0; a < x.size(); ++a) {
        auto xp = x, xm = x;
        xp[a] += eps;
        xm[a] -= eps;
        const double fd = (h.value(xp) - h.value(xm)) / (2 * eps);
        CHECK(g[a] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
        const Eigen::VectorXd dg = (h.gradient(xp).vec() - h.gradient(xm).vec()) / (2 * eps);
        CHECK((hess.col(a) - dg).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + dg.norm()));
      }
    }
  }
  CHECK_THROWS_AS(SmoothHamiltonian::quartic().quadratic_matrix(), ConfigError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(SmoothHamiltonian::quadratic(asym), ConfigError);
  CHECK_THROWS_AS(SmoothHamiltonian::harmonic().value(PhaseVector(2)), DimensionError);
}

TEST_CASE("centre flow examples") {
  // ṗ = −q, q̇ = p: a quarter turn takes (p, q) = (0, 2) to (−2, 0).
  const auto x = centre_flow_endpoint(harmonic(), PhaseVector::pq(0, 2), testing::kPi / 2);
  CHECK(std::abs(x.p(0) + 2.0) < 1e-8);
  CHECK(std::abs(x.q(0)) < 1e-8);

  const auto y = centre_flow_endpoint(OpenSystem(SmoothHamiltonian::quartic(0.3), {LindbladChannel::annihilation(0.2)}),
                                      PhaseVector::pq(0, 0), 5.0);
  CHECK(y.norm() == 0.0);

  const auto z = centre_flow_endpoint(harmonic(0.2), PhaseVector::pq(0, 2), testing::kPi);
  CHECK(std::abs(z.p(0)) < 1e-8);
  CHECK(std::abs(z.q(0) + 2.0 * std::exp(-0.1 * testing::kPi)) < 1e-8);
}

TEST_CASE("centre flow trajectory layout, backward flow and errors") {
  const auto sys = OpenSystem(SmoothHamiltonian::quartic(0.1), {LindbladChannel::annihilation(0.2)});
  const auto tr = centre_flow(sys, PhaseVector::pq(0.3, 1.0), 0.95, 0.1);
  REQUIRE(tr.times.size() == 11);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(tr.points.size() == tr.times.size());

  const auto x0 = PhaseVector::pq(0.4, -1.2);
  const auto fwd = centre_flow_endpoint(sys, x0, 1.5);
  const auto back = centre_flow_endpoint(sys, fwd, -1.5);
  CHECK((back - x0).norm() < 1e-10);

  CHECK_THROWS_AS(centre_flow(sys, x0, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(centre_flow(sys, x0, 1.0, -1e-3), ConfigError);
  CHECK_THROWS_AS(centre_flow(sys, PhaseVector(2), 1.0), DimensionError);

  Eigen::MatrixXd hyper(2, 2);
  hyper << 0, 1, 1, 0;
  const OpenSystem unstable(SmoothHamiltonian::quadratic(hyper), {});
  CHECK_THROWS_AS(centre_flow_endpoint(unstable, PhaseVector::pq(1, 1), 1000.0, 0.5), DivergenceError);
}

TEST_CASE("property: quadratic centre flow is the affine matrix flow") {
  Gen gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int dof = gen.integer(1, 2);
    const auto h = random_quadratic(gen, dof);
    const double strength = gen.uniform(0.0, 0.5);
    const OpenSystem sys(h, {LindbladChannel::annihilation(strength, 0, dof)});
    const Eigen::MatrixXd j = testing::j_matrix(dof);
    const Eigen::MatrixXd a = j * h.quadratic_matrix() - sys.gamma() * Eigen::MatrixXd::Identity(2 * dof, 2 * dof);
    const Eigen::VectorXd c = j * h.linear_coefficients();
    const auto x0 = gen.phase_vector(dof);
    const double t = gen.uniform(0.1, 2.0);
    // Augmented linear system for the affine drift.
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * dof + 1, 2 * dof + 1);
    aug.topLeftCorner(2 * dof, 2 * dof) = a * t;
    aug.topRightCorner(2 * dof, 1) = c * t;
    Eigen::VectorXd v(2 * dof + 1);
    v << x0.vec(), 1.0;
    const Eigen::VectorXd expected = (testing::expm_series(aug) * v).head(2 * dof);
    CHECK((centre_flow_endpoint(sys, x0, t).vec() - expected).norm() < 1e-9);
  }
}

TEST_CASE("property: linearized flow of a closed system is symplectic") {
  Gen gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int dof = gen.integer(1, 2);
    const OpenSystem sys(random_quadratic(gen, dof), {});
    const auto x0 = gen.phase_vector(dof);
    const double t = gen.uniform(0.5, 3.0);
    // Monodromy by central differences; exact for a linear flow.
    Eigen::MatrixXd m(2 * dof, 2 * dof);
    for (int a = 0; a < 2 * dof; ++a) {
      auto xp = x0, xm = x0;
      xp[a] += 1e-3;
      xm[a] -= 1e-3;
      m.col(a) = (centre_flow_endpoint(sys, xp, t).vec() - centre_flow_endpoint(sys, xm, t).vec()) / 2e-3;
    }
    const Eigen::MatrixXd j = testing::j_matrix(dof);
    CHECK((m.transpose() * j * m - j).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("chord flow examples") {
  const auto r = chord_flow_quadratic(harmonic(), PhaseVector::pq(1, 0), testing::kPi / 2);
  CHECK((r - PhaseVector::pq(0, 1)).norm() < 1e-12);

  // H = 0 with γ = 0.3: a single channel √0.6 â gives exactly that rate.
  const OpenSystem dil(SmoothHamiltonian::zero(), {LindbladChannel::annihilation(0.6)});
  const auto xi0 = PhaseVector::pq(0.4, -2.0);
  CHECK((chord_flow_quadratic(dil, xi0, 1.7) - std::exp(0.3 * 1.7) * xi0).norm() < 1e-12);

  Gen gen(31);
  const OpenSystem sys(random_quadratic(gen, 1), {LindbladChannel::annihilation(0.4)});
  CHECK(chord_flow_quadratic(sys, xi0, 0.0) == xi0);

  // Against an independent RK4 of ξ̇ = (JB + γ)ξ.
  const Eigen::MatrixXd gen_m = testing::j_matrix(1) * sys.hamiltonian().quadratic_matrix() +
                                sys.gamma() * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd ref = testing::rk4([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(gen_m * v); },
                                           xi0.vec(), 2.0, 4000);
  CHECK((chord_flow_quadratic(sys, xi0, 2.0).vec() - ref).norm() < 1e-10);

  CHECK_THROWS_AS(chord_flow_quadratic(OpenSystem(SmoothHamiltonian::pendulum(), {}), xi0, 1.0), ConfigError);
}

TEST_CASE("property: chord flow cocycle") {
  Gen gen(37);
  for (int trial = 0; trial < 20; ++trial) {
    const OpenSystem sys(random_quadratic(gen, 1), {LindbladChannel::annihilation(gen.uniform(0, 1))});
    const auto xi = gen.phase_vector(1);
    const double s = gen.uniform(-1, 1), t = gen.uniform(-1, 1);
    const auto a = chord_flow_quadratic(sys, chord_flow_quadratic(sys, xi, s), t);
    const auto b = chord_flow_quadratic(sys, xi, s + t);
    CHECK((a - b).norm() < 1e-11 * (1.0 + b.norm()));
  }
}

TEST_CASE("double phase point geometry") {
  Gen gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int dof = gen.integer(1, 3);
    const auto x = gen.phase_vector(dof), xi = gen.phase_vector(dof);
    const auto X = DoublePhasePoint::from_chord(x, xi);
    CHECK((X.chord() - xi).norm() < 1e-15);
    CHECK((X.y - j_apply(xi)).norm() < 1e-15);
    CHECK((X.plus() - (x + 0.5 * xi)).norm() < 1e-15);
    CHECK((X.minus() - (x - 0.5 * xi)).norm() < 1e-15);
  }
}

TEST_CASE("double flow on the centre subspace") {
  const auto sys = OpenSystem(SmoothHamiltonian::quartic(0.2), {LindbladChannel::annihilation(0.2)});
  const auto x0 = PhaseVector::pq(0.3, 1.1);
  const auto tr = double_flow(sys, DoublePhasePoint{x0, PhaseVector(1)}, 2.0);
  const auto cf = centre_flow(sys, x0, 2.0);
  REQUIRE(tr.points.size() == cf.points.size());
  double worst_y = 0.0, worst_x = 0.0;
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    worst_y = std::max(worst_y, tr.points[k].y.norm());
    worst_x = std::max(worst_x, (tr.points[k].x - cf.points[k]).norm());
  }
  CHECK(worst_y == 0.0);
  CHECK(worst_x < 1e-9);
}

TEST_CASE("closed quadratic double flow: tips follow the centre flow") {
  Gen gen(43);
  for (int trial = 0; trial < 10; ++trial) {
    const OpenSystem sys(random_quadratic(gen, 1), {});
    const auto X0 = DoublePhasePoint::from_chord(gen.phase_vector(1), gen.phase_vector(1));
    const double t = gen.uniform(0.2, 2.0);
    const auto end = double_flow(sys, X0, t).points.back();
    CHECK((end.plus() - centre_flow_endpoint(sys, X0.plus(), t)).norm() < 1e-9);
    CHECK((end.minus() - centre_flow_endpoint(sys, X0.minus(), t)).norm() < 1e-9);
  }
}

TEST_CASE("quartic double flow under step halving") {
  const auto sys = OpenSystem(SmoothHamiltonian::quartic(0.0), {LindbladChannel::annihilation(0.2)});
  const DoublePhasePoint X0{PhaseVector::pq(0, 1), PhaseVector::pq(0.1, 0)};
  const auto a = double_flow(sys, X0, 1.0, 1e-3).points.back();
  const auto b = double_flow(sys, X0, 1.0, 5e-4).points.back();
  CHECK(a.x.is_finite());
  CHECK(a.y.is_finite());
  CHECK((a.x - b.x).norm() + (a.y - b.y).norm() < 1e-6);
}

TEST_CASE("property: the double Hamiltonian is conserved") {
  Gen gen(47);
  std::vector<SmoothHamiltonian> hs = {SmoothHamiltonian::quartic(0.0), SmoothHamiltonian::pendulum(),
                                       SmoothHamiltonian::harmonic()};
  for (const auto& h : hs) {
    for (int trial = 0; trial < 3; ++trial) {
      const OpenSystem sys(h, {LindbladChannel::annihilation(gen.uniform(0.0, 0.4))});
      const DoublePhasePoint X0{gen.phase_vector(1), gen.phase_vector(1, 0.5)};
      const auto tr = double_flow(sys, X0, 10.0, 1e-3);
      const double e0 = double_hamiltonian(sys, tr.points.front());
      double drift = 0.0;
      for (const auto& X : tr.points) drift = std::max(drift, std::abs(double_hamiltonian(sys, X) - e0));
      CHECK(drift < 1e-7 * (1.0 + std::abs(e0)));
    }
  }
}

TEST_CASE("decoherence functional examples") {
  const auto sys = OpenSystem(SmoothHamiltonian::quartic(0.0), {LindbladChannel::annihilation(0.3)});
  const auto on_centre = double_flow(sys, DoublePhasePoint{PhaseVector::pq(0.5, 1), PhaseVector(1)}, 3.0);
  for (double d : decoherence_functional(sys, on_centre)) CHECK(d == 0.0);

  const auto l = PhaseVector::pq(0.6, -0.8);
  const OpenSystem still(SmoothHamiltonian::zero(), {LindbladChannel::hermitian(l)});
  const auto xi = PhaseVector::pq(1.5, 0.25);
  const auto tr = double_flow(still, DoublePhasePoint::from_chord(PhaseVector::pq(0.2, 0.1), xi), 4.0, 1e-2);
  const auto d = decoherence_functional(still, tr);
  const double rate = std::pow(l.vec().dot(xi.vec()), 2);
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(d[k] == doctest::Approx(rate * tr.times[k]).epsilon(1e-12));

  const auto free = free_particle({LindbladChannel::hermitian(PhaseVector::pq(1, 0))});
  const auto tr2 = double_flow(free, DoublePhasePoint::from_chord(PhaseVector::pq(0.7, -0.3), PhaseVector::pq(0, 0.8)), 10.0);
  const auto d2 = decoherence_functional(free, tr2);
  CHECK(*std::max_element(d2.begin(), d2.end()) <= 1e-12);
}

TEST_CASE("property: decoherence functional is non-decreasing") {
  Gen gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LindbladChannel> ch;
    for (int k = gen.integer(1, 3); k > 0; --k) ch.push_back({gen.phase_vector(1, 0.5), gen.phase_vector(1, 0.5)});
    const SmoothHamiltonian h = trial % 2 ? SmoothHamiltonian::quartic(gen.uniform(-0.5, 0.5)) : random_quadratic(gen, 1);
    const OpenSystem sys(h, ch);
    const auto tr = double_flow(sys, DoublePhasePoint{gen.phase_vector(1), gen.phase_vector(1)}, 1.0, 1e-2);
    const auto d = decoherence_functional(sys, tr);
    CHECK(d.front() == 0.0);
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] >= d[k - 1]);
  }
}

TEST_CASE("trajectory csv") {
  const auto tr = centre_flow(harmonic(), PhaseVector::pq(0, 1), 0.3, 0.1);
  std::stringstream ss;
  write_trajectory_csv(ss, tr);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "t,p1,q1");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  CHECK(rows == 4);

  const auto dt = double_flow(harmonic(), DoublePhasePoint{PhaseVector::pq(0, 1), PhaseVector::pq(0, 1)}, 0.2, 0.1);
  std::stringstream ss2;
  write_trajectory_csv(ss2, dt);
  std::getline(ss2, line);
  CHECK(line == "t,p1,q1,y_p1,y_q1");
}
