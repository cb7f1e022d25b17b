#include "chordsim/fock_oracle.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "chordsim/errors.hpp"
#include "chordsim/grid_io.hpp"
#include "chordsim/transform.hpp"

namespace chordsim {
namespace {

using SparseC = Eigen::SparseMatrix<cplx>;
constexpr cplx kI{0.0, 1.0};

void require_one_mode(const OpenSystem& system) {
  if (system.dof() != 1) throw ConfigError("fock oracle: only N = 1 is supported");
}

// Amplitudes of the coherent state at phase-space point x.
Eigen::VectorXcd coherent_vector(const PhaseVector& x, int dim, double hbar) {
  const cplx alpha{x.q(0) / std::sqrt(2.0 * hbar), x.p(0) / std::sqrt(2.0 * hbar)};
  Eigen::VectorXcd v(dim);
  v[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

// Row-sum norm, an upper bound for the spectral norm of a Hermitian matrix.
double row_norm(const Eigen::MatrixXcd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

class Liouvillian {
 public:
  Liouvillian(const FockModel& model) : hbar_(model.hbar) {
    h_ = model.hamiltonian.sparseView(0.0, 1e-300);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(model.hamiltonian.rows(), model.hamiltonian.cols());
    for (const auto& l : model.lindblad) {
      ls_.push_back(l.sparseView(0.0, 1e-300));
      lds_.push_back(l.adjoint().sparseView(0.0, 1e-300));
      sum += l.adjoint() * l;
    }
    half_ldl_ = (0.5 * sum).sparseView(0.0, 1e-300);
    radius_ = 2.0 * row_norm(model.hamiltonian) / hbar_ + 2.0 * row_norm(sum) / hbar_;
  }

  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    // −(i/ħ)(Hρ − ρH) − (1/ħ)(½L†L ρ + ρ ½L†L) + (1/ħ) Σ LρL†
    tmp_.noalias() = h_ * rho;
    out = (-kI / hbar_) * (tmp_ - tmp_.adjoint());
    if (ls_.empty()) return;
    tmp_.noalias() = half_ldl_ * rho;
    out -= (tmp_ + tmp_.adjoint()) / hbar_;
    for (std::size_t k = 0; k < ls_.size(); ++k) {
      tmp_.noalias() = ls_[k] * rho;
      tmp2_.noalias() = tmp_ * lds_[k];
      out += tmp2_ / hbar_;
    }
  }

  // Largest stable RK4 step, with a margin.
  double max_step() const { return radius_ > 0.0 ? 2.5 / radius_ : std::numeric_limits<double>::infinity(); }

 private:
  double hbar_;
  SparseC h_, half_ldl_;
  std::vector<SparseC> ls_, lds_;
  double radius_ = 0.0;
  mutable Eigen::MatrixXcd tmp_, tmp2_;
};

void check_guard(const Eigen::MatrixXcd& rho, const MasterOptions& o, double t) {
  const int d = static_cast<int>(rho.rows());
  const int levels = std::min(o.guard_levels, d);
  double pop = 0.0;
  for (int n = d - levels; n < d; ++n) pop += rho(n, n).real();
  if (pop >= o.guard_population || !rho.allFinite()) {
    std::ostringstream msg;
    msg << "fock oracle: truncation leak, top " << levels << " levels hold " << pop << " at t = " << t
        << " (limit " << o.guard_population << "); raise the truncation";
    throw AccuracyError(msg.str());
  }
}

// Normalized Hermite functions ψ_n(y) for n < dim at each y (row n, column j).
Eigen::MatrixXd hermite_functions(int dim, const Eigen::VectorXd& y, double hbar) {
  Eigen::MatrixXd psi(dim, y.size());
  const double c0 = std::pow(std::numbers::pi * hbar, -0.25);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double u = y[j] / std::sqrt(hbar);
    psi(0, j) = c0 * std::exp(-0.5 * u * u);
    if (dim > 1) psi(1, j) = std::sqrt(2.0) * u * psi(0, j);
    for (int n = 1; n + 1 < dim; ++n)
      psi(n + 1, j) = std::sqrt(2.0 / (n + 1)) * u * psi(n, j) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1, j);
  }
  return psi;
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, double hbar) : rho_(std::move(entries)), hbar_(hbar) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) throw DimensionError("DensityMatrix: need a square matrix, D >= 2");
  if (!(hbar > 0.0)) throw ConfigError("DensityMatrix: hbar must be positive");
  if (!rho_.allFinite()) throw ConfigError("DensityMatrix: non-finite entries");
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double DensityMatrix::top_population(int levels) const {
  double s = 0.0;
  for (int n = std::max(0, dim() - levels); n < dim(); ++n) s += rho_(n, n).real();
  return s;
}

PhaseVector DensityMatrix::mean() const {
  const auto ops = OperatorSet::build(dim(), hbar_);
  return PhaseVector::pq((ops.pop * rho_).trace().real(), (ops.qop * rho_).trace().real());
}

OperatorSet OperatorSet::build(int dim, double hbar) {
  if (dim < 2) throw ConfigError("OperatorSet: truncation must be >= 2");
  OperatorSet s;
  s.a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) s.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  s.adag = s.a.adjoint();
  const double c = std::sqrt(hbar / 2.0);
  s.qop = c * (s.a + s.adag);
  s.pop = -kI * c * (s.a - s.adag);
  return s;
}

DensityMatrix density_from_state(const StateSpec& state, int dim, double hbar) {
  state.validate();
  if (state.dof() != 1) throw ConfigError("density_from_state: only N = 1 is supported");
  if (dim < 2) throw ConfigError("density_from_state: truncation must be >= 2");
  Eigen::VectorXcd psi;
  switch (state.kind) {
    case StateSpec::Kind::coherent: psi = coherent_vector(state.centres[0], dim, hbar); break;
    case StateSpec::Kind::cat:
      psi = coherent_vector(state.centres[0], dim, hbar) +
            std::polar(1.0, state.phase) * coherent_vector(state.centres[1], dim, hbar);
      break;
    case StateSpec::Kind::fock:
      if (state.fock_index >= dim) throw ConfigError("density_from_state: Fock index must be below the truncation");
      psi = Eigen::VectorXcd::Zero(dim);
      psi[state.fock_index] = 1.0;
      break;
  }
  psi.normalize();
  return DensityMatrix(psi * psi.adjoint(), hbar);
}

FockModel FockModel::build(const OpenSystem& system, int dim) {
  require_one_mode(system);
  const double hbar = system.hbar();
  const auto& h = system.hamiltonian();
  const int ext = dim + 4;
  const auto big = OperatorSet::build(ext, hbar);
  Eigen::MatrixXcd hbig;
  switch (h.kind()) {
    case SmoothHamiltonian::Kind::quadratic: {
      const Eigen::MatrixXd& b = h.quadratic_matrix();
      const Eigen::VectorXd& lin = h.linear_coefficients();
      const Eigen::MatrixXcd* x[2] = {&big.pop, &big.qop};
      hbig = Eigen::MatrixXcd::Zero(ext, ext);
      for (int i = 0; i < 2; ++i) {
        hbig += lin[i] * *x[i];
        for (int j = 0; j < 2; ++j) hbig += 0.25 * b(i, j) * (*x[i] * *x[j] + *x[j] * *x[i]);
      }
      break;
    }
    case SmoothHamiltonian::Kind::quartic: {
      const Eigen::MatrixXcd q2 = big.qop * big.qop;
      hbig = 0.5 * big.pop * big.pop + 0.25 * q2 * q2 + h.kappa() * q2;
      break;
    }
    case SmoothHamiltonian::Kind::pendulum:
      throw ConfigError("fock oracle: the pendulum Hamiltonian is not a polynomial; no operator form");
  }
  FockModel m;
  m.hbar = hbar;
  m.hamiltonian = hbig.topLeftCorner(dim, dim);
  m.hamiltonian = 0.5 * (m.hamiltonian + m.hamiltonian.adjoint()).eval();
  const auto ops = OperatorSet::build(dim, hbar);
  for (const auto& c : system.channels()) {
    const cplx lp_p = c.lp.p(0), lp_q = c.lp.q(0);
    const cplx lpp_p = c.lpp.p(0), lpp_q = c.lpp.q(0);
    m.lindblad.push_back((lp_p + kI * lpp_p) * ops.pop + (lp_q + kI * lpp_q) * ops.qop);
  }
  return m;
}

DensityMatrix lindblad_rhs(const OpenSystem& system, const DensityMatrix& rho) {
  if (std::abs(system.hbar() - rho.hbar()) > 1e-12 * system.hbar())
    throw ConfigError("lindblad_rhs: system and state hbar differ");
  const FockModel model = FockModel::build(system, rho.dim());
  Liouvillian l(model);
  Eigen::MatrixXcd out;
  l.apply(rho.entries(), out);
  return DensityMatrix(std::move(out), rho.hbar());
}

std::vector<DensityMatrix> integrate_master(const OpenSystem& system, const DensityMatrix& rho0,
                                            std::span<const double> times, const MasterOptions& options) {
  if (std::abs(system.hbar() - rho0.hbar()) > 1e-12 * system.hbar())
    throw ConfigError("integrate_master: system and state hbar differ");
  if (!(options.dt > 0.0)) throw ConfigError("integrate_master: dt must be positive");
  const FockModel model = FockModel::build(system, rho0.dim());
  const Liouvillian liou(model);
  const double dt_max = std::min(options.dt, liou.max_step());

  std::vector<DensityMatrix> out;
  Eigen::MatrixXcd rho = rho0.entries();
  Eigen::MatrixXcd k1, k2, k3, k4, mid;
  double now = 0.0;
  check_guard(rho, options, now);
  for (double target : times) {
    if (!(target >= now) || !std::isfinite(target)) throw ConfigError("integrate_master: times must be increasing and >= 0");
    const double span = target - now;
    const int steps = span == 0.0 ? 0 : static_cast<int>(std::ceil(span / dt_max - 1e-9));
    const double h = steps == 0 ? 0.0 : span / steps;
    for (int s = 0; s < steps; ++s) {
      liou.apply(rho, k1);
      mid = rho + 0.5 * h * k1;
      liou.apply(mid, k2);
      mid = rho + 0.5 * h * k2;
      liou.apply(mid, k3);
      mid = rho + h * k3;
      liou.apply(mid, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = 0.5 * (rho + rho.adjoint()).eval();
      check_guard(rho, options, now + (s + 1) * h);
    }
    now = target;
    out.emplace_back(rho, rho0.hbar());
  }
  return out;
}

DensityMatrix integrate_master(const OpenSystem& system, const DensityMatrix& rho0, double t,
                               const MasterOptions& options) {
  const double times[] = {t};
  return integrate_master(system, rho0, times, options).front();
}

PhaseGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& grid, double boundary_tolerance) {
  grid.validate();
  if (grid.dof() != 1) throw ConfigError("wigner_from_density: only N = 1 is supported");
  if (grid.tag != SpaceTag::centre) throw ConfigError("wigner_from_density: target must be a centre grid");
  if (!grid.centred_on_origin()) throw ConfigError("wigner_from_density: grid must be centred on the origin");
  if (std::abs(grid.hbar - rho.hbar()) > 1e-12 * grid.hbar) throw ConfigError("wigner_from_density: hbar mismatch");
  const double hbar = rho.hbar();
  const int dim = rho.dim();
  const int np = grid.dims[0], nq = grid.dims[1];
  const double dq = grid.spacing[1];
  constexpr int kRefine = 4;
  const double delta = dq / kRefine;

  // Eigenvectors carrying weight.
  const Eigen::MatrixXcd herm = 0.5 * (rho.entries() + rho.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  std::vector<int> keep;
  for (int k = 0; k < dim; ++k)
    if (std::abs(eig.eigenvalues()[k]) > 1e-14) keep.push_back(k);

  // Fine y-lattice y_j = j δ covering the support of every basis function.
  const double support = std::sqrt(hbar * (2.0 * dim + 1.0)) + 6.0 * std::sqrt(hbar);
  const double reach = std::max(support, grid.half_width(1) + dq);
  const int jmax = static_cast<int>(std::ceil(reach / delta));
  Eigen::VectorXd y(2 * jmax + 1);
  for (int j = -jmax; j <= jmax; ++j) y[j + jmax] = j * delta;
  const Eigen::MatrixXd psi = hermite_functions(dim, y, hbar);
  // u_k(y_j), one row per kept eigenvector.
  Eigen::MatrixXcd u(keep.size(), y.size());
  Eigen::VectorXd lambda(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    u.row(k) = eig.eigenvectors().col(keep[k]).transpose() * psi;
    lambda[k] = eig.eigenvalues()[keep[k]];
  }

  // s = 2mδ for |m| ≤ mmax, limited by the support.
  const int mmax = static_cast<int>(std::ceil(2.0 * support / delta)) + 1;
  Eigen::MatrixXcd phase(np, 2 * mmax + 1);
  for (int ip = 0; ip < np; ++ip) {
    const double p = grid.coordinate(0, ip);
    for (int m = -mmax; m <= mmax; ++m) phase(ip, m + mmax) = std::polar(2.0 * delta, -p * 2.0 * m * delta / hbar);
  }

  std::vector<cplx> samples(grid.size());
  const double pref = 1.0 / (2.0 * std::numbers::pi * hbar);
  Eigen::VectorXcd c(2 * mmax + 1);
  for (int iq = 0; iq < nq; ++iq) {
    const int centre = (iq - nq / 2) * kRefine;  // q / δ
    for (int m = -mmax; m <= mmax; ++m) {
      const int jp = centre + m + jmax, jm = centre - m + jmax;
      if (jp < 0 || jm < 0 || jp >= y.size() || jm >= y.size()) {
        c[m + mmax] = 0.0;
        continue;
      }
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < keep.size(); ++k) s += lambda[k] * u(k, jp) * std::conj(u(k, jm));
      c[m + mmax] = s;
    }
    const Eigen::VectorXcd col = pref * (phase * c);
    for (int ip = 0; ip < np; ++ip) samples[static_cast<std::size_t>(ip) * nq + iq] = {col[ip].real(), 0.0};
  }
  PhaseGrid w(grid, std::move(samples));
  if (const double edge = boundary_fraction(w); edge > boundary_tolerance) {
    std::ostringstream msg;
    msg << "wigner_from_density: grid too small, boundary carries fraction " << edge;
    throw AccuracyError(msg.str());
  }
  return w;
}

PhaseGrid chord_from_density(const DensityMatrix& rho, const GridSpec& grid) {
  return wigner_to_chord(wigner_from_density(rho, grid));
}

cplx chord_direct(const DensityMatrix& rho, const PhaseVector& xi) {
  if (xi.dof() != 1) throw DimensionError("chord_direct: only N = 1 is supported");
  const double hbar = rho.hbar();
  const int dim = rho.dim();
  const int ext = dim + 40;
  const auto ops = OperatorSet::build(ext, hbar);
  const Eigen::MatrixXcd gen = (kI / hbar) * (xi.q(0) * ops.pop - xi.p(0) * ops.qop);
  const Eigen::MatrixXcd t = gen.exp().topLeftCorner(dim, dim);
  return (t * rho.entries()).trace() / (2.0 * std::numbers::pi * hbar);
}

void write_dm(std::ostream& out, const DensityMatrix& rho) {
  nlohmann::json h{{"format", "dm"}, {"version", 1}, {"dim", rho.dim()}, {"hbar", rho.hbar()}};
  out << h.dump() << '\n';
  for (int r = 0; r < rho.dim(); ++r)
    for (int c = 0; c < rho.dim(); ++c) {
      write_le_double(out, rho.entries()(r, c).real());
      write_le_double(out, rho.entries()(r, c).imag());
    }
  if (!out) throw std::runtime_error("write_dm: stream error");
}

void write_dm(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_dm: cannot open " + path.string());
  write_dm(f, rho);
}

DensityMatrix read_dm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_dm: missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("read_dm: bad header: ") + e.what());
  }
  if (h.value("format", "") != "dm") throw ConfigError("read_dm: not a .dm file");
  const int dim = h.at("dim").get<int>();
  const double hbar = h.at("hbar").get<double>();
  if (dim < 2) throw ConfigError("read_dm: bad dim");
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const double re = read_le_double(in);
      const double im = read_le_double(in);
      m(r, c) = {re, im};
    }
  return DensityMatrix(std::move(m), hbar);
}

DensityMatrix read_dm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("read_dm: cannot open " + path.string());
  return read_dm(f);
}

}  // namespace chordsim
