#include "chordsim/kernels.hpp"

#include <cmath>
#include <numbers>

#include "chordsim/errors.hpp"

namespace chordsim {
namespace {

// Wave number multiplying x_a in x∧η/ħ.
double wave_number(const Eigen::Ref<const Eigen::VectorXd>& eta, int axis, int n, double hbar) {
  return axis < n ? eta[n + axis] / hbar : -eta[axis - n] / hbar;
}

void check_etas(const PhaseGrid& w, const Eigen::MatrixXd& etas) {
  if (w.tag() != SpaceTag::centre) throw ConfigError("chord_samples: input is not a centre grid");
  if (etas.rows() != w.spec().rank()) throw DimensionError("chord_samples: chord dimension mismatch");
}

// Below this log-magnitude a row contribution is dropped.
constexpr double kLogFloor = -60.0;

}  // namespace

std::vector<cplx> chord_samples(const PhaseGrid& w, const Eigen::MatrixXd& etas) {
  check_etas(w, etas);
  const auto& spec = w.spec();
  const int rank = spec.rank();
  const int n = spec.dof();
  const double hbar = spec.hbar;
  const double scale = spec.cell_volume() / std::pow(2.0 * std::numbers::pi * hbar, n);
  const auto count = static_cast<Eigen::Index>(etas.cols());
  std::vector<cplx> out(count);

#pragma omp parallel
  {
    std::vector<cplx> buf(w.size());
    std::vector<cplx> phase;
#pragma omp for schedule(static)
    for (Eigen::Index k = 0; k < count; ++k) {
      const auto eta = etas.col(k);
      // Contract axes from the last to the first.
      std::size_t len = w.size();
      const cplx* src = w.data().data();
      for (int a = rank - 1; a >= 0; --a) {
        const int m = spec.dims[a];
        const double kw = wave_number(eta, a, n, hbar);
        phase.resize(m);
        for (int i = 0; i < m; ++i) phase[i] = std::polar(1.0, kw * spec.coordinate(a, i));
        const std::size_t outer = len / m;
        for (std::size_t o = 0; o < outer; ++o) {
          const cplx* row = src + o * m;
          cplx s{0.0, 0.0};
          for (int i = 0; i < m; ++i) s += row[i] * phase[i];
          buf[o] = s;
        }
        len = outer;
        src = buf.data();
      }
      out[k] = scale * buf[0];
    }
  }
  return out;
}

std::vector<cplx> chord_samples_reference(const PhaseGrid& w, const Eigen::MatrixXd& etas) {
  check_etas(w, etas);
  const auto& spec = w.spec();
  const int n = spec.dof();
  const double scale = spec.cell_volume() / std::pow(2.0 * std::numbers::pi * spec.hbar, n);
  std::vector<cplx> out(etas.cols());
  for (Eigen::Index k = 0; k < etas.cols(); ++k) {
    const Eigen::VectorXd eta = etas.col(k);
    cplx s{0.0, 0.0};
    for (std::size_t f = 0; f < w.size(); ++f)
      s += w[f] * std::polar(1.0, skew_product(w.point(f).vec(), eta) / spec.hbar);
    out[k] = scale * s;
  }
  return out;
}

void GaussianSources::validate() const {
  const auto k = static_cast<Eigen::Index>(weights.size());
  if (dof < 1 || !(hbar > 0.0)) throw ConfigError("GaussianSources: bad dof or hbar");
  if (centres.rows() != 2 * dof || centres.cols() != k || quench.rows() != 2 * dof || quench.cols() != 2 * dof * k)
    throw DimensionError("GaussianSources: array shapes disagree");
}

PhaseGrid gaussian_source_sum(const GridSpec& chord_spec, const GaussianSources& sources) {
  sources.validate();
  if (chord_spec.tag != SpaceTag::chord) throw ConfigError("gaussian_source_sum: target is not a chord grid");
  if (chord_spec.dof() != sources.dof) throw DimensionError("gaussian_source_sum: dof mismatch");
  PhaseGrid out(chord_spec);
  const int rank = chord_spec.rank();
  const int last = rank - 1;
  const int len = chord_spec.dims[last];
  const double d = chord_spec.spacing[last];
  const double hbar = sources.hbar;
  const std::size_t rows = out.size() / len;
  const auto ns = static_cast<Eigen::Index>(sources.count());
  const Eigen::MatrixXd j = symplectic_j(sources.dof);
  // a_s = J x_s so that x_s∧ξ = a_s·ξ.
  const Eigen::MatrixXd a = j * sources.centres;
  auto* data = out.samples().data();

#pragma omp parallel
  {
    Eigen::VectorXd r(rank);
    std::vector<int> idx(rank);
#pragma omp for schedule(static)
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t f = row;
      for (int ax = last - 1; ax >= 0; --ax) {
        idx[ax] = static_cast<int>(f % chord_spec.dims[ax]);
        f /= chord_spec.dims[ax];
      }
      for (int ax = 0; ax < last; ++ax) r[ax] = chord_spec.coordinate(ax, idx[ax]);
      r[last] = chord_spec.coordinate(last, 0);
      cplx* dst = data + row * len;

      for (Eigen::Index s = 0; s < ns; ++s) {
        const auto q = sources.quench.block(0, s * rank, rank, rank);
        const double qr_last = q.row(last).dot(r);
        const double rqr = r.dot(q * r);
        // f(j) = alpha + beta j + c j².
        const cplx alpha{-0.5 * rqr / hbar, a.col(s).dot(r) / hbar};
        const cplx beta{-d * qr_last / hbar, d * a(last, s) / hbar};
        const double c = -0.5 * d * d * q(last, last) / hbar;

        int peak;
        if (c < 0.0) {
          peak = static_cast<int>(std::lround(-beta.real() / (2.0 * c)));
          peak = std::clamp(peak, 0, len - 1);
        } else {
          peak = beta.real() > 0.0 ? len - 1 : 0;
        }
        double log_mag = alpha.real() + beta.real() * peak + c * peak * peak;
        if (log_mag < kLogFloor) continue;
        const cplx w = sources.weights[s];
        const cplx start = w * std::exp(alpha + beta * static_cast<double>(peak) + c * double(peak) * peak);
        const double growth = std::exp(2.0 * c);

        // Upward: v_{j+1} = v_j exp(beta + c(2j+1)).
        cplx v = start;
        cplx ratio = std::exp(beta + c * (2.0 * peak + 1.0));
        double lm = log_mag;
        dst[peak] += v;
        for (int jj = peak + 1; jj < len; ++jj) {
          v *= ratio;
          lm += beta.real() + c * (2.0 * jj - 1.0);
          if (lm < kLogFloor) break;
          dst[jj] += v;
          ratio *= growth;
        }
        // Downward: v_{j-1} = v_j exp(-beta - c(2j-1)).
        v = start;
        ratio = std::exp(-beta - c * (2.0 * peak - 1.0));
        lm = log_mag;
        for (int jj = peak - 1; jj >= 0; --jj) {
          v *= ratio;
          lm -= beta.real() + c * (2.0 * jj + 1.0);
          if (lm < kLogFloor) break;
          dst[jj] += v;
          ratio *= growth;
        }
      }
    }
  }
  return out;
}

PhaseGrid gaussian_source_sum_reference(const GridSpec& chord_spec, const GaussianSources& sources) {
  sources.validate();
  if (chord_spec.tag != SpaceTag::chord) throw ConfigError("gaussian_source_sum: target is not a chord grid");
  PhaseGrid out(chord_spec);
  const int rank = chord_spec.rank();
  for (std::size_t f = 0; f < out.size(); ++f) {
    const Eigen::VectorXd xi = out.point(f).vec();
    cplx sum{0.0, 0.0};
    for (std::size_t s = 0; s < sources.count(); ++s) {
      const auto q = sources.quench.block(0, s * rank, rank, rank);
      const double phase = skew_product(Eigen::VectorXd(sources.centres.col(s)), xi) / sources.hbar;
      const double decay = -0.5 * xi.dot(q * xi) / sources.hbar;
      sum += sources.weights[s] * std::exp(cplx{decay, phase});
    }
    out[f] = sum;
  }
  return out;
}

}  // namespace chordsim
