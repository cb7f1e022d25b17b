#include "chordsim/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chordsim/errors.hpp"

namespace chordsim {

const char* to_string(SpaceTag tag) { return tag == SpaceTag::centre ? "centre" : "chord"; }

SpaceTag space_tag_from_string(const std::string& s) {
  if (s == "centre" || s == "center") return SpaceTag::centre;
  if (s == "chord") return SpaceTag::chord;
  throw ConfigError("unknown space_tag '" + s + "'");
}

GridSpec GridSpec::centred(int dof, int n, double half_width, double hbar, SpaceTag tag) {
  if (dof < 1 || n < 2 || !(half_width > 0.0) || !(hbar > 0.0))
    throw ConfigError("GridSpec::centred: need dof >= 1, n >= 2, half_width > 0, hbar > 0");
  GridSpec s;
  s.tag = tag;
  s.dims.assign(2 * dof, n);
  s.spacing.assign(2 * dof, 2.0 * half_width / n);
  s.origin = PhaseVector(dof);
  s.hbar = hbar;
  return s;
}

GridSpec GridSpec::desk(int dof, double hbar) {
  return centred(dof, 128, 8.0 * std::sqrt(hbar), hbar);
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<std::size_t> GridSpec::strides() const {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int a = rank() - 2; a >= 0; --a) s[a] = s[a + 1] * static_cast<std::size_t>(dims[a + 1]);
  return s;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

bool GridSpec::centred_on_origin() const {
  for (int a = 0; a < origin.size(); ++a)
    if (origin[a] != 0.0) return false;
  return true;
}

void GridSpec::validate() const {
  if (dims.empty() || dims.size() % 2 != 0)
    throw ConfigError("GridSpec: need an even, nonzero number of axes");
  if (spacing.size() != dims.size() || origin.size() != rank())
    throw ConfigError("GridSpec: dims, spacing and origin lengths disagree");
  for (int a = 0; a < rank(); ++a) {
    if (dims[a] < 2) throw ConfigError("GridSpec: each axis needs at least 2 samples");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw ConfigError("GridSpec: spacing must be positive and finite");
  }
  if (!(hbar > 0.0)) throw ConfigError("GridSpec: hbar must be positive");
  if (!origin.is_finite()) throw ConfigError("GridSpec: non-finite origin");
}

GridSpec conjugate_spec(const GridSpec& spec) {
  spec.validate();
  const int n = spec.dof();
  GridSpec out;
  out.tag = spec.tag == SpaceTag::centre ? SpaceTag::chord : SpaceTag::centre;
  out.hbar = spec.hbar;
  out.dims.resize(spec.dims.size());
  out.spacing.resize(spec.spacing.size());
  out.origin = PhaseVector(n);
  const double h = 2.0 * std::numbers::pi * spec.hbar;
  for (int i = 0; i < n; ++i) {
    // ξ_p is conjugate to q and ξ_q to p.
    out.dims[i] = spec.dims[n + i];
    out.dims[n + i] = spec.dims[i];
    out.spacing[i] = h / (spec.dims[n + i] * spec.spacing[n + i]);
    out.spacing[n + i] = h / (spec.dims[i] * spec.spacing[i]);
  }
  return out;
}

PhaseGrid::PhaseGrid(GridSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  samples_.assign(spec_.size(), cplx{0.0, 0.0});
}

PhaseGrid::PhaseGrid(GridSpec spec, std::vector<cplx> samples)
    : spec_(std::move(spec)), samples_(std::move(samples)) {
  spec_.validate();
  if (samples_.size() != spec_.size())
    throw DimensionError("PhaseGrid: sample count does not match dims");
}

std::vector<int> PhaseGrid::index_of(std::size_t flat) const {
  std::vector<int> idx(spec_.rank());
  for (int a = spec_.rank() - 1; a >= 0; --a) {
    const auto d = static_cast<std::size_t>(spec_.dims[a]);
    idx[a] = static_cast<int>(flat % d);
    flat /= d;
  }
  return idx;
}

std::size_t PhaseGrid::flat_of(std::span<const int> index) const {
  std::size_t f = 0;
  for (int a = 0; a < spec_.rank(); ++a)
    f = f * static_cast<std::size_t>(spec_.dims[a]) + static_cast<std::size_t>(index[a]);
  return f;
}

PhaseVector PhaseGrid::point(std::size_t flat) const {
  PhaseVector x(spec_.dof());
  for (int a = spec_.rank() - 1; a >= 0; --a) {
    const auto d = static_cast<std::size_t>(spec_.dims[a]);
    x[a] = spec_.coordinate(a, static_cast<int>(flat % d));
    flat /= d;
  }
  return x;
}

std::size_t PhaseGrid::origin_flat() const {
  std::vector<int> idx(spec_.rank());
  for (int a = 0; a < spec_.rank(); ++a) idx[a] = spec_.dims[a] / 2;
  return flat_of(idx);
}

std::size_t PhaseGrid::mirror_flat(std::size_t flat) const {
  auto idx = index_of(flat);
  for (int a = 0; a < spec_.rank(); ++a) {
    const int m = 2 * (spec_.dims[a] / 2) - idx[a];
    if (m < 0 || m >= spec_.dims[a]) return npos;
    idx[a] = m;
  }
  return flat_of(idx);
}

cplx quadrature(const PhaseGrid& g) {
  cplx s{0.0, 0.0};
  for (const auto& v : g.samples()) s += v;
  return s * g.spec().cell_volume();
}

cplx chord_normalization(const PhaseGrid& chi) {
  if (chi.tag() != SpaceTag::chord) throw ConfigError("chord_normalization: grid is not a chord grid");
  const double scale = std::pow(2.0 * std::numbers::pi * chi.hbar(), chi.dof());
  return scale * chi[chi.origin_flat()];
}

double hermiticity_defect(const PhaseGrid& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto m = g.mirror_flat(i);
    if (m == PhaseGrid::npos) continue;
    worst = std::max(worst, std::abs(g[m] - std::conj(g[i])));
  }
  return worst;
}

namespace {
void require_same_geometry(const PhaseGrid& a, const PhaseGrid& b, const char* what) {
  const GridSpec& x = a.spec();
  const GridSpec& y = b.spec();
  bool same = x.tag == y.tag && x.dims == y.dims && x.origin.size() == y.origin.size();
  // Spacings that went through conjugate_spec twice may differ in the last bit.
  for (int i = 0; same && i < x.rank(); ++i)
    same = std::abs(x.spacing[i] - y.spacing[i]) <= 1e-12 * x.spacing[i] &&
           std::abs(x.origin[i] - y.origin[i]) <= 1e-12 * x.spacing[i];
  if (!same) throw DimensionError(std::string(what) + ": grids differ in geometry");
}
}  // namespace

double max_abs_diff(const PhaseGrid& a, const PhaseGrid& b) {
  require_same_geometry(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double l2_diff(const PhaseGrid& a, const PhaseGrid& b) {
  require_same_geometry(a, b, "l2_diff");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * a.spec().cell_volume());
}

double min_real(const PhaseGrid& g) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : g.samples()) m = std::min(m, v.real());
  return m;
}

double max_abs_imag(const PhaseGrid& g) {
  double m = 0.0;
  for (const auto& v : g.samples()) m = std::max(m, std::abs(v.imag()));
  return m;
}

double boundary_fraction(const PhaseGrid& g) {
  double total = 0.0;
  double edge = 0.0;
  const auto& dims = g.spec().dims;
  std::vector<int> idx(dims.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = std::abs(g[i]);
    total += v;
    bool on_edge = false;
    for (std::size_t a = 0; a < dims.size(); ++a)
      if (idx[a] == 0 || idx[a] == dims[a] - 1) on_edge = true;
    if (on_edge) edge += v;
    for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

PhaseGrid real_part(PhaseGrid g) {
  for (auto& v : g.samples()) v = cplx{v.real(), 0.0};
  return g;
}

}  // namespace chordsim
