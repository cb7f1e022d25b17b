#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chordsim/phase_vector.hpp"

namespace chordsim {

using cplx = std::complex<double>;

enum class SpaceTag { centre, chord };

const char* to_string(SpaceTag tag);
SpaceTag space_tag_from_string(const std::string& s);

// Geometry of a uniform grid over the 2N phase-space axes (p_1..p_N, q_1..q_N).
//
// Axis a has dims[a] samples at origin[a] + (i - dims[a]/2) * spacing[a],
// i = 0..dims[a]-1, so the sample at index dims[a]/2 (integer division) sits
// on the origin. This is the standard centred FFT layout: for even counts the
// grid covers [-dims/2, dims/2 - 1] steps, symmetric up to the Nyquist sample.
struct GridSpec {
  SpaceTag tag = SpaceTag::centre;
  std::vector<int> dims;
  std::vector<double> spacing;
  PhaseVector origin;
  double hbar = 1.0;

  // Square grid with n samples per axis covering [-half_width, half_width).
  static GridSpec centred(int dof, int n, double half_width, double hbar,
                          SpaceTag tag = SpaceTag::centre);
  // 128 samples per axis, half-width 8 sqrt(hbar).
  static GridSpec desk(int dof = 1, double hbar = 1.0);

  int rank() const { return static_cast<int>(dims.size()); }
  int dof() const { return rank() / 2; }
  std::size_t size() const;
  std::vector<std::size_t> strides() const;
  double coordinate(int axis, int index) const {
    return origin[axis] + (index - dims[axis] / 2) * spacing[axis];
  }
  double cell_volume() const;
  double half_width(int axis) const { return 0.5 * dims[axis] * spacing[axis]; }
  bool centred_on_origin() const;

  // Throws ConfigError on malformed geometry.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Geometry of the Fourier-conjugate grid: centre <-> chord, with the p_i and
// q_i axes exchanging counts and spacing 2*pi*hbar / (n * dx) so that the
// discrete symplectic transform is an exact bijection.
GridSpec conjugate_spec(const GridSpec& spec);

// Complex samples of a Wigner (centre) or chord function on a GridSpec,
// row-major over the axes in (p..., q...) order.
class PhaseGrid {
 public:
  PhaseGrid() = default;
  explicit PhaseGrid(GridSpec spec);
  PhaseGrid(GridSpec spec, std::vector<cplx> samples);

  const GridSpec& spec() const { return spec_; }
  SpaceTag tag() const { return spec_.tag; }
  double hbar() const { return spec_.hbar; }
  int dof() const { return spec_.dof(); }
  std::size_t size() const { return samples_.size(); }

  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }
  const std::vector<cplx>& data() const { return samples_; }

  const cplx& operator[](std::size_t i) const { return samples_[i]; }
  cplx& operator[](std::size_t i) { return samples_[i]; }

  std::vector<int> index_of(std::size_t flat) const;
  std::size_t flat_of(std::span<const int> index) const;
  PhaseVector point(std::size_t flat) const;
  std::size_t origin_flat() const;

  // Flat index of the sample at -x, or npos when -x is not on the grid.
  std::size_t mirror_flat(std::size_t flat) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  GridSpec spec_;
  std::vector<cplx> samples_;
};

// --- scalar diagnostics over grids ---------------------------------------

// Σ f ΔV over all samples.
cplx quadrature(const PhaseGrid& g);
// (2πħ)^N χ(0) for a chord grid.
cplx chord_normalization(const PhaseGrid& chi);
// max |f(−x) − conj f(x)| over samples whose mirror lies on the grid.
double hermiticity_defect(const PhaseGrid& g);
double max_abs_diff(const PhaseGrid& a, const PhaseGrid& b);
// sqrt(Σ |a − b|² ΔV).
double l2_diff(const PhaseGrid& a, const PhaseGrid& b);
double min_real(const PhaseGrid& g);
double max_abs_imag(const PhaseGrid& g);
// Fraction of Σ|f| carried by the outermost layer of samples.
double boundary_fraction(const PhaseGrid& g);
// Replace samples by their real parts (used after inverse transforms of
// hermitian chord data).
PhaseGrid real_part(PhaseGrid g);

}  // namespace chordsim
