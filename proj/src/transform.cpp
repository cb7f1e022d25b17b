#include "chordsim/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "chordsim/errors.hpp"

namespace chordsim {
namespace {

// FFTW planning is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// new[(i + shift) mod n] = old[i] along `axis`.
void roll_axis(std::span<cplx> data, std::span<const int> dims, int axis, int shift) {
  const int n = dims[axis];
  shift = ((shift % n) + n) % n;
  if (shift == 0) return;
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const std::size_t outer = data.size() / (inner * n);
  std::vector<cplx> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * n * inner + in;
      for (int i = 0; i < n; ++i) line[(i + shift) % n] = data[base + i * inner];
      for (int i = 0; i < n; ++i) data[base + i * inner] = line[i];
    }
  }
}

// Out axis i <- in axis N+i and out axis N+i <- in axis i.
std::vector<cplx> swap_halves(std::span<const cplx> in, std::span<const int> in_dims) {
  const int rank = static_cast<int>(in_dims.size());
  const int n = rank / 2;
  std::vector<int> out_dims(rank);
  for (int i = 0; i < n; ++i) {
    out_dims[i] = in_dims[n + i];
    out_dims[n + i] = in_dims[i];
  }
  std::vector<std::size_t> in_strides(rank, 1);
  for (int a = rank - 2; a >= 0; --a) in_strides[a] = in_strides[a + 1] * in_dims[a + 1];

  std::vector<cplx> out(in.size());
  std::vector<int> idx(rank, 0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    std::size_t src = 0;
    for (int i = 0; i < n; ++i) {
      src += static_cast<std::size_t>(idx[i]) * in_strides[n + i];
      src += static_cast<std::size_t>(idx[n + i]) * in_strides[i];
    }
    out[f] = in[src];
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < out_dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

PhaseGrid symplectic_transform(const PhaseGrid& in) {
  const auto& spec = in.spec();
  if (!spec.centred_on_origin())
    throw ConfigError("symplectic transform: grid must be centred on the origin");
  const int rank = spec.rank();
  const int n = spec.dof();
  std::vector<cplx> buf(in.data());
  // Axes in the first half carry exp(+i ...), the second half exp(-i ...),
  // for both directions of the transform (x∧ξ and ξ∧x swap roles of p and q).
  for (int a = 0; a < rank; ++a) centred_dft_axis(buf, spec.dims, a, a < n ? +1 : -1);

  GridSpec out_spec = conjugate_spec(spec);
  auto out = swap_halves(buf, spec.dims);
  const double scale = spec.cell_volume() / std::pow(2.0 * std::numbers::pi * spec.hbar, n);
  for (auto& v : out) v *= scale;
  return PhaseGrid(std::move(out_spec), std::move(out));
}

}  // namespace

void centred_dft_axis(std::span<cplx> data, std::span<const int> dims, int axis, int sign) {
  const int n = dims[axis];
  const int c = n / 2;
  roll_axis(data, dims, axis, -c);

  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const std::size_t outer = data.size() / (inner * n);

  fftw_iodim tdim{n, static_cast<int>(inner), static_cast<int>(inner)};
  fftw_iodim loops[2] = {
      {static_cast<int>(outer), static_cast<int>(n * inner), static_cast<int>(n * inner)},
      {static_cast<int>(inner), 1, 1},
  };
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_guru_dft(1, &tdim, 2, loops, ptr, ptr, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("centred_dft_axis: FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  roll_axis(data, dims, axis, c);
}

PhaseGrid chord_to_wigner(const PhaseGrid& chi) {
  if (chi.tag() != SpaceTag::chord) throw ConfigError("chord_to_wigner: input is not a chord grid");
  return symplectic_transform(chi);
}

PhaseGrid wigner_to_chord(const PhaseGrid& w) {
  if (w.tag() != SpaceTag::centre) throw ConfigError("wigner_to_chord: input is not a centre grid");
  return symplectic_transform(w);
}

}  // namespace chordsim
