#pragma once

#include <filesystem>
#include <iosfwd>

#include "chordsim/phase_grid.hpp"

namespace chordsim {

// `.psg` layout: one line of JSON
//   {"format":"psg","version":1,"space_tag":..,"hbar":..,"dims":[..],"spacing":[..],"origin":[..]}
// terminated by '\n', followed by size() pairs of little-endian IEEE-754
// doubles (re, im) in row-major axis order.
void write_psg(std::ostream& out, const PhaseGrid& grid);
void write_psg(const std::filesystem::path& path, const PhaseGrid& grid);
PhaseGrid read_psg(std::istream& in);
PhaseGrid read_psg(const std::filesystem::path& path);

// CSV with header `p1,..,pN,q1,..,qN,re,im`, one row per sample.
void write_grid_csv(std::ostream& out, const PhaseGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const PhaseGrid& grid);

// Little-endian double encoding shared with the density-matrix dumps.
void write_le_double(std::ostream& out, double v);
double read_le_double(std::istream& in);

}  // namespace chordsim
