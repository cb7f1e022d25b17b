#include "chordsim/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "chordsim/errors.hpp"

namespace chordsim {

using nlohmann::json;

void write_le_double(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

double read_le_double(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ConfigError("truncated binary payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_psg(std::ostream& out, const PhaseGrid& grid) {
  const auto& s = grid.spec();
  json header = {
      {"format", "psg"},
      {"version", 1},
      {"space_tag", to_string(s.tag)},
      {"hbar", s.hbar},
      {"dims", s.dims},
      {"spacing", s.spacing},
      {"origin", std::vector<double>(s.origin.vec().data(), s.origin.vec().data() + s.origin.size())},
  };
  out << header.dump() << '\n';
  for (const auto& v : grid.samples()) {
    write_le_double(out, v.real());
    write_le_double(out, v.imag());
  }
  if (!out) throw std::runtime_error("write_psg: stream error");
}

void write_psg(const std::filesystem::path& path, const PhaseGrid& grid) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_psg: cannot open " + path.string());
  write_psg(f, grid);
}

PhaseGrid read_psg(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_psg: missing header");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("read_psg: bad header: ") + e.what());
  }
  if (header.value("format", "") != "psg") throw ConfigError("read_psg: not a psg stream");
  GridSpec spec;
  spec.tag = space_tag_from_string(header.at("space_tag").get<std::string>());
  spec.hbar = header.at("hbar").get<double>();
  spec.dims = header.at("dims").get<std::vector<int>>();
  spec.spacing = header.at("spacing").get<std::vector<double>>();
  auto origin = header.at("origin").get<std::vector<double>>();
  spec.origin = PhaseVector(Eigen::Map<Eigen::VectorXd>(origin.data(), static_cast<Eigen::Index>(origin.size())));
  spec.validate();
  std::vector<cplx> samples(spec.size());
  for (auto& v : samples) {
    const double re = read_le_double(in);
    const double im = read_le_double(in);
    v = {re, im};
  }
  return PhaseGrid(std::move(spec), std::move(samples));
}

PhaseGrid read_psg(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("read_psg: cannot open " + path.string());
  return read_psg(f);
}

void write_grid_csv(std::ostream& out, const PhaseGrid& grid) {
  const int n = grid.dof();
  for (int i = 0; i < n; ++i) out << 'p' << i + 1 << ',';
  for (int i = 0; i < n; ++i) out << 'q' << i + 1 << ',';
  out << "re,im\n";
  out << std::setprecision(17);
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto x = grid.point(f);
    for (int a = 0; a < x.size(); ++a) out << x[a] << ',';
    out << grid[f].real() << ',' << grid[f].imag() << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path, const PhaseGrid& grid) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_grid_csv: cannot open " + path.string());
  write_grid_csv(f, grid);
}

}  // namespace chordsim
