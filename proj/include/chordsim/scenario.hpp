#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chordsim/fock_oracle.hpp"
#include "chordsim/smallchord.hpp"
#include "chordsim/states.hpp"

namespace chordsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputRootEnv = "CHORDSIM_OUTPUT_ROOT";

enum class Method { exact, smallchord, oracle };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

// Process exit codes of the command-line runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitAccuracy = 3,
  kExitDivergence = 4,
};

struct Scenario {
  std::string name = "scenario";
  double hbar = 1.0;
  SmoothHamiltonian hamiltonian = SmoothHamiltonian::harmonic();
  std::vector<LindbladChannel> channels;
  StateSpec state = StateSpec::coherent(PhaseVector::pq(0.0, 0.0));
  GridSpec grid = GridSpec::desk();
  std::vector<double> times;
  std::vector<Method> methods;
  std::string output;
  double dt = kDefaultDt;
  int truncation = kDefaultTruncation;
  double oracle_dt = 2e-3;
  IterationPolicy policy{};
  std::uint64_t seed = 0;
  // FNV-1a of the canonical JSON form.
  std::string hash;

  OpenSystem system() const { return OpenSystem(hamiltonian, channels, hbar); }
  bool has(Method m) const;
  // Checks cross-field invariants; throws ConfigError.
  void validate() const;
};

// Parses the JSON scenario schema (see README). Throws ConfigError.
Scenario parse_scenario(const nlohmann::json& doc, const std::string& default_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

struct RunOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::vector<Method>> methods;
  std::optional<double> dt;
};

// Applies overrides and re-validates.
Scenario apply_overrides(Scenario s, const RunOverrides& o);

// Resolution order: explicit directory, else <root>/<output or name> where
// root is $CHORDSIM_OUTPUT_ROOT or the working directory.
std::filesystem::path resolve_output_dir(const Scenario& s, const std::optional<std::filesystem::path>& out);

struct MethodMetrics {
  double mass = 0.0;
  double chord_norm_defect = 0.0;  // |(2πħ)^N χ(0) − 1|
  double hermiticity = 0.0;        // chord-side ‖χ(−ξ) − χ(ξ)*‖∞
  double min_w = 0.0;
  double purity = 0.0;
  std::optional<double> trace_defect;  // oracle only
};

struct PairMetrics {
  Method a, b;
  double max_abs = 0.0;
  double l2 = 0.0;
};

struct TimeReport {
  double t = 0.0;
  std::map<Method, MethodMetrics> methods;
  std::vector<PairMetrics> pairs;
};

struct ComparisonReport {
  std::string scenario;
  double gamma = 0.0;
  bool unitary = false;
  double t_dec = 0.0;  // at the initial centroid; +∞ if never reached
  std::vector<TimeReport> times;
  // Unitary limit only: max |purity(t) − purity(0)| per method.
  std::map<Method, double> purity_drift;

  nlohmann::json to_json(const Scenario& s) const;
};

struct RunResult {
  std::filesystem::path directory;
  ComparisonReport report;
};

// Evolves the initial state by every requested method, checks and writes
// grids, CSV exports and report.json.
RunResult run(const Scenario& s, const std::filesystem::path& out_dir);

// Derived quantities and a runtime estimate, as text.
std::string describe(const Scenario& s);

// Maps an exception from run/describe to its exit code.
int exit_code_for(const std::exception& e);

}  // namespace chordsim
