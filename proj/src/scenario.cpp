#include "chordsim/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/flows.hpp"
#include "chordsim/grid_io.hpp"
#include "chordsim/quadratic_exact.hpp"
#include "chordsim/transform.hpp"

namespace chordsim {
namespace {

using nlohmann::json;

// Tolerances checked on every emitted grid.
constexpr double kChordNormTolerance = 1e-9;
constexpr double kHermiticityTolerance = 1e-9;
constexpr double kOracleMassTolerance = 1e-6;
constexpr double kOracleTraceTolerance = 1e-10;
constexpr double kUnitaryPurityTolerance = 1e-6;

[[noreturn]] void bad(const std::string& what) { throw ConfigError("scenario: " + what); }

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) bad("unknown key '" + k + "' in " + where);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(where + " must be finite");
  return x;
}

Eigen::VectorXd vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) bad(where + " must be a non-empty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], where);
  return out;
}

PhaseVector phase_vector_of(const json& v, const std::string& where) {
  const Eigen::VectorXd x = vector_of(v, where);
  if (x.size() % 2 != 0) bad(where + " needs an even number of entries (p..., q...)");
  return PhaseVector(x);
}

Eigen::MatrixXd matrix_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) bad(where + " must be a square array of rows");
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd row = vector_of(v[static_cast<std::size_t>(r)], where);
    if (row.size() != n) bad(where + " must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

SmoothHamiltonian hamiltonian_of(const json& h) {
  if (!h.is_object() || !h.contains("kind")) bad("hamiltonian needs a 'kind'");
  const std::string kind = h.at("kind").get<std::string>();
  if (kind == "quadratic") {
    allow_keys(h, {"kind", "B", "b"}, "hamiltonian");
    const Eigen::MatrixXd b = matrix_of(h.at("B"), "hamiltonian.B");
    Eigen::VectorXd lin = h.contains("b") ? vector_of(h.at("b"), "hamiltonian.b") : Eigen::VectorXd::Zero(b.rows());
    return SmoothHamiltonian::quadratic(b, lin);
  }
  if (kind == "harmonic") {
    allow_keys(h, {"kind", "omega", "dof"}, "hamiltonian");
    return SmoothHamiltonian::harmonic(h.value("dof", 1), h.contains("omega") ? number(h.at("omega"), "omega") : 1.0);
  }
  if (kind == "quartic") {
    allow_keys(h, {"kind", "kappa"}, "hamiltonian");
    return SmoothHamiltonian::quartic(h.contains("kappa") ? number(h.at("kappa"), "kappa") : 0.0);
  }
  if (kind == "pendulum") {
    allow_keys(h, {"kind"}, "hamiltonian");
    return SmoothHamiltonian::pendulum();
  }
  bad("unknown hamiltonian kind '" + kind + "'");
}

StateSpec state_of(const json& s) {
  if (!s.is_object() || !s.contains("kind")) bad("state needs a 'kind'");
  const std::string kind = s.at("kind").get<std::string>();
  StateSpec out;
  if (kind == "coherent") {
    allow_keys(s, {"kind", "centre"}, "state");
    out = StateSpec::coherent(phase_vector_of(s.at("centre"), "state.centre"));
  } else if (kind == "cat") {
    allow_keys(s, {"kind", "centres", "phase"}, "state");
    const json& c = s.at("centres");
    if (!c.is_array() || c.size() != 2) bad("state.centres must hold two centres");
    out = StateSpec::cat(phase_vector_of(c[0], "state.centres"), phase_vector_of(c[1], "state.centres"),
                         s.contains("phase") ? number(s.at("phase"), "state.phase") : 0.0);
  } else if (kind == "fock") {
    allow_keys(s, {"kind", "n"}, "state");
    out = StateSpec::fock(s.at("n").get<int>());
  } else {
    bad("unknown state kind '" + kind + "'");
  }
  out.validate();
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

MethodMetrics metrics_of(const PhaseGrid& w, const PhaseGrid& chi) {
  MethodMetrics m;
  m.mass = quadrature(w).real();
  m.chord_norm_defect = std::abs(chord_normalization(chi) - 1.0);
  m.hermiticity = hermiticity_defect(chi);
  m.min_w = min_real(w);
  m.purity = purity(w);
  return m;
}

void check_emitted(Method method, double t, const MethodMetrics& m) {
  std::ostringstream msg;
  msg << to_string(method) << " at t = " << t << ": ";
  if (method == Method::oracle) {
    if (std::abs(m.mass - 1.0) > kOracleMassTolerance) {
      msg << "Wigner mass " << m.mass << " differs from 1 by more than " << kOracleMassTolerance;
      throw AccuracyError(msg.str());
    }
    if (m.trace_defect && *m.trace_defect > kOracleTraceTolerance) {
      msg << "|tr rho - 1| = " << *m.trace_defect << " exceeds " << kOracleTraceTolerance;
      throw AccuracyError(msg.str());
    }
  } else if (m.chord_norm_defect > kChordNormTolerance) {
    msg << "normalization |(2 pi hbar)^N chi(0) - 1| = " << m.chord_norm_defect << " exceeds " << kChordNormTolerance;
    throw AccuracyError(msg.str());
  }
  if (m.hermiticity > kHermiticityTolerance) {
    msg << "chord hermiticity defect " << m.hermiticity << " exceeds " << kHermiticityTolerance;
    throw AccuracyError(msg.str());
  }
}

PhaseVector grid_centroid(const PhaseGrid& w) {
  PhaseVector c(w.dof());
  double mass = 0.0;
  for (std::size_t f = 0; f < w.size(); ++f) {
    mass += w[f].real();
    c += w[f].real() * w.point(f);
  }
  return (1.0 / mass) * c;
}

double decoherence_time_at(const OpenSystem& sys, const PhaseVector& x, double horizon, double dt) {
  if (sys.unitary()) return std::numeric_limits<double>::infinity();
  return decoherence_time(sys, x, horizon, dt).t_dec;
}

json number_or_inf(double v) { return std::isfinite(v) ? json(v) : json("inf"); }

std::string fmt(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::smallchord: return "smallchord";
    case Method::oracle: return "oracle";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "exact") return Method::exact;
  if (s == "smallchord") return Method::smallchord;
  if (s == "oracle") return Method::oracle;
  throw ConfigError("unknown method '" + s + "' (expected exact, smallchord or oracle)");
}

bool Scenario::has(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

void Scenario::validate() const {
  if (!(hbar > 0.0)) bad("hbar must be positive");
  const int n = hamiltonian.dof();
  if (state.dof() != n) bad("state and hamiltonian have different dof");
  if (grid.dof() != n) bad("grid and hamiltonian have different dof");
  for (const auto& c : channels)
    if (c.dof() != n) bad("channel and hamiltonian have different dof");
  if (times.empty()) bad("times must not be empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) bad("times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) bad("times must be strictly increasing");
  }
  if (methods.empty()) bad("methods must not be empty");
  std::set<Method> seen(methods.begin(), methods.end());
  if (seen.size() != methods.size()) bad("methods are repeated");
  if (has(Method::exact) && !hamiltonian.is_quadratic())
    bad("the exact method requires a quadratic hamiltonian (got " + std::string(to_string(hamiltonian.kind())) + ")");
  if (has(Method::oracle)) {
    if (n != 1) bad("the oracle method requires N = 1");
    if (hamiltonian.kind() == SmoothHamiltonian::Kind::pendulum) bad("the oracle method has no operator form for the pendulum");
    if (state.kind == StateSpec::Kind::fock && state.fock_index >= truncation)
      bad("Fock index must be below the oracle truncation");
  }
  if (!(dt > 0.0) || !(oracle_dt > 0.0)) bad("dt must be positive");
  if (truncation < 2) bad("oracle truncation must be >= 2");
  if (!(policy.max_step > 0.0) || !(policy.overshoot > 0.0)) bad("policy.max_step and policy.overshoot must be positive");
  grid.validate();
}

Scenario parse_scenario(const nlohmann::json& doc, const std::string& default_name) {
  try {
    allow_keys(doc, {"name", "hbar", "hamiltonian", "channels", "thermal", "state", "grid", "times", "methods",
                     "output", "dt", "oracle", "policy", "seed"},
               "scenario");
    Scenario s;
    s.name = doc.value("name", default_name);
    s.hbar = doc.contains("hbar") ? number(doc.at("hbar"), "hbar") : 1.0;
    if (!doc.contains("hamiltonian")) bad("missing 'hamiltonian'");
    s.hamiltonian = hamiltonian_of(doc.at("hamiltonian"));
    const int n = s.hamiltonian.dof();

    if (doc.contains("channels") && doc.contains("thermal")) bad("give either 'channels' or 'thermal', not both");
    if (doc.contains("channels")) {
      const json& cs = doc.at("channels");
      if (!cs.is_array()) bad("channels must be an array");
      for (const auto& c : cs) {
        allow_keys(c, {"lp", "lpp"}, "channel");
        const PhaseVector lp = c.contains("lp") ? phase_vector_of(c.at("lp"), "channel.lp") : PhaseVector(n);
        const PhaseVector lpp = c.contains("lpp") ? phase_vector_of(c.at("lpp"), "channel.lpp") : PhaseVector(n);
        s.channels.push_back(LindbladChannel{lp, lpp});
      }
    } else if (doc.contains("thermal")) {
      const json& th = doc.at("thermal");
      allow_keys(th, {"A", "nu", "mode"}, "thermal");
      s.channels = OpenSystem::thermal_channels(number(th.at("A"), "thermal.A"),
                                                th.contains("nu") ? number(th.at("nu"), "thermal.nu") : 0.0,
                                                th.value("mode", 0), n);
    }

    if (!doc.contains("state")) bad("missing 'state'");
    s.state = state_of(doc.at("state"));

    int points = 128;
    double half = 8.0 * std::sqrt(s.hbar);
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      allow_keys(g, {"n", "half_width"}, "grid");
      points = g.value("n", points);
      if (g.contains("half_width")) half = number(g.at("half_width"), "grid.half_width");
    }
    s.grid = GridSpec::centred(n, points, half, s.hbar);

    if (!doc.contains("times")) bad("missing 'times'");
    for (const auto& t : doc.at("times")) s.times.push_back(number(t, "times"));
    if (doc.contains("methods")) {
      for (const auto& m : doc.at("methods")) s.methods.push_back(method_from_string(m.get<std::string>()));
    } else {
      if (s.hamiltonian.is_quadratic()) s.methods.push_back(Method::exact);
      s.methods.push_back(Method::smallchord);
    }
    s.output = doc.value("output", std::string{});
    if (doc.contains("dt")) s.dt = number(doc.at("dt"), "dt");
    if (doc.contains("oracle")) {
      const json& o = doc.at("oracle");
      allow_keys(o, {"truncation", "dt"}, "oracle");
      s.truncation = o.value("truncation", s.truncation);
      if (o.contains("dt")) s.oracle_dt = number(o.at("dt"), "oracle.dt");
    }
    if (doc.contains("policy")) {
      const json& p = doc.at("policy");
      allow_keys(p, {"max_step", "overshoot", "strict"}, "policy");
      if (p.contains("max_step")) s.policy.max_step = number(p.at("max_step"), "policy.max_step");
      if (p.contains("overshoot")) s.policy.overshoot = number(p.at("overshoot"), "policy.overshoot");
      s.policy.strict = p.value("strict", s.policy.strict);
    }
    s.seed = doc.value("seed", std::uint64_t{0});

    std::ostringstream h;
    h << std::hex << std::setw(16) << std::setfill('0') << fnv1a(doc.dump());
    s.hash = h.str();
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: malformed field: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(f, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.stem().string());
}

Scenario apply_overrides(Scenario s, const RunOverrides& o) {
  if (o.methods) s.methods = *o.methods;
  if (o.dt) s.dt = *o.dt;
  s.validate();
  return s;
}

std::filesystem::path resolve_output_dir(const Scenario& s, const std::optional<std::filesystem::path>& out) {
  if (out) return *out;
  std::filesystem::path root = ".";
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) root = env;
  return root / (s.output.empty() ? s.name : s.output);
}

nlohmann::json ComparisonReport::to_json(const Scenario& s) const {
  json j;
  j["scenario"] = scenario;
  j["gamma"] = gamma;
  j["unitary_limit"] = unitary;
  j["t_dec"] = number_or_inf(t_dec);
  j["methods"] = json::array();
  for (auto m : s.methods) j["methods"].push_back(to_string(m));
  j["times"] = json::array();
  for (const auto& tr : times) {
    json e;
    e["t"] = tr.t;
    for (const auto& [m, mm] : tr.methods) {
      json x{{"mass", mm.mass}, {"chord_norm_defect", mm.chord_norm_defect}, {"hermiticity", mm.hermiticity},
             {"min_w", mm.min_w}, {"purity", mm.purity}};
      if (mm.trace_defect) x["trace_defect"] = *mm.trace_defect;
      e["methods"][to_string(m)] = x;
    }
    e["pairs"] = json::array();
    for (const auto& p : tr.pairs)
      e["pairs"].push_back({{"a", to_string(p.a)}, {"b", to_string(p.b)}, {"max_abs", p.max_abs}, {"l2", p.l2}});
    j["times"].push_back(e);
  }
  if (unitary) {
    for (const auto& [m, d] : purity_drift) j["purity_drift"][to_string(m)] = d;
  }
  j["provenance"] = {
      {"scenario_hash", s.hash},
      {"version", kVersion},
      {"seed", s.seed},
      {"dt", s.dt},
      {"oracle", {{"truncation", s.truncation}, {"dt", s.oracle_dt}}},
      {"tolerances",
       {{"chord_normalization", kChordNormTolerance},
        {"hermiticity", kHermiticityTolerance},
        {"oracle_mass", kOracleMassTolerance},
        {"oracle_trace", kOracleTraceTolerance},
        {"unitary_purity", kUnitaryPurityTolerance},
        {"boundary_fraction", kBoundaryTolerance}}},
  };
  return j;
}

RunResult run(const Scenario& s, const std::filesystem::path& out_dir) {
  s.validate();
  const OpenSystem sys = s.system();
  const PhaseGrid w0 = build_state(s.state, s.grid);
  std::filesystem::create_directories(out_dir);

  ComparisonReport rep;
  rep.scenario = s.name;
  rep.gamma = sys.gamma();
  rep.unitary = sys.unitary();
  const PhaseVector x0 = grid_centroid(w0);
  const double horizon = std::max(20.0, 4.0 * s.times.back());
  rep.t_dec = decoherence_time_at(sys, x0, horizon, s.dt);
  rep.times.resize(s.times.size());
  for (std::size_t i = 0; i < s.times.size(); ++i) rep.times[i].t = s.times[i];

  // grids[method][time index]
  std::map<Method, std::vector<PhaseGrid>> grids;
  auto emit = [&](Method m, std::size_t i, const PhaseGrid& w, const MethodMetrics& mm) {
    check_emitted(m, s.times[i], mm);
    const std::string stem = std::string(to_string(m)) + "_t" + std::to_string(i);
    write_psg(out_dir / (stem + ".psg"), w);
    write_grid_csv(out_dir / (stem + ".csv"), w);
    rep.times[i].methods[m] = mm;
    grids[m].push_back(w);
  };

  for (Method m : s.methods) {
    switch (m) {
      case Method::exact: {
        const PhaseGrid chi0 = wigner_to_chord(w0);
        for (std::size_t i = 0; i < s.times.size(); ++i) {
          const PhaseGrid chi = evolve_chord_exact(sys, chi0, s.times[i]);
          const PhaseGrid w = real_part(chord_to_wigner(chi));
          emit(m, i, w, metrics_of(w, chi));
        }
        break;
      }
      case Method::smallchord: {
        SmallChordOptions opt;
        opt.dt = s.dt;
        opt.policy = s.policy;
        PhaseGrid w = w0;
        double now = 0.0;
        for (std::size_t i = 0; i < s.times.size(); ++i) {
          w = evolve_iterated(sys, w, s.times[i] - now, opt);
          now = s.times[i];
          const PhaseGrid chi = wigner_to_chord(w);
          emit(m, i, w, metrics_of(w, chi));
        }
        break;
      }
      case Method::oracle: {
        MasterOptions mo;
        mo.dt = s.oracle_dt;
        const DensityMatrix rho0 = density_from_state(s.state, s.truncation, s.hbar);
        const auto rhos = integrate_master(sys, rho0, s.times, mo);
        for (std::size_t i = 0; i < s.times.size(); ++i) {
          const PhaseGrid w = wigner_from_density(rhos[i], s.grid);
          const PhaseGrid chi = wigner_to_chord(w);
          MethodMetrics mm = metrics_of(w, chi);
          mm.trace_defect = std::abs(rhos[i].trace() - 1.0);
          mm.purity = rhos[i].purity();
          emit(m, i, w, mm);
          write_dm(out_dir / ("oracle_t" + std::to_string(i) + ".dm"), rhos[i]);
        }
        break;
      }
    }
  }

  for (std::size_t i = 0; i < s.times.size(); ++i)
    for (std::size_t a = 0; a < s.methods.size(); ++a)
      for (std::size_t b = a + 1; b < s.methods.size(); ++b) {
        const auto& ga = grids[s.methods[a]][i];
        const auto& gb = grids[s.methods[b]][i];
        rep.times[i].pairs.push_back(PairMetrics{s.methods[a], s.methods[b], max_abs_diff(ga, gb), l2_diff(ga, gb)});
      }

  if (rep.unitary) {
    const double p0 = purity(w0);
    for (Method m : s.methods) {
      double drift = 0.0;
      for (const auto& tr : rep.times) drift = std::max(drift, std::abs(tr.methods.at(m).purity - p0));
      rep.purity_drift[m] = drift;
    }
  }

  {
    std::ofstream f(out_dir / "centroid_flow.csv");
    write_trajectory_csv(f, centre_flow(sys, x0, s.times.back(), s.dt));
  }
  if (!sys.unitary()) {
    std::ofstream f(out_dir / "decoherence.csv");
    write_decoherence_csv(f, decoherence_time(sys, x0, std::max(s.times.back(), 1e-3), s.dt));
  }
  {
    std::ofstream f(out_dir / "report.json");
    f << rep.to_json(s).dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write report.json in " + out_dir.string());
  }
  return RunResult{out_dir, std::move(rep)};
}

std::string describe(const Scenario& s) {
  s.validate();
  const OpenSystem sys = s.system();
  std::ostringstream o;
  o << "scenario: " << s.name << " (hash " << s.hash << ")\n";
  o << "hbar = " << s.hbar << ", N = " << sys.dof() << "\n";
  o << "hamiltonian: " << s.hamiltonian.describe() << "\n";
  o << "channels: " << s.channels.size() << ", gamma = " << fmt(sys.gamma()) << "\n";
  if (sys.unitary()) o << "unitary limit: no channels\n";
  if (sys.dof() > 1 && sys.gamma() != 0.0) o << "note: the single dissipation coefficient contracts every mode\n";

  const PhaseVector x0 = s.state.centroid(s.hbar);
  const double horizon = std::max(20.0, 4.0 * s.times.back());
  const double tdec = decoherence_time_at(sys, x0, horizon, s.dt);
  o << "state: " << to_string(s.state.kind) << ", centroid (" << x0.vec().transpose() << ")\n";
  o << "t_dec at the initial centroid = " << fmt(tdec);
  if (!std::isfinite(tdec) && !sys.unitary()) o << " (not reached by t = " << horizon << ")";
  o << "\n";

  const auto& g = s.grid;
  const GridSpec c = conjugate_spec(g);
  o << "grid: " << g.dims[0];
  for (int a = 1; a < g.rank(); ++a) o << " x " << g.dims[a];
  o << ", spacing " << fmt(g.spacing[0]) << ", half-width " << fmt(g.half_width(0)) << "\n";
  o << "chord grid: spacing " << fmt(c.spacing[0]) << ", half-width " << fmt(c.half_width(0))
    << " (Nyquist: centre features down to " << fmt(2.0 * g.spacing[0]) << ", chords up to " << fmt(c.half_width(0))
    << ")\n";
  double reach = 0.0;
  for (const auto& x : s.state.centres) reach = std::max(reach, x.vec().cwiseAbs().maxCoeff());
  if (s.state.kind == StateSpec::Kind::fock) reach = std::sqrt(s.hbar * (2.0 * s.state.fock_index + 1.0));
  const double need = reach + 5.0 * std::sqrt(s.hbar / 2.0);
  o << "state support needs half-width >= " << fmt(need) << (need <= g.half_width(0) ? " (ok)" : " (grid too small)")
    << "\n";

  o << "methods:\n";
  const double size = static_cast<double>(g.size());
  const double t_last = s.times.back();
  for (Method m : {Method::exact, Method::smallchord, Method::oracle}) {
    const bool wanted = s.has(m);
    o << "  " << to_string(m) << ": ";
    if (m == Method::exact && !s.hamiltonian.is_quadratic()) {
      o << "exact method unavailable (hamiltonian is not quadratic)\n";
      continue;
    }
    if (m == Method::oracle && (sys.dof() != 1 || s.hamiltonian.kind() == SmoothHamiltonian::Kind::pendulum)) {
      o << "oracle unavailable (needs N = 1 and a polynomial hamiltonian)\n";
      continue;
    }
    // Rough single-core cost models, calibrated on the desk grid.
    double seconds = 0.0;
    if (m == Method::exact) seconds = s.times.size() * size * size * 2e-9;
    if (m == Method::smallchord) {
      const double steps = std::ceil(t_last / s.policy.max_step);
      seconds = steps * (0.4 * size * (s.policy.max_step / s.dt) * 4e-7 + size * size * 4e-9);
    }
    if (m == Method::oracle) {
      const double d = s.truncation;
      seconds = t_last / s.oracle_dt * 4.0 * d * d * 40.0 * 1e-9 + s.times.size() * 0.2;
    }
    o << (wanted ? "requested" : "available") << ", estimated " << fmt(seconds) << " s\n";
  }
  return o.str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionError*>(&e)) return kExitConfig;
  if (dynamic_cast<const AccuracyError*>(&e)) return kExitAccuracy;
  if (dynamic_cast<const DivergenceError*>(&e)) return kExitDivergence;
  return kExitOther;
}

}  // namespace chordsim
