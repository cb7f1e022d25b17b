#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chordsim/errors.hpp"
#include "chordsim/grid_io.hpp"
#include "chordsim/scenario.hpp"

using namespace chordsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("chordsim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json damped_doc() {
  return json::parse(R"({
    "name": "damped",
    "hamiltonian": {"kind": "quadratic", "B": [[1, 0], [0, 1]]},
    "thermal": {"A": 0.2, "nu": 0},
    "state": {"kind": "coherent", "centre": [0, 2]},
    "times": [0.5, 1, 2],
    "methods": ["exact", "oracle"]
  })");
}

fs::path write_doc(const fs::path& dir, const std::string& name, const json& doc) {
  const fs::path p = dir / (name + ".json");
  std::ofstream(p) << doc.dump(2);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CHORDSIM_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto s = parse_scenario(damped_doc());
  CHECK(s.name == "damped");
  CHECK(s.system().gamma() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s.grid == GridSpec::desk());
  CHECK(s.times == std::vector<double>{0.5, 1, 2});
  CHECK(s.has(Method::exact));
  CHECK_FALSE(s.has(Method::smallchord));
  CHECK(s.hash.size() == 16);
  CHECK(parse_scenario(damped_doc()).hash == s.hash);
  auto other = damped_doc();
  other["times"] = {0.5, 1.0};
  CHECK(parse_scenario(other).hash != s.hash);

  auto explicit_channels = damped_doc();
  explicit_channels.erase("thermal");
  explicit_channels["channels"] = json::parse(R"([{"lp": [0, 0.3], "lpp": [0.3, 0]}, {"lp": [0, 1]}])");
  const auto e = parse_scenario(explicit_channels);
  CHECK(e.channels.size() == 2);
  CHECK(e.system().gamma() == doctest::Approx(0.09));

  auto defaults = damped_doc();
  defaults.erase("methods");
  CHECK(parse_scenario(defaults).methods == std::vector<Method>{Method::exact, Method::smallchord});
}

TEST_CASE("scenario errors") {
  const auto expect_config = [](json doc) { CHECK_THROWS_AS(parse_scenario(doc), ConfigError); };
  auto d = damped_doc();
  d["hamiltonian"] = {{"kind", "quartic"}};
  expect_config(d);  // exact needs a quadratic Hamiltonian
  d = damped_doc();
  d["times"] = {1.0, 0.5};
  expect_config(d);
  d = damped_doc();
  d["times"] = json::array();
  expect_config(d);
  d = damped_doc();
  d["colour"] = "blue";
  expect_config(d);
  d = damped_doc();
  d["methods"] = {"exact", "magic"};
  expect_config(d);
  d = damped_doc();
  d["methods"] = {"exact", "exact"};
  expect_config(d);
  d = damped_doc();
  d["hamiltonian"] = {{"kind", "harmonic"}, {"dof", 2}};
  d["state"]["centre"] = {0, 0, 1, 1};
  d["thermal"]["mode"] = 1;
  expect_config(d);  // oracle needs N = 1
  d["methods"] = {"exact"};
  CHECK_NOTHROW(parse_scenario(d));
  d = damped_doc();
  d["hamiltonian"] = {{"kind", "pendulum"}};
  d["methods"] = {"oracle"};
  expect_config(d);
  d = damped_doc();
  d["channels"] = json::array();
  expect_config(d);  // both channels and thermal
  d = damped_doc();
  d["hbar"] = -1.0;
  expect_config(d);
  d = damped_doc();
  d["state"] = {{"kind", "cat"}, {"centres", {{0, 1}}}};
  expect_config(d);
  d = damped_doc();
  d["grid"] = {{"n", 1}};
  expect_config(d);
  d = damped_doc();
  d["times"] = {"soon"};
  expect_config(d);

  const auto dir = scratch("errors");
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_scenario(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_scenario(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "commented.json") << "// a comment\n" << damped_doc().dump();
  CHECK(load_scenario(dir / "commented.json").name == "damped");
}

TEST_CASE("overrides and output directory") {
  const auto s = parse_scenario(damped_doc());
  RunOverrides o;
  o.methods = std::vector<Method>{Method::oracle};
  o.dt = 5e-4;
  const auto t = apply_overrides(s, o);
  CHECK(t.methods == std::vector<Method>{Method::oracle});
  CHECK(t.dt == 5e-4);
  RunOverrides bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(apply_overrides(s, bad), ConfigError);

  CHECK(resolve_output_dir(s, fs::path("/tmp/x")) == fs::path("/tmp/x"));
  ::setenv(kOutputRootEnv, "/tmp/root", 1);
  CHECK(resolve_output_dir(s, std::nullopt) == fs::path("/tmp/root/damped"));
  auto named = s;
  named.output = "elsewhere";
  CHECK(resolve_output_dir(named, std::nullopt) == fs::path("/tmp/root/elsewhere"));
  ::unsetenv(kOutputRootEnv);
  CHECK(resolve_output_dir(s, std::nullopt) == fs::path("./damped"));
}

TEST_CASE("describe") {
  const auto text = describe(parse_scenario(damped_doc()));
  CHECK(text.find("gamma = 0.1\n") != std::string::npos);
  CHECK(text.find("t_dec at the initial centroid = 3.46574") != std::string::npos);
  CHECK(text.find("Nyquist") != std::string::npos);
  CHECK(text.find("estimated") != std::string::npos);

  auto unitary = damped_doc();
  unitary.erase("thermal");
  unitary["channels"] = json::array();
  const auto u = describe(parse_scenario(unitary));
  CHECK(u.find("t_dec at the initial centroid = inf") != std::string::npos);
  CHECK(u.find("unitary limit") != std::string::npos);

  auto quartic = damped_doc();
  quartic["hamiltonian"] = {{"kind", "quartic"}};
  quartic["methods"] = {"smallchord", "oracle"};
  CHECK(describe(parse_scenario(quartic)).find("exact method unavailable") != std::string::npos);
}

TEST_CASE("run: damped oscillator, exact against oracle") {
  const auto dir = scratch("damped");
  const auto res = run(parse_scenario(damped_doc()), dir);
  REQUIRE(res.report.times.size() == 3);
  for (const auto& tr : res.report.times) {
    REQUIRE(tr.pairs.size() == 1);
    CHECK(tr.pairs[0].max_abs <= 1e-3);
    CHECK(tr.methods.at(Method::exact).chord_norm_defect <= 1e-9);
    CHECK(*tr.methods.at(Method::oracle).trace_defect <= 1e-10);
  }
  for (const char* f : {"exact_t0.psg", "exact_t2.csv", "oracle_t1.psg", "oracle_t2.dm", "report.json",
                        "centroid_flow.csv", "decoherence.csv"})
    CHECK(fs::exists(dir / f));
  const auto g = read_psg(dir / "exact_t1.psg");
  CHECK(g.spec() == GridSpec::desk());
  CHECK(read_dm(dir / "oracle_t0.dm").dim() == kDefaultTruncation);

  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep["gamma"].get<double>() == doctest::Approx(0.1));
  CHECK(rep["unitary_limit"] == false);
  CHECK(rep["times"].size() == 3);
  CHECK(rep["times"][0]["pairs"][0]["max_abs"].get<double>() <= 1e-3);
  CHECK(rep["provenance"]["scenario_hash"] == parse_scenario(damped_doc()).hash);
  CHECK(rep["provenance"]["version"] == kVersion);
  CHECK(rep["provenance"]["tolerances"].contains("hermiticity"));
  CHECK(slurp(dir / "decoherence.csv").rfind("t,det_M\n", 0) == 0);
  CHECK(slurp(dir / "centroid_flow.csv").rfind("t,p1,q1\n", 0) == 0);
}

TEST_CASE("run: unitary limit keeps purity") {
  auto doc = damped_doc();
  doc.erase("thermal");
  doc["channels"] = json::array();
  doc["grid"] = {{"n", 64}};
  doc["times"] = {0.5, 1.5};
  doc["methods"] = {"exact", "smallchord"};
  const auto res = run(parse_scenario(doc), scratch("unitary"));
  CHECK(res.report.unitary);
  for (const auto& [m, drift] : res.report.purity_drift) CHECK(drift <= 1e-6);
  const json rep = json::parse(slurp(res.directory / "report.json"));
  CHECK(rep["unitary_limit"] == true);
  CHECK(rep["t_dec"] == "inf");
  CHECK(rep["purity_drift"].contains("smallchord"));
  CHECK_FALSE(fs::exists(res.directory / "decoherence.csv"));
}

TEST_CASE("run is deterministic") {
  auto doc = damped_doc();
  doc["grid"] = {{"n", 64}};
  doc["times"] = {0.5, 1.0};
  doc["methods"] = {"exact", "smallchord", "oracle"};
  doc["seed"] = 7;
  const auto s = parse_scenario(doc);
  const auto a = run(s, scratch("det_a"));
  const auto b = run(s, scratch("det_b"));
  for (const char* f : {"exact_t1.psg", "smallchord_t0.psg", "smallchord_t1.psg", "oracle_t1.psg", "oracle_t1.dm"})
    CHECK(slurp(a.directory / f) == slurp(b.directory / f));
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(DimensionError("x")) == kExitConfig);
  CHECK(exit_code_for(AccuracyError("x")) == kExitAccuracy);
  CHECK(exit_code_for(DivergenceError("x")) == kExitDivergence);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitOther);
}

TEST_CASE("command line") {
  const auto dir = scratch("cli");
  auto doc = damped_doc();
  doc["grid"] = {{"n", 64}};
  doc["times"] = {0.5};
  const auto ok = write_doc(dir, "ok", doc);
  CHECK(run_cli("describe " + ok.string()) == kExitOk);
  CHECK(run_cli("run " + ok.string() + " --out " + (dir / "out").string()) == kExitOk);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(run_cli("run " + ok.string() + " --out " + (dir / "out2").string() + " --methods exact --dt 0.002") == kExitOk);
  CHECK(fs::exists(dir / "out2" / "exact_t0.psg"));
  CHECK_FALSE(fs::exists(dir / "out2" / "oracle_t0.psg"));

  const std::string env = std::string(kOutputRootEnv) + "=" + (dir / "root").string() + " ";
  CHECK(std::system((env + CHORDSIM_CLI + " run " + ok.string() + " > /dev/null 2>&1").c_str()) == 0);
  CHECK(fs::exists(dir / "root" / "damped" / "report.json"));

  auto quartic = doc;
  quartic["hamiltonian"] = {{"kind", "quartic"}};
  CHECK(run_cli("run " + write_doc(dir, "quartic", quartic).string()) == kExitConfig);
  CHECK(run_cli("run " + ok.string() + " --methods bogus") == kExitConfig);
  CHECK(run_cli("run " + ok.string() + " --dt -1") == kExitConfig);
  CHECK(run_cli("run " + (dir / "missing.json").string()) == kExitConfig);
  CHECK(run_cli("") == kExitConfig);
  CHECK(run_cli("frobnicate") == kExitConfig);

  auto far = doc;
  far["state"]["centre"] = {0, 7};
  CHECK(run_cli("run " + write_doc(dir, "far", far).string() + " --out " + (dir / "far").string()) == kExitAccuracy);

  auto unstable = doc;
  unstable["hamiltonian"]["B"] = {{0, 1}, {1, 0}};
  unstable["times"] = {1000};
  unstable["methods"] = {"smallchord"};
  CHECK(run_cli("run " + write_doc(dir, "unstable", unstable).string() + " --out " + (dir / "unstable").string()) ==
        kExitDivergence);

  CHECK(run_cli("run " + ok.string() + " --out /proc/chordsim_forbidden") == kExitOther);
}

TEST_CASE("shipped scenarios parse") {
  for (const auto& entry : fs::directory_iterator(CHORDSIM_SCENARIOS)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(describe(load_scenario(entry.path())));
  }
}
