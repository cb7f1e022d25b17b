#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chordsim/errors.hpp"
#include "chordsim/scenario.hpp"

namespace {

std::vector<chordsim::Method> split_methods(const std::string& csv) {
  std::vector<chordsim::Method> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(chordsim::method_from_string(item));
  if (out.empty()) throw chordsim::ConfigError("--methods needs at least one method");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space simulator for open quantum systems"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::string methods;
  double dt = 0.0;

  auto* run = app.add_subcommand("run", "Run a scenario and write grids, CSV and report.json");
  run->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: $" + std::string(chordsim::kOutputRootEnv) + "/<name>)");
  run->add_option("--methods", methods, "Comma-separated subset of exact,smallchord,oracle");
  run->add_option("--dt", dt, "Integrator step")->check(CLI::PositiveNumber);

  auto* describe = app.add_subcommand("describe", "Print derived quantities of a scenario");
  describe->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chordsim::kExitOk : chordsim::kExitConfig;
  }

  try {
    chordsim::Scenario s = chordsim::load_scenario(scenario_path);
    if (describe->parsed()) {
      std::cout << chordsim::describe(s);
      return chordsim::kExitOk;
    }
    chordsim::RunOverrides o;
    if (!out_dir.empty()) o.out = out_dir;
    if (!methods.empty()) o.methods = split_methods(methods);
    if (dt > 0.0) o.dt = dt;
    s = chordsim::apply_overrides(std::move(s), o);
    const auto result = chordsim::run(s, chordsim::resolve_output_dir(s, o.out));
    std::cout << "wrote " << result.directory.string() << "\n";
    for (const auto& tr : result.report.times)
      for (const auto& p : tr.pairs)
        std::cout << "t = " << tr.t << "  " << chordsim::to_string(p.a) << " vs " << chordsim::to_string(p.b)
                  << ": max-abs " << p.max_abs << ", L2 " << p.l2 << "\n";
    if (result.report.unitary) std::cout << "unitary limit: no channels\n";
    return chordsim::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return chordsim::exit_code_for(e);
  }
}
