// Command-line front end: runs sweep scenarios (built-in presets or JSON
// files) and writes BER/MSE curves as CSV or JSON.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secofdm/errors.hpp"
#include "secofdm/simulate.hpp"

namespace {

using namespace secofdm;

Scenario load_scenario(const std::string& arg) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) {
    return preset(arg);
  }
  std::ifstream in(arg, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scenario '" + arg +
                  "' (not a preset name or readable file; see 'secofdm scenario list')");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_from_json(text.str());
}

std::string describe(const Scenario& sc) {
  std::ostringstream out;
  out << sc.name << ": " << scheme_name(sc.scheme) << ", " << sweep_axis_name(sc.sweep_axis)
      << " {";
  for (std::size_t i = 0; i < sc.sweep_values.size(); ++i) {
    if (i > 0) out << ", ";
    out << sc.sweep_values[i];
  }
  out << "}, N=" << sc.cfg.n_subcarriers << ", n_tx=" << sc.cfg.n_tx;
  if (sc.gamma_b > 0.0) out << ", gamma_b=" << sc.gamma_b;
  return out.str();
}

int run_simulate(const std::string& scenario_arg, std::uint64_t trials, bool trials_set,
                 std::uint64_t seed, bool seed_set, const std::string& out_path,
                 const std::string& format, std::size_t workers, bool emit_plot) {
  Scenario sc = load_scenario(scenario_arg);
  if (trials_set) sc.trials = static_cast<std::size_t>(trials);
  if (seed_set) sc.master_seed = seed;
  sc.validate();

  if (emit_plot && (out_path.empty() || format != "csv")) {
    throw ConfigError("--emit-plotscript requires --out and csv format");
  }

  std::vector<CurvePoint> points = run_scenario(sc, workers);

  if (out_path.empty()) {
    std::cout << (format == "csv" ? results_to_csv(points) : results_to_json(points));
  } else {
    emit_results(points, out_path, format);
    std::cerr << "wrote " << points.size() << " points to " << out_path << "\n";
  }
  if (emit_plot) {
    const std::string script_path = out_path + ".gnuplot";
    std::ofstream script(script_path, std::ios::binary);
    if (!script) throw IoError("cannot open plot script file: " + script_path);
    script << plot_script(out_path, sc);
    std::cerr << "wrote plot script to " << script_path << "\n";
  }

  bool all_infeasible = true;
  for (const CurvePoint& p : points) {
    if (!p.diagnostic.empty()) {
      std::cerr << "sweep value " << p.sweep_value << ": " << p.diagnostic << "\n";
    }
    all_infeasible = all_infeasible && p.infeasible;
  }
  return all_infeasible ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO-OFDM physical-layer security simulator"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
  std::size_t workers = 0;
  bool emit_plot = false;

  CLI::App* sim = app.add_subcommand("simulate", "Run a sweep scenario");
  sim->add_option("--scenario", scenario_arg, "Preset name or path to a scenario JSON file")
      ->required();
  CLI::Option* trials_opt =
      sim->add_option("--trials", trials, "Override the scenario trial count");
  CLI::Option* seed_opt = sim->add_option("--seed", seed, "Override the master seed");
  sim->add_option("--out", out_path, "Output file (default: print to stdout)");
  sim->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  sim->add_flag("--emit-plotscript", emit_plot,
                "Also write a gnuplot script next to the CSV output");

  CLI::App* scenario_cmd = app.add_subcommand("scenario", "Scenario utilities");
  CLI::App* list_cmd = scenario_cmd->add_subcommand("list", "List built-in presets");
  scenario_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& name : secofdm::preset_names()) {
        std::cout << describe(secofdm::preset(name)) << "\n";
      }
      return 0;
    }
    return run_simulate(scenario_arg, trials, trials_opt->count() > 0, seed,
                        seed_opt->count() > 0, out_path, format, workers, emit_plot);
  } catch (const secofdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
