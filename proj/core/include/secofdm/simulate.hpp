#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secofdm/ofdm_config.hpp"

namespace secofdm {

enum class Scheme {
  mmse_filter,        // water-filled MSE-optimal precoder
  svd_baseline,       // per-subcarrier SVD with uniform power
  mmse_filter_an,     // min-power precoder at an MSE cap + artificial noise
  mmse_filter_capped  // min-power precoder at an MSE cap, leftover power idle
};

enum class SweepAxis { transmit_power_db, n_tx_antennas, mse_cap };

// One Monte Carlo experiment: a base config, a scheme, and a swept parameter.
struct Scenario {
  std::string name;  // optional label; presets carry one
  OfdmConfig cfg;
  Scheme scheme = Scheme::mmse_filter;
  SweepAxis sweep_axis = SweepAxis::transmit_power_db;
  std::vector<double> sweep_values;  // nonempty, strictly increasing
  double gamma_b = 0.0;              // MSE cap for the an/capped schemes
  std::size_t trials = 10000;
  std::uint64_t master_seed = 12345;

  void validate() const;  // throws ConfigError
};

// Aggregated result at one sweep value. BERs are raw error fractions; the
// ci95 fields are Wilson 95% half-widths. mse_* are mean empirical squared
// symbol errors per frame. When every trial at a point is infeasible the
// point is flagged and carries a diagnostic instead of statistics.
struct CurvePoint {
  double sweep_value = 0.0;
  double ber_bob = 0.0;
  double ber_eve = 0.0;
  double mse_bob = 0.0;
  double mse_eve = 0.0;
  double ci95_bob = 0.0;
  double ci95_eve = 0.0;
  std::size_t trials_run = 0;  // trials aggregated (excludes infeasible ones)
  bool infeasible = false;
  std::string diagnostic;
};

struct WilsonInterval {
  double center = 0.0;
  double half_width = 0.0;
};

// Wilson score interval at 95% confidence; well-behaved at low error counts.
WilsonInterval wilson_interval(std::size_t errors, std::size_t total);

// Runs every sweep point. Trials are sub-seeded as
// derive(derive(master_seed, point_index), trial_index), evaluated
// concurrently by `workers` threads (0 = hardware concurrency) and reduced in
// canonical trial order, so the output is identical for any worker count.
// Per-trial infeasibility (min-power cap unreachable for that channel draw)
// excludes the trial; a fully infeasible point is flagged and the sweep
// continues.
std::vector<CurvePoint> run_scenario(const Scenario& sc, std::size_t workers = 0);

std::string results_to_csv(const std::vector<CurvePoint>& points);
std::string results_to_json(const std::vector<CurvePoint>& points);

// format is "csv" or "json"; failures surface as IoError with the path.
void emit_results(const std::vector<CurvePoint>& points, const std::string& path,
                  const std::string& format);

// Gnuplot script that plots Bob/Eve BER curves from the CSV at csv_path.
std::string plot_script(const std::string& csv_path, const Scenario& sc);

// Built-in sweep presets (fig2-mmse, fig2-svd, fig3-mmse, fig3-svd, fig4-mmse,
// fig4-svd, fig5-an, fig5-noan, fig6-an, fig6-noan).
std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

// Strict JSON codec: unknown fields are rejected.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

std::string scheme_name(Scheme s);
std::string sweep_axis_name(SweepAxis a);

}  // namespace secofdm
