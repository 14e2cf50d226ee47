#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "secofdm/errors.hpp"
#include "secofdm/simulate.hpp"

using namespace secofdm;

namespace {

OfdmConfig tiny_config() {
  OfdmConfig cfg;
  cfg.n_subcarriers = 16;
  cfg.cp_len = 4;
  cfg.n_tx = 3;
  cfg.n_rx_bob = 2;
  cfg.n_rx_eve = 2;
  cfg.n_streams = 2;
  cfg.n_taps = 3;
  cfg.noise_var = 1.0;
  cfg.total_power = 1.0;
  return cfg;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) fields.push_back(f);
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("wilson interval: hand values, symmetry, bounds, and shrinkage") {
  // Empty sample carries no information.
  WilsonInterval empty = wilson_interval(0, 0);
  CHECK(empty.center == 0.0);
  CHECK(empty.half_width == 0.0);

  // At p-hat = 1/2 the score interval is centered exactly at 1/2.
  WilsonInterval half = wilson_interval(50, 100);
  CHECK(half.center == doctest::Approx(0.5).epsilon(1e-15));

  // Swapping successes and failures mirrors the interval around 1/2.
  WilsonInterval lo = wilson_interval(3, 40);
  WilsonInterval hi = wilson_interval(37, 40);
  CHECK(lo.center + hi.center == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lo.half_width == doctest::Approx(hi.half_width).epsilon(1e-14));

  // The interval always stays inside [0, 1], even at the boundary counts
  // where the plain normal approximation would escape.
  for (std::size_t n : {1u, 2u, 7u, 40u, 1000u}) {
    for (std::size_t e : {std::size_t{0}, n / 2, n}) {
      WilsonInterval w = wilson_interval(e, n);
      CHECK(w.center - w.half_width >= -1e-15);
      CHECK(w.center + w.half_width <= 1.0 + 1e-15);
      CHECK(w.half_width > 0.0);
    }
  }

  // Zero observed errors still yields a strictly positive upper bound.
  WilsonInterval zero = wilson_interval(0, 500);
  CHECK(zero.center > 0.0);
  CHECK(zero.center + zero.half_width > 0.0);
  CHECK(zero.center + zero.half_width < 0.02);

  // Width shrinks roughly like 1/sqrt(n) at fixed p-hat.
  CHECK(wilson_interval(30, 100).half_width >
        2.5 * wilson_interval(300, 1000).half_width * 0.9);
  CHECK(wilson_interval(30, 100).half_width >
        wilson_interval(300, 1000).half_width);
}

TEST_CASE("wilson interval: empirical coverage near the nominal 95 percent") {
  std::mt19937 gen(12345);
  const double p = 0.3;
  const std::size_t n = 200;
  std::binomial_distribution<int> binom(static_cast<int>(n), p);
  int covered = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    const std::size_t e = static_cast<std::size_t>(binom(gen));
    WilsonInterval w = wilson_interval(e, n);
    if (p >= w.center - w.half_width && p <= w.center + w.half_width) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  CHECK(coverage > 0.90);
  CHECK(coverage <= 0.995);
}

TEST_CASE("scenario json round trip preserves every field") {
  Scenario sc;
  sc.name = "roundtrip";
  sc.cfg = tiny_config();
  sc.cfg.noise_var = 2.5;
  sc.cfg.total_power = 7.0;
  sc.scheme = Scheme::mmse_filter_an;
  sc.sweep_axis = SweepAxis::transmit_power_db;
  sc.sweep_values = {1.0, 2.5, 30.0};
  sc.gamma_b = 3.5;
  sc.trials = 77;
  sc.master_seed = 999;

  Scenario back = scenario_from_json(scenario_to_json(sc));
  CHECK(back.name == sc.name);
  CHECK(back.cfg.n_subcarriers == sc.cfg.n_subcarriers);
  CHECK(back.cfg.cp_len == sc.cfg.cp_len);
  CHECK(back.cfg.n_tx == sc.cfg.n_tx);
  CHECK(back.cfg.n_rx_bob == sc.cfg.n_rx_bob);
  CHECK(back.cfg.n_rx_eve == sc.cfg.n_rx_eve);
  CHECK(back.cfg.n_streams == sc.cfg.n_streams);
  CHECK(back.cfg.n_taps == sc.cfg.n_taps);
  CHECK(back.cfg.noise_var == sc.cfg.noise_var);
  CHECK(back.cfg.total_power == sc.cfg.total_power);
  CHECK(back.scheme == sc.scheme);
  CHECK(back.sweep_axis == sc.sweep_axis);
  CHECK(back.sweep_values == sc.sweep_values);
  CHECK(back.gamma_b == sc.gamma_b);
  CHECK(back.trials == sc.trials);
  CHECK(back.master_seed == sc.master_seed);
}

TEST_CASE("scenario json rejects malformed input") {
  const std::string good = scenario_to_json(preset("fig2-mmse"));

  CHECK_THROWS_AS(scenario_from_json("not json at all"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json("[1,2,3]"), ConfigError);

  nlohmann::json j = nlohmann::json::parse(good);

  nlohmann::json extra = j;
  extra["bogus"] = 1;
  CHECK_THROWS_AS(scenario_from_json(extra.dump()), ConfigError);

  nlohmann::json extra_cfg = j;
  extra_cfg["config"]["bogus"] = 1;
  CHECK_THROWS_AS(scenario_from_json(extra_cfg.dump()), ConfigError);

  nlohmann::json no_cfg = j;
  no_cfg.erase("config");
  CHECK_THROWS_AS(scenario_from_json(no_cfg.dump()), ConfigError);

  nlohmann::json no_values = j;
  no_values.erase("sweep_values");
  CHECK_THROWS_AS(scenario_from_json(no_values.dump()), ConfigError);

  nlohmann::json bad_values = j;
  bad_values["sweep_values"] = "abc";
  CHECK_THROWS_AS(scenario_from_json(bad_values.dump()), ConfigError);

  nlohmann::json bad_scheme = j;
  bad_scheme["scheme"] = "zf";
  CHECK_THROWS_AS(scenario_from_json(bad_scheme.dump()), ConfigError);

  nlohmann::json bad_axis = j;
  bad_axis["sweep_axis"] = "bandwidth";
  CHECK_THROWS_AS(scenario_from_json(bad_axis.dump()), ConfigError);
}

TEST_CASE("scenario validation rejects inconsistent setups") {
  Scenario base = preset("fig2-mmse");
  CHECK_NOTHROW(base.validate());

  Scenario s = base;
  s.trials = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = base;
  s.sweep_values.clear();
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = base;
  s.sweep_values = {4.0, 4.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = base;
  s.sweep_values = {8.0, 4.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);

  // An MSE-cap sweep only makes sense for the cap-constrained schemes.
  s = base;
  s.sweep_axis = SweepAxis::mse_cap;
  s.sweep_values = {1.0, 2.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.scheme = Scheme::mmse_filter_an;
  CHECK_NOTHROW(s.validate());
  s.sweep_values = {-1.0, 2.0};
  CHECK_THROWS_AS(s.validate(), ConfigError);

  // Cap-constrained schemes on other axes need a positive target.
  s = base;
  s.scheme = Scheme::mmse_filter_capped;
  s.gamma_b = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.gamma_b = 10.0;
  CHECK_NOTHROW(s.validate());

  s = base;
  s.sweep_axis = SweepAxis::n_tx_antennas;
  s.sweep_values = {2.0, 2.5};
  CHECK_THROWS_AS(s.validate(), ConfigError);

  s = base;
  s.cfg.noise_var = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("presets all exist, validate, and survive serialization") {
  const std::vector<std::string> names = preset_names();
  CHECK(names.size() == 10);
  for (const std::string& n : names) {
    Scenario sc = preset(n);
    CHECK(sc.name == n);
    CHECK_NOTHROW(sc.validate());
    Scenario back = scenario_from_json(scenario_to_json(sc));
    CHECK(back.name == sc.name);
    CHECK(back.sweep_values == sc.sweep_values);
    CHECK(back.scheme == sc.scheme);
  }

  Scenario f2 = preset("fig2-mmse");
  CHECK(f2.cfg.n_subcarriers == 64);
  CHECK(f2.cfg.n_taps == 8);
  CHECK(f2.sweep_values.front() == 0.0);
  CHECK(f2.sweep_values.back() == 24.0);

  Scenario f3 = preset("fig3-svd");
  CHECK(f3.cfg.n_subcarriers == 128);
  CHECK(f3.cfg.cp_len == 32);
  CHECK(f3.cfg.n_taps == 16);
  CHECK(f3.scheme == Scheme::svd_baseline);

  Scenario f4 = preset("fig4-mmse");
  CHECK(f4.sweep_axis == SweepAxis::n_tx_antennas);
  CHECK(f4.cfg.total_power == 100.0);
  CHECK(f4.sweep_values.size() == 9);

  Scenario f5 = preset("fig5-an");
  CHECK(f5.scheme == Scheme::mmse_filter_an);
  CHECK(f5.gamma_b == 10.0);

  Scenario f6 = preset("fig6-noan");
  CHECK(f6.scheme == Scheme::mmse_filter_capped);
  CHECK(f6.sweep_axis == SweepAxis::mse_cap);
  CHECK(f6.cfg.total_power == 100000.0);

  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("simulation output is identical across repeat runs and worker counts") {
  Scenario sc;
  sc.name = "determinism";
  sc.cfg = preset("fig2-mmse").cfg;
  sc.scheme = Scheme::mmse_filter;
  sc.sweep_axis = SweepAxis::transmit_power_db;
  sc.sweep_values = {12.0, 24.0};
  sc.trials = 25;
  sc.master_seed = 4242;

  const std::string csv1 = results_to_csv(run_scenario(sc, 1));
  const std::string csv2 = results_to_csv(run_scenario(sc, 1));
  const std::string csv3 = results_to_csv(run_scenario(sc, 3));
  CHECK(csv1 == csv2);
  CHECK(csv1 == csv3);

  // Sanity of the aggregated statistics themselves.
  std::vector<CurvePoint> pts = run_scenario(sc, 2);
  REQUIRE(pts.size() == 2);
  for (const CurvePoint& p : pts) {
    CHECK(p.trials_run == 25);
    CHECK_FALSE(p.infeasible);
    CHECK(p.ber_bob >= 0.0);
    CHECK(p.ber_bob < 0.5);
    CHECK(p.ber_eve > 0.0);
    CHECK(p.ber_eve < 1.0);
    CHECK(p.ci95_bob > 0.0);
    CHECK(p.ci95_eve > 0.0);
    CHECK(p.mse_bob > 0.0);
    CHECK(p.mse_eve > p.mse_bob);  // the filter is matched to Bob, not Eve
    CHECK(p.ber_eve > p.ber_bob);
  }
}

TEST_CASE("artificial-noise scheme is deterministic across worker counts") {
  Scenario sc;
  sc.name = "an-determinism";
  sc.cfg = tiny_config();
  sc.scheme = Scheme::mmse_filter_an;
  sc.sweep_axis = SweepAxis::transmit_power_db;
  sc.sweep_values = {30.0};
  sc.gamma_b = 8.0;
  sc.trials = 12;
  sc.master_seed = 777;

  const std::string one = results_to_csv(run_scenario(sc, 1));
  const std::string two = results_to_csv(run_scenario(sc, 2));
  CHECK(one == two);
  CHECK(one != results_to_csv(run_scenario([&] {
          Scenario other = sc;
          other.master_seed = 778;
          return other;
        }(), 1)));
}

TEST_CASE("csv serialization: exact header, one row per point, round-trip values") {
  CHECK(results_to_csv({}) ==
        "sweep_value,ber_bob,ci95_bob,ber_eve,ci95_eve,mse_bob,mse_eve,trials\n");

  CurvePoint a;
  a.sweep_value = 4.0;
  a.ber_bob = 0.015625;
  a.ci95_bob = 0.30000000000000004;  // not exactly representable in decimal
  a.ber_eve = 0.25;
  a.ci95_eve = 1.0 / 3.0;
  a.mse_bob = 1e-300;
  a.mse_eve = 12345.678901234567;
  a.trials_run = 10000;

  CurvePoint b;
  b.sweep_value = 8.0;
  b.infeasible = true;
  b.diagnostic = "3 of 3 trials infeasible";

  const std::string csv = results_to_csv({a, b});
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "sweep_value,ber_bob,ci95_bob,ber_eve,ci95_eve,mse_bob,mse_eve,trials");

  const std::vector<std::string> row = split_fields(lines[1]);
  REQUIRE(row.size() == 8);
  CHECK(std::stod(row[0]) == a.sweep_value);
  CHECK(std::stod(row[1]) == a.ber_bob);
  CHECK(std::stod(row[2]) == a.ci95_bob);
  CHECK(std::stod(row[3]) == a.ber_eve);
  CHECK(std::stod(row[4]) == a.ci95_eve);
  CHECK(std::stod(row[5]) == a.mse_bob);
  CHECK(std::stod(row[6]) == a.mse_eve);
  CHECK(row[7] == "10000");

  const std::vector<std::string> row2 = split_fields(lines[2]);
  REQUIRE(row2.size() == 8);
  CHECK(std::stod(row2[0]) == 8.0);
  CHECK(row2[7] == "0");
}

TEST_CASE("json serialization mirrors the csv and carries infeasibility") {
  CurvePoint a;
  a.sweep_value = 4.0;
  a.ber_bob = 0.125;
  a.ber_eve = 0.25;
  a.ci95_bob = 0.01;
  a.ci95_eve = 0.02;
  a.mse_bob = 3.5;
  a.mse_eve = 9.75;
  a.trials_run = 42;

  CurvePoint b;
  b.sweep_value = 8.0;
  b.infeasible = true;
  b.diagnostic = "5 of 5 trials infeasible: cap unreachable";

  nlohmann::json arr = nlohmann::json::parse(results_to_json({a, b}));
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 2);

  CHECK(arr[0]["sweep_value"].get<double>() == 4.0);
  CHECK(arr[0]["ber_bob"].get<double>() == 0.125);
  CHECK(arr[0]["ci95_eve"].get<double>() == 0.02);
  CHECK(arr[0]["mse_eve"].get<double>() == 9.75);
  CHECK(arr[0]["trials"].get<std::size_t>() == 42);
  CHECK(arr[0]["infeasible"].get<bool>() == false);
  CHECK_FALSE(arr[0].contains("diagnostic"));

  CHECK(arr[1]["infeasible"].get<bool>() == true);
  CHECK(arr[1]["trials"].get<std::size_t>() == 0);
  CHECK(arr[1]["diagnostic"].get<std::string>() ==
        "5 of 5 trials infeasible: cap unreachable");
}

TEST_CASE("emit_results writes files and reports io failures") {
  CurvePoint a;
  a.sweep_value = 1.0;
  a.ber_bob = 0.5;
  a.trials_run = 3;
  const std::vector<CurvePoint> pts{a};

  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string csv_path = (dir / "secofdm_emit_test.csv").string();
  const std::string json_path = (dir / "secofdm_emit_test.json").string();

  emit_results(pts, csv_path, "csv");
  CHECK(read_file(csv_path) == results_to_csv(pts));

  emit_results(pts, json_path, "json");
  CHECK(read_file(json_path) == results_to_json(pts));
  CHECK_NOTHROW(nlohmann::json::parse(read_file(json_path)));

  CHECK_THROWS_AS(emit_results(pts, csv_path, "xml"), ConfigError);
  CHECK_THROWS_AS(emit_results(pts, "/nonexistent-dir-xyz/out.csv", "csv"), IoError);

  std::remove(csv_path.c_str());
  std::remove(json_path.c_str());
}

TEST_CASE("gnuplot script references the data file and both receiver curves") {
  Scenario sc = preset("fig2-mmse");
  const std::string script = plot_script("results/fig2.csv", sc);
  CHECK(script.find("results/fig2.csv") != std::string::npos);
  CHECK(script.find("plot '") != std::string::npos);
  CHECK(script.find("'Bob'") != std::string::npos);
  CHECK(script.find("'Eve'") != std::string::npos);
  CHECK(script.find("logscale y") != std::string::npos);
  CHECK(script.find("using 1:2:3") != std::string::npos);
  CHECK(script.find("using 1:4:5") != std::string::npos);
  CHECK(script.find(sc.name) != std::string::npos);
}

TEST_CASE("unreachable mse caps mark points infeasible without poisoning the rest") {
  Scenario sc;
  sc.name = "cap-sweep";
  sc.cfg = tiny_config();
  sc.cfg.total_power = 0.01;  // starve the power budget
  sc.scheme = Scheme::mmse_filter_capped;
  sc.sweep_axis = SweepAxis::mse_cap;
  // Total MSE over the 32 streams is 32 with zero power; a cap of 0.5 is
  // hopeless at this budget while 31.99 needs only a sliver of power.
  sc.sweep_values = {0.5, 31.99};
  sc.trials = 6;
  sc.master_seed = 7;

  std::vector<CurvePoint> pts = run_scenario(sc, 2);
  REQUIRE(pts.size() == 2);

  CHECK(pts[0].infeasible);
  CHECK(pts[0].trials_run == 0);
  CHECK(pts[0].diagnostic.find("6 of 6 trials infeasible") != std::string::npos);
  CHECK(pts[0].ber_bob == 0.0);

  CHECK_FALSE(pts[1].infeasible);
  CHECK(pts[1].trials_run == 6);
  CHECK(pts[1].diagnostic.empty());
  CHECK(pts[1].mse_bob > 0.0);

  nlohmann::json arr = nlohmann::json::parse(results_to_json(pts));
  CHECK(arr[0]["infeasible"].get<bool>() == true);
  CHECK(arr[0].contains("diagnostic"));
  CHECK(arr[1]["infeasible"].get<bool>() == false);
}

TEST_CASE("baseline scheme error rate falls as transmit power rises") {
  Scenario sc;
  sc.name = "monotonic";
  sc.cfg = preset("fig2-svd").cfg;
  sc.scheme = Scheme::svd_baseline;
  sc.sweep_axis = SweepAxis::transmit_power_db;
  sc.sweep_values = {0.0, 24.0};
  sc.trials = 1500;
  sc.master_seed = 99;

  std::vector<CurvePoint> pts = run_scenario(sc, 0);
  REQUIRE(pts.size() == 2);
  // Separation must hold beyond the 95% intervals, not just on point values.
  CHECK(pts[0].ber_bob - pts[0].ci95_bob > pts[1].ber_bob + pts[1].ci95_bob);
}

TEST_CASE("golden regression: power-sweep csv matches the recorded fixture") {
  Scenario sc = preset("fig2-mmse");
  sc.trials = 2;
  sc.master_seed = 777;

  const std::string expected = read_file(std::string(SECOFDM_TEST_DATA_DIR) +
                                         "/golden_fig2_mmse_t2_s777.csv");
  CHECK(results_to_csv(run_scenario(sc, 2)) == expected);
}
