#include "secofdm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "secofdm/channel.hpp"
#include "secofdm/errors.hpp"
#include "secofdm/modulation.hpp"
#include "secofdm/precoding.hpp"
#include "secofdm/receivers.hpp"
#include "secofdm/rng.hpp"
#include "secofdm/transmit.hpp"
#include "json_util.hpp"

namespace secofdm {

using detail::config_from_json;
using detail::config_to_json;
using detail::get_field;
using detail::njson;
using detail::require_known_keys;

namespace {

struct TrialOutcome {
  std::size_t bit_errors_bob = 0;
  std::size_t bit_errors_eve = 0;
  std::size_t bits = 0;
  double mse_bob = 0.0;  // squared symbol error summed over the frame
  double mse_eve = 0.0;
  bool infeasible = false;
  std::string diagnostic;
};

// Equalizes one receiver subcarrier by subcarrier. Each data stream lives on
// a single subcarrier, so the cascade splits into independent n_rx-by-k
// blocks; filtering them separately is equivalent to the full-frame MMSE
// receiver but avoids the block-diagonal detour. Streams are visited in
// ascending (subcarrier, column) order so floating-point accumulation is
// reproducible.
void score_receiver(const ReceivedFrame& rx, const std::vector<ComplexMatrix>& subs,
                    const ComplexMatrix& w_t,
                    const std::vector<std::vector<std::size_t>>& cols_by_subcarrier,
                    const SymbolFrame& frame, const OfdmConfig& cfg, std::size_t n_rx,
                    std::size_t& bit_errors, double& mse) {
  const std::size_t n = cfg.n_subcarriers;
  const std::size_t nt = cfg.n_tx;
  for (std::size_t sub = 0; sub < n; ++sub) {
    const auto& cols = cols_by_subcarrier[sub];
    if (cols.empty()) continue;
    const std::size_t k = cols.size();

    ComplexMatrix a(n_rx, k);
    for (std::size_t r = 0; r < n_rx; ++r) {
      for (std::size_t j = 0; j < k; ++j) {
        cxd acc = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
          acc += subs[sub](r, i) * w_t(sub * nt + i, cols[j]);
        }
        a(r, j) = acc;
      }
    }
    ComplexMatrix w = mmse_filter(a, rx.noise_var);

    for (std::size_t j = 0; j < k; ++j) {
      cxd est = 0.0;
      for (std::size_t r = 0; r < n_rx; ++r) {
        est += std::conj(w(r, j)) * rx.y[sub * n_rx + r];
      }
      const std::size_t c = cols[j];
      const cxd err = est - frame.symbols[c];
      mse += std::norm(err);
      bit_errors += ((est.real() < 0.0) != (frame.bits[2 * c] != 0));
      bit_errors += ((est.imag() < 0.0) != (frame.bits[2 * c + 1] != 0));
    }
  }
}

TrialOutcome run_trial(const OfdmConfig& cfg, Scheme scheme, double gamma,
                       std::uint64_t trial_seed) {
  TrialOutcome out;
  ChannelRealization ch = draw_channel(cfg, derive_seed(trial_seed, 1));

  SecureFilterSet fs;
  try {
    switch (scheme) {
      case Scheme::mmse_filter:
        fs = design_mse_filter(ch.h_subs(), cfg);
        break;
      case Scheme::svd_baseline:
        fs = svd_baseline_filter(ch.h_subs(), cfg);
        break;
      case Scheme::mmse_filter_capped:
      case Scheme::mmse_filter_an:
        fs = design_mse_filter_capped(ch.h_subs(), cfg, gamma);
        break;
    }
  } catch (const InfeasibleError& e) {
    out.infeasible = true;
    out.diagnostic = e.what();
    return out;
  }

  std::optional<std::vector<cxd>> an;
  if (scheme == Scheme::mmse_filter_an && fs.alloc.residual > 0.0) {
    ComplexMatrix q_a = an_basis(ch.h_block(), cfg);
    an = generate_an(q_a, fs.alloc.residual, derive_seed(trial_seed, 4));
  }

  const std::size_t n_streams = fs.w_t.cols();
  std::vector<int> bits = random_bits(2 * n_streams, derive_seed(trial_seed, 2));
  SymbolFrame frame = modulate(bits);

  auto [rx_bob, rx_eve] = transmit(frame, fs.w_t, an, ch, cfg, derive_seed(trial_seed, 3));

  std::vector<std::vector<std::size_t>> cols_by_subcarrier(cfg.n_subcarriers);
  for (std::size_t c = 0; c < fs.stream_subcarrier.size(); ++c) {
    cols_by_subcarrier[fs.stream_subcarrier[c]].push_back(c);
  }

  out.bits = 2 * n_streams;
  score_receiver(rx_bob, ch.h_subs(), fs.w_t, cols_by_subcarrier, frame, cfg, cfg.n_rx_bob,
                 out.bit_errors_bob, out.mse_bob);
  score_receiver(rx_eve, ch.g_subs(), fs.w_t, cols_by_subcarrier, frame, cfg, cfg.n_rx_eve,
                 out.bit_errors_eve, out.mse_eve);
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_scheme_gamma(const Scenario& sc, double sweep_value) {
  return sc.sweep_axis == SweepAxis::mse_cap ? sweep_value : sc.gamma_b;
}

OfdmConfig point_config(const Scenario& sc, double sweep_value) {
  OfdmConfig cfg = sc.cfg;
  switch (sc.sweep_axis) {
    case SweepAxis::transmit_power_db:
      cfg.total_power = std::pow(10.0, sweep_value / 10.0);
      break;
    case SweepAxis::n_tx_antennas:
      cfg.n_tx = static_cast<std::size_t>(std::llround(sweep_value));
      break;
    case SweepAxis::mse_cap:
      break;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void Scenario::validate() const {
  cfg.validate();
  if (cfg.noise_var <= 0.0) {
    throw ConfigError("scenario requires noise_var > 0");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (sweep_values.empty()) throw ConfigError("sweep_values must be nonempty");
  for (std::size_t i = 1; i < sweep_values.size(); ++i) {
    if (!(sweep_values[i] > sweep_values[i - 1])) {
      throw ConfigError("sweep_values must be strictly increasing");
    }
  }
  const bool capped_scheme =
      scheme == Scheme::mmse_filter_an || scheme == Scheme::mmse_filter_capped;
  if (sweep_axis == SweepAxis::mse_cap) {
    if (!capped_scheme) {
      throw ConfigError("mse_cap sweep requires the mmse_filter_an or mmse_filter_capped scheme");
    }
    for (double v : sweep_values) {
      if (!(v > 0.0)) throw ConfigError("mse_cap sweep values must be positive");
    }
  } else if (capped_scheme && !(gamma_b > 0.0)) {
    throw ConfigError("gamma_b must be positive for the mmse_filter_an and "
                      "mmse_filter_capped schemes");
  }
  if (sweep_axis == SweepAxis::n_tx_antennas) {
    for (double v : sweep_values) {
      if (v < 1.0 || v != std::floor(v)) {
        throw ConfigError("n_tx_antennas sweep values must be positive integers");
      }
    }
  }
}

WilsonInterval wilson_interval(std::size_t errors, std::size_t total) {
  WilsonInterval out;
  if (total == 0) return out;
  constexpr double z = 1.959963984540054;  // 97.5th percentile of the normal
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  out.center = (p + z2 / (2.0 * n)) / denom;
  out.half_width = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return out;
}

std::vector<CurvePoint> run_scenario(const Scenario& sc, std::size_t workers) {
  sc.validate();
  if (workers == 0) {
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }

  std::vector<CurvePoint> points;
  points.reserve(sc.sweep_values.size());

  for (std::size_t pi = 0; pi < sc.sweep_values.size(); ++pi) {
    const double value = sc.sweep_values[pi];
    const OfdmConfig cfg = point_config(sc, value);
    const double gamma = parse_scheme_gamma(sc, value);
    const std::uint64_t point_seed = derive_seed(sc.master_seed, pi);

    std::vector<TrialOutcome> outcomes(sc.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= sc.trials) break;
        try {
          outcomes[t] = run_trial(cfg, sc.scheme, gamma, derive_seed(point_seed, t));
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };

    if (workers <= 1 || sc.trials == 1) {
      body();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
      for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CurvePoint pt;
    pt.sweep_value = value;
    std::size_t errors_bob = 0;
    std::size_t errors_eve = 0;
    std::size_t bits_total = 0;
    std::size_t completed = 0;
    std::size_t infeasible_count = 0;
    std::string first_diag;
    for (const TrialOutcome& o : outcomes) {
      if (o.infeasible) {
        ++infeasible_count;
        if (first_diag.empty()) first_diag = o.diagnostic;
        continue;
      }
      errors_bob += o.bit_errors_bob;
      errors_eve += o.bit_errors_eve;
      bits_total += o.bits;
      pt.mse_bob += o.mse_bob;
      pt.mse_eve += o.mse_eve;
      ++completed;
    }

    pt.trials_run = completed;
    if (completed > 0) {
      pt.ber_bob = static_cast<double>(errors_bob) / static_cast<double>(bits_total);
      pt.ber_eve = static_cast<double>(errors_eve) / static_cast<double>(bits_total);
      pt.ci95_bob = wilson_interval(errors_bob, bits_total).half_width;
      pt.ci95_eve = wilson_interval(errors_eve, bits_total).half_width;
      pt.mse_bob /= static_cast<double>(completed);
      pt.mse_eve /= static_cast<double>(completed);
    } else {
      pt.infeasible = true;
    }
    if (infeasible_count > 0) {
      std::ostringstream diag;
      diag << infeasible_count << " of " << sc.trials << " trials infeasible";
      if (!first_diag.empty()) diag << ": " << first_diag;
      pt.diagnostic = diag.str();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

std::string results_to_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << "sweep_value,ber_bob,ci95_bob,ber_eve,ci95_eve,mse_bob,mse_eve,trials\n";
  for (const CurvePoint& p : points) {
    out << format_g17(p.sweep_value) << ',' << format_g17(p.ber_bob) << ','
        << format_g17(p.ci95_bob) << ',' << format_g17(p.ber_eve) << ','
        << format_g17(p.ci95_eve) << ',' << format_g17(p.mse_bob) << ','
        << format_g17(p.mse_eve) << ',' << p.trials_run << '\n';
  }
  return out.str();
}

std::string results_to_json(const std::vector<CurvePoint>& points) {
  njson arr = njson::array();
  for (const CurvePoint& p : points) {
    njson row;
    row["sweep_value"] = p.sweep_value;
    row["ber_bob"] = p.ber_bob;
    row["ci95_bob"] = p.ci95_bob;
    row["ber_eve"] = p.ber_eve;
    row["ci95_eve"] = p.ci95_eve;
    row["mse_bob"] = p.mse_bob;
    row["mse_eve"] = p.mse_eve;
    row["trials"] = p.trials_run;
    row["infeasible"] = p.infeasible;
    if (!p.diagnostic.empty()) row["diagnostic"] = p.diagnostic;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

void emit_results(const std::vector<CurvePoint>& points, const std::string& path,
                  const std::string& format) {
  std::string body;
  if (format == "csv") {
    body = results_to_csv(points);
  } else if (format == "json") {
    body = results_to_json(points);
  } else {
    throw ConfigError("unknown output format '" + format + "' (expected csv or json)");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << body;
  if (!out) throw IoError("failed writing output file: " + path);
}

std::string plot_script(const std::string& csv_path, const Scenario& sc) {
  std::ostringstream out;
  out << "set datafile separator ','\n";
  out << "set title '" << (sc.name.empty() ? scheme_name(sc.scheme) : sc.name) << "'\n";
  out << "set xlabel '" << sweep_axis_name(sc.sweep_axis) << "'\n";
  out << "set ylabel 'bit error rate'\n";
  out << "set logscale y\n";
  out << "set grid\n";
  out << "set key top right\n";
  out << "plot '" << csv_path
      << "' skip 1 using 1:2:3 with yerrorlines title 'Bob', \\\n     '" << csv_path
      << "' skip 1 using 1:4:5 with yerrorlines title 'Eve'\n";
  return out.str();
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::mmse_filter: return "mmse_filter";
    case Scheme::svd_baseline: return "svd_baseline";
    case Scheme::mmse_filter_an: return "mmse_filter_an";
    case Scheme::mmse_filter_capped: return "mmse_filter_capped";
  }
  throw ConfigError("invalid scheme value");
}

std::string sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::transmit_power_db: return "transmit_power_db";
    case SweepAxis::n_tx_antennas: return "n_tx_antennas";
    case SweepAxis::mse_cap: return "mse_cap";
  }
  throw ConfigError("invalid sweep axis value");
}

namespace {

Scheme scheme_from_name(const std::string& s) {
  if (s == "mmse_filter") return Scheme::mmse_filter;
  if (s == "svd_baseline") return Scheme::svd_baseline;
  if (s == "mmse_filter_an") return Scheme::mmse_filter_an;
  if (s == "mmse_filter_capped") return Scheme::mmse_filter_capped;
  throw ConfigError("unknown scheme '" + s +
                    "' (expected mmse_filter, svd_baseline, mmse_filter_an, or "
                    "mmse_filter_capped)");
}

SweepAxis sweep_axis_from_name(const std::string& s) {
  if (s == "transmit_power_db") return SweepAxis::transmit_power_db;
  if (s == "n_tx_antennas") return SweepAxis::n_tx_antennas;
  if (s == "mse_cap") return SweepAxis::mse_cap;
  throw ConfigError("unknown sweep_axis '" + s +
                    "' (expected transmit_power_db, n_tx_antennas, or mse_cap)");
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const njson::parse_error& e) {
    throw ConfigError(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario JSON must be an object");
  require_known_keys(j,
                     {"name", "config", "scheme", "sweep_axis", "sweep_values", "gamma_b",
                      "trials", "master_seed"},
                     "scenario");

  Scenario sc;
  if (j.contains("name")) sc.name = get_field<std::string>(j, "name", "scenario");
  if (!j.contains("config")) throw ConfigError("scenario is missing field 'config'");
  sc.cfg = config_from_json(j.at("config"), "scenario config");
  if (j.contains("scheme")) {
    sc.scheme = scheme_from_name(get_field<std::string>(j, "scheme", "scenario"));
  }
  if (j.contains("sweep_axis")) {
    sc.sweep_axis = sweep_axis_from_name(get_field<std::string>(j, "sweep_axis", "scenario"));
  }
  if (!j.contains("sweep_values")) throw ConfigError("scenario is missing field 'sweep_values'");
  if (!j.at("sweep_values").is_array()) {
    throw ConfigError("scenario field 'sweep_values' must be an array of numbers");
  }
  for (const auto& v : j.at("sweep_values")) {
    if (!v.is_number()) {
      throw ConfigError("scenario field 'sweep_values' must be an array of numbers");
    }
    sc.sweep_values.push_back(v.get<double>());
  }
  if (j.contains("gamma_b")) sc.gamma_b = get_field<double>(j, "gamma_b", "scenario");
  if (j.contains("trials")) sc.trials = get_field<std::size_t>(j, "trials", "scenario");
  if (j.contains("master_seed")) {
    sc.master_seed = get_field<std::uint64_t>(j, "master_seed", "scenario");
  }
  sc.validate();
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  njson j;
  if (!sc.name.empty()) j["name"] = sc.name;
  j["config"] = config_to_json(sc.cfg);
  j["scheme"] = scheme_name(sc.scheme);
  j["sweep_axis"] = sweep_axis_name(sc.sweep_axis);
  j["sweep_values"] = sc.sweep_values;
  j["gamma_b"] = sc.gamma_b;
  j["trials"] = sc.trials;
  j["master_seed"] = sc.master_seed;
  return j.dump(2) + "\n";
}

namespace {

OfdmConfig narrow_config() {
  OfdmConfig cfg;
  cfg.n_subcarriers = 64;
  cfg.cp_len = 16;
  cfg.n_tx = 4;
  cfg.n_rx_bob = 2;
  cfg.n_rx_eve = 2;
  cfg.n_streams = 2;
  cfg.n_taps = 8;
  cfg.noise_var = 1.0;
  cfg.total_power = 1.0;
  return cfg;
}

OfdmConfig wide_config() {
  OfdmConfig cfg = narrow_config();
  cfg.n_subcarriers = 128;
  cfg.cp_len = 32;
  cfg.n_taps = 16;
  return cfg;
}

Scenario make_preset(const std::string& name, const OfdmConfig& cfg, Scheme scheme,
                     SweepAxis axis, std::vector<double> values, double gamma_b) {
  Scenario sc;
  sc.name = name;
  sc.cfg = cfg;
  sc.scheme = scheme;
  sc.sweep_axis = axis;
  sc.sweep_values = std::move(values);
  sc.gamma_b = gamma_b;
  return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2-mmse", "fig2-svd", "fig3-mmse", "fig3-svd", "fig4-mmse",
          "fig4-svd",  "fig5-an",  "fig5-noan", "fig6-an",  "fig6-noan"};
}

Scenario preset(const std::string& name) {
  const std::vector<double> db_narrow{0, 4, 8, 12, 16, 20, 24};
  const std::vector<double> db_wide{0, 6, 12, 18, 24, 30};
  const std::vector<double> antennas{2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> db_high{30, 35, 40, 45, 50};
  const std::vector<double> caps{2, 5, 10, 20, 40};

  OfdmConfig at_20db = narrow_config();
  at_20db.total_power = 100.0;  // 20 dB over unit noise
  OfdmConfig at_50db = narrow_config();
  at_50db.total_power = 100000.0;  // 50 dB over unit noise

  if (name == "fig2-mmse") {
    return make_preset(name, narrow_config(), Scheme::mmse_filter,
                       SweepAxis::transmit_power_db, db_narrow, 0.0);
  }
  if (name == "fig2-svd") {
    return make_preset(name, narrow_config(), Scheme::svd_baseline,
                       SweepAxis::transmit_power_db, db_narrow, 0.0);
  }
  if (name == "fig3-mmse") {
    return make_preset(name, wide_config(), Scheme::mmse_filter, SweepAxis::transmit_power_db,
                       db_wide, 0.0);
  }
  if (name == "fig3-svd") {
    return make_preset(name, wide_config(), Scheme::svd_baseline, SweepAxis::transmit_power_db,
                       db_wide, 0.0);
  }
  if (name == "fig4-mmse") {
    return make_preset(name, at_20db, Scheme::mmse_filter, SweepAxis::n_tx_antennas, antennas,
                       0.0);
  }
  if (name == "fig4-svd") {
    return make_preset(name, at_20db, Scheme::svd_baseline, SweepAxis::n_tx_antennas, antennas,
                       0.0);
  }
  if (name == "fig5-an") {
    return make_preset(name, narrow_config(), Scheme::mmse_filter_an,
                       SweepAxis::transmit_power_db, db_high, 10.0);
  }
  if (name == "fig5-noan") {
    return make_preset(name, narrow_config(), Scheme::mmse_filter_capped,
                       SweepAxis::transmit_power_db, db_high, 10.0);
  }
  if (name == "fig6-an") {
    return make_preset(name, at_50db, Scheme::mmse_filter_an, SweepAxis::mse_cap, caps, 0.0);
  }
  if (name == "fig6-noan") {
    return make_preset(name, at_50db, Scheme::mmse_filter_capped, SweepAxis::mse_cap, caps, 0.0);
  }
  throw ConfigError("unknown preset '" + name + "'; run 'secofdm scenario list'");
}

}  // namespace secofdm
