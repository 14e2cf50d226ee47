#pragma once

// Internal JSON helpers shared by the channel fixture and scenario codecs.

#include <json.hpp>
#include <set>
#include <string>

#include "secofdm/errors.hpp"
#include "secofdm/ofdm_config.hpp"

namespace secofdm::detail {

using njson = nlohmann::ordered_json;

// Unknown keys are configuration errors: silently ignoring a misspelled
// field would corrupt an experiment without any visible symptom.
inline void require_known_keys(const njson& j, const std::set<std::string>& allowed,
                               const std::string& context) {
  if (!j.is_object())
    throw ConfigError(context + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(context + ": unknown field '" + it.key() + "'");
}

template <typename T>
T get_field(const njson& j, const std::string& key, const std::string& context) {
  if (!j.contains(key))
    throw ConfigError(context + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(context + ": field '" + key + "': " + e.what());
  }
}

inline njson config_to_json(const OfdmConfig& c) {
  njson j;
  j["n_subcarriers"] = c.n_subcarriers;
  j["cp_len"] = c.cp_len;
  j["n_tx"] = c.n_tx;
  j["n_rx_bob"] = c.n_rx_bob;
  j["n_rx_eve"] = c.n_rx_eve;
  j["n_streams"] = c.n_streams;
  j["n_taps"] = c.n_taps;
  j["noise_var"] = c.noise_var;
  j["total_power"] = c.total_power;
  return j;
}

inline OfdmConfig config_from_json(const njson& j, const std::string& context) {
  require_known_keys(j,
                     {"n_subcarriers", "cp_len", "n_tx", "n_rx_bob", "n_rx_eve",
                      "n_streams", "n_taps", "noise_var", "total_power"},
                     context);
  OfdmConfig c;
  c.n_subcarriers = get_field<std::size_t>(j, "n_subcarriers", context);
  c.cp_len = get_field<std::size_t>(j, "cp_len", context);
  c.n_tx = get_field<std::size_t>(j, "n_tx", context);
  c.n_rx_bob = get_field<std::size_t>(j, "n_rx_bob", context);
  c.n_rx_eve = get_field<std::size_t>(j, "n_rx_eve", context);
  c.n_streams = get_field<std::size_t>(j, "n_streams", context);
  c.n_taps = get_field<std::size_t>(j, "n_taps", context);
  c.noise_var = get_field<double>(j, "noise_var", context);
  c.total_power = get_field<double>(j, "total_power", context);
  c.validate();
  return c;
}

}  // namespace secofdm::detail
