#pragma once

#include <cstddef>

namespace secofdm {

// System dimensions and powers for one simulated link.
//
// noise_var is the total complex noise variance per receive sample, identical
// at both receivers; total_power is the transmit power budget in linear units.
// The power axis of the sweep presets is P_t in dB relative to noise_var = 1.
struct OfdmConfig {
  std::size_t n_subcarriers = 64;  // N
  std::size_t cp_len = 16;         // N_cp
  std::size_t n_tx = 4;            // N_A
  std::size_t n_rx_bob = 2;        // N_B
  std::size_t n_rx_eve = 2;        // N_E
  std::size_t n_streams = 2;       // N_s
  std::size_t n_taps = 8;          // L
  double noise_var = 1.0;
  double total_power = 1.0;

  // Throws ConfigError on violation. noise_var == 0 is tolerated as a
  // noiseless diagnostic hook; receiver design still requires noise_var > 0.
  void validate() const;

  std::size_t symbol_len() const { return n_subcarriers + cp_len; }
  std::size_t n_data_streams() const { return n_streams * n_subcarriers; }
};

bool operator==(const OfdmConfig& a, const OfdmConfig& b);

}  // namespace secofdm
