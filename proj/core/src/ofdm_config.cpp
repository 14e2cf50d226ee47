#include "secofdm/ofdm_config.hpp"

#include <algorithm>
#include <string>

#include "secofdm/errors.hpp"

namespace secofdm {

void OfdmConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };

  if (n_subcarriers < 1 || cp_len < 1 || n_tx < 1 || n_rx_bob < 1 ||
      n_rx_eve < 1 || n_streams < 1 || n_taps < 1)
    fail("all counts must be >= 1");
  if (!(n_taps < cp_len))
    fail("n_taps (" + std::to_string(n_taps) + ") must be < cp_len (" +
         std::to_string(cp_len) + "): the CP must cover the delay spread");
  if (cp_len > n_subcarriers)
    fail("cp_len (" + std::to_string(cp_len) +
         ") must be <= n_subcarriers: the CP copies the symbol tail");
  if (n_streams > std::min(n_tx, n_rx_bob))
    fail("n_streams (" + std::to_string(n_streams) +
         ") must be <= min(n_tx, n_rx_bob) for the linear receiver to be "
         "well-posed");
  if (!(noise_var >= 0.0)) fail("noise_var must be >= 0");
  if (!(total_power >= 0.0)) fail("total_power must be >= 0");
}

bool operator==(const OfdmConfig& a, const OfdmConfig& b) {
  return a.n_subcarriers == b.n_subcarriers && a.cp_len == b.cp_len &&
         a.n_tx == b.n_tx && a.n_rx_bob == b.n_rx_bob &&
         a.n_rx_eve == b.n_rx_eve && a.n_streams == b.n_streams &&
         a.n_taps == b.n_taps && a.noise_var == b.noise_var &&
         a.total_power == b.total_power;
}

}  // namespace secofdm
