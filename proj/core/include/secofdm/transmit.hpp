#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "secofdm/channel.hpp"
#include "secofdm/complex_matrix.hpp"
#include "secofdm/modulation.hpp"
#include "secofdm/ofdm_config.hpp"

namespace secofdm {

// Frequency-domain samples seen by one receiver, subcarrier-major:
// y[n * n_rx + k] is subcarrier n at antenna k.
struct ReceivedFrame {
  std::vector<cxd> y;
  double noise_var = 0.0;
};

// Full link simulation for one frame: precode (x = w_t * s), per-antenna
// IFFT + cyclic prefix, optional artificial-noise injection in the time
// domain, multipath convolution, AWGN of variance cfg.noise_var per complex
// sample at each receiver, then CP removal + FFT.
//
// The channel is applied by direct tap convolution per antenna pair, which is
// algebraically identical to multiplying by the block Toeplitz matrix; the
// dense-operator route exists separately for verification. Bob's and Eve's
// noise use decorrelated sub-seeds of `seed`, so enabling AN or adding a
// receiver never shifts the other draws.
//
// `an`, when present, is a time-domain vector of length n_tx * (N + N_cp),
// antenna-major, added to the transmitted samples.
std::pair<ReceivedFrame, ReceivedFrame> transmit(
    const SymbolFrame& frame, const ComplexMatrix& w_t,
    const std::optional<std::vector<cxd>>& an, const ChannelRealization& ch,
    const OfdmConfig& cfg, std::uint64_t seed);

}  // namespace secofdm
