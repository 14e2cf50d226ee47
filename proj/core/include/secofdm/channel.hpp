#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secofdm/complex_matrix.hpp"
#include "secofdm/ofdm_config.hpp"

namespace secofdm {

// taps[rx][tx] is the length-L impulse response of one antenna pair.
using TapSet = std::vector<std::vector<std::vector<cxd>>>;

// dim x dim lower-triangular Toeplitz convolution matrix:
// entry (r, c) = taps[r - c] for 0 <= r - c < L, else 0.
ComplexMatrix toeplitz_block(const std::vector<cxd>& taps, std::size_t dim);

// CP insertion (n+ncp) x n: prepends the last ncp samples of the symbol.
ComplexMatrix cp_insert_matrix(std::size_t n, std::size_t ncp);

// CP removal n x (n+ncp): drops the first ncp samples.
ComplexMatrix cp_remove_matrix(std::size_t n, std::size_t ncp);

// Frequency-domain effective channel: F * R_cp * block * T_cp * F^H evaluated
// as explicit dense products in exactly that association order (this is the
// deliberately naive reference path), then re-indexed from antenna-major to
// subcarrier-major so the result is block-diagonal with one rx x n_tx block
// per subcarrier. Output is (rx_antennas*N) x (n_tx*N).
ComplexMatrix effective_channel(const ComplexMatrix& block,
                                const OfdmConfig& cfg, std::size_t rx_antennas);

// One multipath draw for both receivers. Immutable after construction; the
// big operator matrices are assembled on demand from the stored taps (they
// are far too large to keep per trial), while the per-subcarrier frequency
// blocks are small and cached eagerly because every consumer needs them.
class ChannelRealization {
public:
  OfdmConfig cfg;
  std::uint64_t seed = 0;
  TapSet taps_bob;  // n_rx_bob x n_tx x L
  TapSet taps_eve;  // n_rx_eve x n_tx x L

  // Validates shapes and precomputes the per-subcarrier blocks.
  static ChannelRealization from_taps(const OfdmConfig& cfg, TapSet taps_bob,
                                      TapSet taps_eve, std::uint64_t seed = 0);

  // Time-domain block convolution matrices built from the Toeplitz pattern.
  ComplexMatrix h_block() const;  // n_rx_bob*(N+Ncp) x n_tx*(N+Ncp)
  ComplexMatrix g_block() const;  // n_rx_eve*(N+Ncp) x n_tx*(N+Ncp)

  // Subcarrier-major effective channels via the explicit-product path.
  ComplexMatrix h_eff() const;  // n_rx_bob*N x n_tx*N, block-diagonal
  ComplexMatrix g_eff() const;

  // Cached per-subcarrier frequency blocks (rx x n_tx each).
  const ComplexMatrix& h_sub(std::size_t n) const { return sub_bob_[n]; }
  const ComplexMatrix& g_sub(std::size_t n) const { return sub_eve_[n]; }
  const std::vector<ComplexMatrix>& h_subs() const { return sub_bob_; }
  const std::vector<ComplexMatrix>& g_subs() const { return sub_eve_; }

private:
  std::vector<ComplexMatrix> sub_bob_, sub_eve_;
};

// Rayleigh taps, i.i.d. circularly-symmetric complex Gaussian with variance
// 1/L per tap (unit average gain per antenna pair). Bob and Eve use
// independent sub-seeds derived from `seed`.
ChannelRealization draw_channel(const OfdmConfig& cfg, std::uint64_t seed);

// JSON fixture round-trip: config, seed, taps as [re, im] pairs.
std::string channel_to_json(const ChannelRealization& ch);
ChannelRealization channel_from_json(const std::string& text);

}  // namespace secofdm
