#include "secofdm/transmit.hpp"

#include <string>

#include "fft.hpp"
#include "secofdm/errors.hpp"
#include "secofdm/rng.hpp"

namespace secofdm {

namespace {

void check_same_geometry(const OfdmConfig& a, const OfdmConfig& b) {
  if (a.n_subcarriers != b.n_subcarriers || a.cp_len != b.cp_len ||
      a.n_tx != b.n_tx || a.n_rx_bob != b.n_rx_bob || a.n_rx_eve != b.n_rx_eve ||
      a.n_taps != b.n_taps)
    throw ConfigError(
        "transmit: config geometry does not match the channel realization");
}

}  // namespace

std::pair<ReceivedFrame, ReceivedFrame> transmit(
    const SymbolFrame& frame, const ComplexMatrix& w_t,
    const std::optional<std::vector<cxd>>& an, const ChannelRealization& ch,
    const OfdmConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  check_same_geometry(cfg, ch.cfg);
  const std::size_t n = cfg.n_subcarriers, ncp = cfg.cp_len, s = cfg.symbol_len();
  const std::size_t na = cfg.n_tx;

  if (w_t.rows() != na * n)
    throw ConfigError("transmit: w_t has " + std::to_string(w_t.rows()) +
                      " rows, expected " + std::to_string(na * n));
  if (frame.symbols.size() != w_t.cols())
    throw ConfigError("transmit: frame carries " +
                      std::to_string(frame.symbols.size()) +
                      " symbols but w_t has " + std::to_string(w_t.cols()) +
                      " columns");
  if (an && an->size() != na * s)
    throw ConfigError("transmit: an has length " + std::to_string(an->size()) +
                      ", expected " + std::to_string(na * s));

  const std::vector<cxd> x_freq = multiply(w_t, frame.symbols);

  // Per-antenna IFFT and cyclic prefix, antenna-major time layout.
  std::vector<cxd> x_time(na * s);
  std::vector<cxd> scratch(n);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t nn = 0; nn < n; ++nn) scratch[nn] = x_freq[nn * na + a];
    detail::fft_unitary_inplace(scratch, /*inverse=*/true);
    for (std::size_t i = 0; i < ncp; ++i) x_time[a * s + i] = scratch[n - ncp + i];
    for (std::size_t i = 0; i < n; ++i) x_time[a * s + ncp + i] = scratch[i];
  }
  if (an)
    for (std::size_t t = 0; t < x_time.size(); ++t) x_time[t] += (*an)[t];

  auto receive = [&](const TapSet& taps, std::size_t nrx, std::uint64_t nseed) {
    std::vector<cxd> y_time(nrx * s);
    for (std::size_t k = 0; k < nrx; ++k)
      for (std::size_t i = 0; i < na; ++i) {
        const std::vector<cxd>& h = taps[k][i];
        const cxd* x = x_time.data() + i * s;
        cxd* y = y_time.data() + k * s;
        for (std::size_t l = 0; l < h.size(); ++l) {
          const cxd c = h[l];
          for (std::size_t t = l; t < s; ++t) y[t] += c * x[t - l];
        }
      }

    if (cfg.noise_var > 0.0) {
      Rng rng(nseed);
      for (cxd& v : y_time) v += rng.cgaussian(cfg.noise_var);
    }

    ReceivedFrame f;
    f.noise_var = cfg.noise_var;
    f.y.resize(nrx * n);
    std::vector<cxd> v(n);
    for (std::size_t k = 0; k < nrx; ++k) {
      for (std::size_t i = 0; i < n; ++i) v[i] = y_time[k * s + ncp + i];
      detail::fft_unitary_inplace(v, /*inverse=*/false);
      for (std::size_t nn = 0; nn < n; ++nn) f.y[nn * nrx + k] = v[nn];
    }
    return f;
  };

  ReceivedFrame bob = receive(ch.taps_bob, cfg.n_rx_bob, derive_seed(seed, 1));
  ReceivedFrame eve = receive(ch.taps_eve, cfg.n_rx_eve, derive_seed(seed, 2));
  return {std::move(bob), std::move(eve)};
}

}  // namespace secofdm
