#include "secofdm/channel.hpp"

#include <cmath>
#include <string>

#include "json_util.hpp"
#include "secofdm/errors.hpp"
#include "secofdm/rng.hpp"

namespace secofdm {

ComplexMatrix toeplitz_block(const std::vector<cxd>& taps, std::size_t dim) {
  if (taps.size() > dim)
    throw ConfigError("toeplitz_block: " + std::to_string(taps.size()) +
                      " taps exceed dimension " + std::to_string(dim));
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = (r >= taps.size() ? r - taps.size() + 1 : 0); c <= r; ++c)
      m(r, c) = taps[r - c];
  return m;
}

ComplexMatrix cp_insert_matrix(std::size_t n, std::size_t ncp) {
  if (ncp > n) throw ConfigError("cp_insert_matrix: ncp > n");
  ComplexMatrix t(n + ncp, n);
  for (std::size_t i = 0; i < ncp; ++i) t(i, n - ncp + i) = 1.0;
  for (std::size_t i = 0; i < n; ++i) t(ncp + i, i) = 1.0;
  return t;
}

ComplexMatrix cp_remove_matrix(std::size_t n, std::size_t ncp) {
  ComplexMatrix r(n, n + ncp);
  for (std::size_t i = 0; i < n; ++i) r(i, ncp + i) = 1.0;
  return r;
}

ComplexMatrix effective_channel(const ComplexMatrix& block,
                                const OfdmConfig& cfg, std::size_t rx_antennas) {
  const std::size_t n = cfg.n_subcarriers, s = cfg.symbol_len(), nt = cfg.n_tx;
  if (block.rows() != rx_antennas * s || block.cols() != nt * s)
    throw ConfigError("effective_channel: block is " +
                      std::to_string(block.rows()) + "x" +
                      std::to_string(block.cols()) + ", expected " +
                      std::to_string(rx_antennas * s) + "x" +
                      std::to_string(nt * s));

  const ComplexMatrix f = dft_matrix(n);
  const ComplexMatrix fh = f.hermitian();
  const ComplexMatrix rcp = cp_remove_matrix(n, cfg.cp_len);
  const ComplexMatrix tcp = cp_insert_matrix(n, cfg.cp_len);

  std::vector<ComplexMatrix> reps;
  reps.assign(rx_antennas, f);
  const ComplexMatrix f_rx = block_diag(reps);
  reps.assign(rx_antennas, rcp);
  const ComplexMatrix r_big = block_diag(reps);
  reps.assign(nt, tcp);
  const ComplexMatrix t_big = block_diag(reps);
  reps.assign(nt, fh);
  const ComplexMatrix fh_tx = block_diag(reps);

  const ComplexMatrix raw =
      multiply(multiply(multiply(multiply(f_rx, r_big), block), t_big), fh_tx);

  // Antenna-major (antenna k, subcarrier n) -> subcarrier-major (n, k).
  ComplexMatrix out(rx_antennas * n, nt * n);
  for (std::size_t k = 0; k < rx_antennas; ++k)
    for (std::size_t nn = 0; nn < n; ++nn) {
      const cxd* src = raw.row_ptr(k * n + nn);
      cxd* dst = out.row_ptr(nn * rx_antennas + k);
      for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t nc = 0; nc < n; ++nc)
          dst[nc * nt + i] = src[i * n + nc];
    }
  return out;
}

namespace {

void check_taps(const TapSet& taps, std::size_t nrx, std::size_t ntx,
                std::size_t l, const char* which) {
  if (taps.size() != nrx)
    throw ConfigError(std::string(which) + ": expected " + std::to_string(nrx) +
                      " rx rows, got " + std::to_string(taps.size()));
  for (const auto& row : taps) {
    if (row.size() != ntx)
      throw ConfigError(std::string(which) + ": expected " + std::to_string(ntx) +
                        " tx entries per rx row");
    for (const auto& t : row)
      if (t.size() != l)
        throw ConfigError(std::string(which) + ": expected " + std::to_string(l) +
                          " taps per antenna pair");
  }
}

std::vector<ComplexMatrix> freq_blocks(const TapSet& taps, std::size_t nrx,
                                       std::size_t ntx, std::size_t l,
                                       std::size_t n) {
  // H_n(k, i) = sum_l taps[k][i][l] * exp(-2*pi*i*n*l/N): the frequency
  // response of each antenna pair sampled on the subcarrier grid.
  std::vector<cxd> w(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ang = -2.0 * M_PI * static_cast<double>(t) / static_cast<double>(n);
    w[t] = cxd(std::cos(ang), std::sin(ang));
  }
  std::vector<ComplexMatrix> out(n, ComplexMatrix(nrx, ntx));
  for (std::size_t k = 0; k < nrx; ++k)
    for (std::size_t i = 0; i < ntx; ++i)
      for (std::size_t nn = 0; nn < n; ++nn) {
        cxd acc = 0.0;
        for (std::size_t ll = 0; ll < l; ++ll)
          acc += taps[k][i][ll] * w[(nn * ll) % n];
        out[nn](k, i) = acc;
      }
  return out;
}

ComplexMatrix assemble_block(const TapSet& taps, std::size_t nrx,
                             std::size_t ntx, std::size_t s) {
  ComplexMatrix b(nrx * s, ntx * s);
  for (std::size_t k = 0; k < nrx; ++k)
    for (std::size_t i = 0; i < ntx; ++i)
      b.set_block(k * s, i * s, toeplitz_block(taps[k][i], s));
  return b;
}

}  // namespace

ChannelRealization ChannelRealization::from_taps(const OfdmConfig& cfg,
                                                 TapSet taps_bob, TapSet taps_eve,
                                                 std::uint64_t seed) {
  cfg.validate();
  check_taps(taps_bob, cfg.n_rx_bob, cfg.n_tx, cfg.n_taps, "taps_bob");
  check_taps(taps_eve, cfg.n_rx_eve, cfg.n_tx, cfg.n_taps, "taps_eve");

  ChannelRealization ch;
  ch.cfg = cfg;
  ch.seed = seed;
  ch.taps_bob = std::move(taps_bob);
  ch.taps_eve = std::move(taps_eve);
  ch.sub_bob_ = freq_blocks(ch.taps_bob, cfg.n_rx_bob, cfg.n_tx, cfg.n_taps,
                            cfg.n_subcarriers);
  ch.sub_eve_ = freq_blocks(ch.taps_eve, cfg.n_rx_eve, cfg.n_tx, cfg.n_taps,
                            cfg.n_subcarriers);
  return ch;
}

ComplexMatrix ChannelRealization::h_block() const {
  return assemble_block(taps_bob, cfg.n_rx_bob, cfg.n_tx, cfg.symbol_len());
}

ComplexMatrix ChannelRealization::g_block() const {
  return assemble_block(taps_eve, cfg.n_rx_eve, cfg.n_tx, cfg.symbol_len());
}

ComplexMatrix ChannelRealization::h_eff() const {
  return effective_channel(h_block(), cfg, cfg.n_rx_bob);
}

ComplexMatrix ChannelRealization::g_eff() const {
  return effective_channel(g_block(), cfg, cfg.n_rx_eve);
}

ChannelRealization draw_channel(const OfdmConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const double var = 1.0 / static_cast<double>(cfg.n_taps);
  auto draw = [&](std::size_t nrx, std::uint64_t subseed) {
    Rng rng(subseed);
    TapSet taps(nrx, std::vector<std::vector<cxd>>(
                         cfg.n_tx, std::vector<cxd>(cfg.n_taps)));
    for (std::size_t k = 0; k < nrx; ++k)
      for (std::size_t i = 0; i < cfg.n_tx; ++i)
        for (std::size_t l = 0; l < cfg.n_taps; ++l)
          taps[k][i][l] = rng.cgaussian(var);
    return taps;
  };
  TapSet tb = draw(cfg.n_rx_bob, derive_seed(seed, 1));
  TapSet te = draw(cfg.n_rx_eve, derive_seed(seed, 2));
  return ChannelRealization::from_taps(cfg, std::move(tb), std::move(te), seed);
}

std::string channel_to_json(const ChannelRealization& ch) {
  detail::njson j;
  j["config"] = detail::config_to_json(ch.cfg);
  j["seed"] = ch.seed;
  auto encode = [](const TapSet& taps) {
    detail::njson out = detail::njson::array();
    for (const auto& row : taps) {
      detail::njson jr = detail::njson::array();
      for (const auto& pair_taps : row) {
        detail::njson jt = detail::njson::array();
        for (const cxd& t : pair_taps)
          jt.push_back(detail::njson::array({t.real(), t.imag()}));
        jr.push_back(std::move(jt));
      }
      out.push_back(std::move(jr));
    }
    return out;
  };
  j["taps_bob"] = encode(ch.taps_bob);
  j["taps_eve"] = encode(ch.taps_eve);
  return j.dump(2);
}

ChannelRealization channel_from_json(const std::string& text) {
  detail::njson j;
  try {
    j = detail::njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("channel fixture: invalid JSON: ") + e.what());
  }
  detail::require_known_keys(j, {"config", "seed", "taps_bob", "taps_eve"},
                             "channel fixture");
  const OfdmConfig cfg =
      detail::config_from_json(j.at("config"), "channel fixture config");
  const auto seed = detail::get_field<std::uint64_t>(j, "seed", "channel fixture");

  auto decode = [](const detail::njson& arr, const char* which) {
    if (!arr.is_array())
      throw ConfigError(std::string("channel fixture: ") + which +
                        " must be an array");
    TapSet taps;
    for (const auto& row : arr) {
      std::vector<std::vector<cxd>> r;
      for (const auto& pair_taps : row) {
        std::vector<cxd> t;
        for (const auto& re_im : pair_taps) {
          if (!re_im.is_array() || re_im.size() != 2)
            throw ConfigError(std::string("channel fixture: ") + which +
                              " taps must be [re, im] pairs");
          t.emplace_back(re_im[0].get<double>(), re_im[1].get<double>());
        }
        r.push_back(std::move(t));
      }
      taps.push_back(std::move(r));
    }
    return taps;
  };

  return ChannelRealization::from_taps(cfg, decode(j.at("taps_bob"), "taps_bob"),
                                       decode(j.at("taps_eve"), "taps_eve"), seed);
}

}  // namespace secofdm
