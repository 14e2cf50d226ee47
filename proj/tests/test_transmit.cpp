#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "secofdm/channel.hpp"
#include "secofdm/errors.hpp"
#include "secofdm/modulation.hpp"
#include "secofdm/precoding.hpp"
#include "secofdm/rng.hpp"
#include "secofdm/transmit.hpp"
#include "test_util.hpp"

using namespace secofdm;
using testutil::random_matrix;
using testutil::vec_norm;

namespace {

OfdmConfig tiny_config(std::size_t n, std::size_t ncp, std::size_t ntx, std::size_t nrx,
                       std::size_t ntaps) {
  OfdmConfig cfg;
  cfg.n_subcarriers = n;
  cfg.cp_len = ncp;
  cfg.n_tx = ntx;
  cfg.n_rx_bob = nrx;
  cfg.n_rx_eve = nrx;
  cfg.n_streams = std::min(ntx, nrx);
  cfg.n_taps = ntaps;
  cfg.noise_var = 0.0;  // most tests probe the noiseless chain
  return cfg;
}

TapSet identity_taps(std::size_t rx, std::size_t tx) {
  TapSet taps(rx, std::vector<std::vector<cxd>>(tx, std::vector<cxd>{cxd(0.0)}));
  for (std::size_t k = 0; k < rx; ++k) {
    for (std::size_t i = 0; i < tx; ++i) taps[k][i][0] = (k == i) ? cxd(1.0) : cxd(0.0);
  }
  return taps;
}

TapSet zero_taps(std::size_t rx, std::size_t tx) {
  return TapSet(rx, std::vector<std::vector<cxd>>(tx, std::vector<cxd>{cxd(0.0)}));
}

// Antenna-major dense reference for one receiver:
//   y = F_blk R_blk B (T_blk F_blk^H x + z_a)
// with x the antenna-major precoded frequency vector. This evaluates the
// operator chain exactly as written, independent of the FFT/convolution
// fast path used by transmit().
std::vector<cxd> dense_reference(const ComplexMatrix& conv_block, const OfdmConfig& cfg,
                                 std::size_t n_rx, const std::vector<cxd>& x_freq_submajor,
                                 const std::vector<cxd>& an) {
  const std::size_t n = cfg.n_subcarriers;
  const std::size_t ntx = cfg.n_tx;
  ComplexMatrix f = dft_matrix(n);
  ComplexMatrix f_rx = block_diag(std::vector<ComplexMatrix>(n_rx, f));
  ComplexMatrix fh_tx = block_diag(std::vector<ComplexMatrix>(ntx, f.hermitian()));
  ComplexMatrix t_blk =
      block_diag(std::vector<ComplexMatrix>(ntx, cp_insert_matrix(n, cfg.cp_len)));
  ComplexMatrix r_blk =
      block_diag(std::vector<ComplexMatrix>(n_rx, cp_remove_matrix(n, cfg.cp_len)));

  // subcarrier-major (n*ntx + i) -> antenna-major (i*n + n)
  std::vector<cxd> x_am(ntx * n);
  for (std::size_t sub = 0; sub < n; ++sub) {
    for (std::size_t i = 0; i < ntx; ++i) x_am[i * n + sub] = x_freq_submajor[sub * ntx + i];
  }

  std::vector<cxd> time = multiply(t_blk, multiply(fh_tx, x_am));
  for (std::size_t i = 0; i < an.size(); ++i) time[i] += an[i];
  std::vector<cxd> y_am = multiply(f_rx, multiply(r_blk, multiply(conv_block, time)));

  std::vector<cxd> y_sm(n_rx * n);
  for (std::size_t k = 0; k < n_rx; ++k) {
    for (std::size_t sub = 0; sub < n; ++sub) y_sm[sub * n_rx + k] = y_am[k * n + sub];
  }
  return y_sm;
}

}  // namespace

TEST_CASE("gray map fixed points") {
  SymbolFrame f = modulate({0, 0, 1, 1, 0, 1, 1, 0});
  const double r = 1.0 / std::sqrt(2.0);
  REQUIRE(f.symbols.size() == 4);
  CHECK(std::abs(f.symbols[0] - cxd(r, r)) < 1e-15);
  CHECK(std::abs(f.symbols[1] - cxd(-r, -r)) < 1e-15);
  CHECK(std::abs(f.symbols[2] - cxd(r, -r)) < 1e-15);
  CHECK(std::abs(f.symbols[3] - cxd(-r, r)) < 1e-15);
  for (const cxd& s : f.symbols) CHECK(std::norm(s) == doctest::Approx(1.0));
}

TEST_CASE("modulate rejects malformed bit vectors") {
  CHECK_THROWS_AS(modulate({0, 1, 0}), ConfigError);
  CHECK_THROWS_AS(modulate({0, 2}), ConfigError);
}

TEST_CASE("noiseless modulate-demodulate round trip") {
  for (std::uint64_t seed = 0; seed < 10000; seed += 250) {
    std::vector<int> bits = random_bits(64, seed);
    SymbolFrame f = modulate(bits);
    CHECK(demodulate(f.symbols) == bits);
  }
}

TEST_CASE("random bits are deterministic and balanced") {
  std::vector<int> a = random_bits(10000, 3);
  CHECK(a == random_bits(10000, 3));
  CHECK(a != random_bits(10000, 4));
  double mean = 0.0;
  for (int b : a) mean += b;
  mean /= 10000.0;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("transparent chain returns the symbols exactly") {
  OfdmConfig cfg = tiny_config(16, 4, 1, 1, 1);
  ChannelRealization ch =
      ChannelRealization::from_taps(cfg, identity_taps(1, 1), identity_taps(1, 1));
  std::vector<int> bits = random_bits(32, 9);
  SymbolFrame frame = modulate(bits);
  auto [bob, eve] = transmit(frame, ComplexMatrix::identity(16), std::nullopt, ch, cfg, 1);
  REQUIRE(bob.y.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(bob.y[i] - frame.symbols[i]) < 1e-12);
  CHECK(demodulate(bob.y) == bits);
  CHECK(demodulate(eve.y) == bits);
}

TEST_CASE("noiseless chain is linear in the symbols") {
  OfdmConfig cfg = tiny_config(8, 3, 2, 2, 2);
  ChannelRealization ch = draw_channel(cfg, 21);
  ComplexMatrix w_t = random_matrix(2 * 8, 2 * 8, 22, 1.0 / 16.0);

  std::vector<int> bits = random_bits(2 * 16, 23);
  SymbolFrame frame = modulate(bits);
  auto [y1, e1] = transmit(frame, w_t, std::nullopt, ch, cfg, 3);

  const cxd alpha(0.7, -1.3);
  SymbolFrame scaled = frame;
  for (cxd& s : scaled.symbols) s *= alpha;
  auto [y2, e2] = transmit(scaled, w_t, std::nullopt, ch, cfg, 3);

  for (std::size_t i = 0; i < y1.y.size(); ++i) CHECK(std::abs(y2.y[i] - alpha * y1.y[i]) < 1e-10);
  for (std::size_t i = 0; i < e1.y.size(); ++i) CHECK(std::abs(e2.y[i] - alpha * e1.y[i]) < 1e-10);
}

TEST_CASE("unitary chain preserves energy on an identity link") {
  OfdmConfig cfg = tiny_config(32, 8, 2, 2, 1);
  ChannelRealization ch =
      ChannelRealization::from_taps(cfg, identity_taps(2, 2), identity_taps(2, 2));
  ComplexMatrix w_t = ComplexMatrix::identity(2 * 32);
  std::vector<int> bits = random_bits(2 * 64, 31);
  SymbolFrame frame = modulate(bits);
  auto [bob, eve] = transmit(frame, w_t, std::nullopt, ch, cfg, 5);
  double sym_energy = 0.0;
  for (const cxd& s : frame.symbols) sym_energy += std::norm(s);
  CHECK(vec_norm(bob.y) == doctest::Approx(std::sqrt(sym_energy)).epsilon(1e-10));
}

TEST_CASE("fast path equals the dense operator chain") {
  // n = 6 exercises the non-power-of-two DFT path as well
  for (std::size_t n : {std::size_t(6), std::size_t(8)}) {
    OfdmConfig cfg = tiny_config(n, 3, 3, 2, 2);
    ChannelRealization ch = draw_channel(cfg, 40 + n);
    ComplexMatrix w_t = random_matrix(3 * n, 2 * n, 41, 0.5);
    std::vector<int> bits = random_bits(2 * 2 * n, 42);
    SymbolFrame frame = modulate(bits);

    auto [bob, eve] = transmit(frame, w_t, std::nullopt, ch, cfg, 7);

    std::vector<cxd> x_freq = multiply(w_t, frame.symbols);
    std::vector<cxd> want_bob =
        dense_reference(ch.h_block(), cfg, 2, x_freq, std::vector<cxd>(3 * (n + 3), cxd(0.0)));
    std::vector<cxd> want_eve =
        dense_reference(ch.g_block(), cfg, 2, x_freq, std::vector<cxd>(3 * (n + 3), cxd(0.0)));

    REQUIRE(bob.y.size() == want_bob.size());
    for (std::size_t i = 0; i < want_bob.size(); ++i) {
      CHECK(std::abs(bob.y[i] - want_bob[i]) < 1e-10);
    }
    for (std::size_t i = 0; i < want_eve.size(); ++i) {
      CHECK(std::abs(eve.y[i] - want_eve[i]) < 1e-10);
    }
  }
}

TEST_CASE("noiseless received frame equals the effective channel product") {
  OfdmConfig cfg = tiny_config(8, 3, 2, 2, 2);
  ChannelRealization ch = draw_channel(cfg, 51);
  ComplexMatrix w_t = random_matrix(2 * 8, 2 * 8, 52, 0.25);
  std::vector<int> bits = random_bits(2 * 16, 53);
  SymbolFrame frame = modulate(bits);
  auto [bob, eve] = transmit(frame, w_t, std::nullopt, ch, cfg, 8);

  std::vector<cxd> want = multiply(ch.h_eff(), multiply(w_t, frame.symbols));
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(bob.y[i] - want[i]) < 1e-10);
}

TEST_CASE("artificial noise vanishes at bob and persists at eve") {
  OfdmConfig cfg = tiny_config(16, 4, 3, 2, 3);
  cfg.n_streams = 2;
  ChannelRealization ch = draw_channel(cfg, 61);
  ComplexMatrix q_a = an_basis(ch.h_block(), cfg);
  std::vector<cxd> z_a = generate_an(q_a, 5.0, 62);

  ComplexMatrix w_t = random_matrix(3 * 16, 2 * 16, 63, 0.25);
  std::vector<int> bits = random_bits(2 * 32, 64);
  SymbolFrame frame = modulate(bits);

  auto [bob_an, eve_an] = transmit(frame, w_t, z_a, ch, cfg, 9);
  auto [bob_plain, eve_plain] = transmit(frame, w_t, std::nullopt, ch, cfg, 9);

  double diff_bob = 0.0, diff_eve = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < bob_an.y.size(); ++i) {
    diff_bob += std::norm(bob_an.y[i] - bob_plain.y[i]);
    ref += std::norm(bob_plain.y[i]);
  }
  for (std::size_t i = 0; i < eve_an.y.size(); ++i) {
    diff_eve += std::norm(eve_an.y[i] - eve_plain.y[i]);
  }
  CHECK(std::sqrt(diff_bob) < 1e-8 * std::sqrt(ref));
  CHECK(std::sqrt(diff_eve) > 1e-6 * vec_norm(z_a));

  SUBCASE("eve frame with AN matches the dense chain") {
    std::vector<cxd> x_freq = multiply(w_t, frame.symbols);
    std::vector<cxd> want = dense_reference(ch.g_block(), cfg, 2, x_freq, z_a);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(eve_an.y[i] - want[i]) < 1e-10);
    }
  }
}

TEST_CASE("awgn calibration at the documented variance") {
  OfdmConfig cfg = tiny_config(64, 16, 1, 2, 1);
  cfg.noise_var = 2.5;
  ChannelRealization ch =
      ChannelRealization::from_taps(cfg, zero_taps(2, 1), zero_taps(2, 1));
  ComplexMatrix w_t(64, 64);  // zero precoder; received samples are pure noise

  std::vector<int> bits = random_bits(2 * 64, 70);
  SymbolFrame frame = modulate(bits);

  double acc = 0.0;
  std::size_t count = 0;
  for (std::uint64_t t = 0; t < 800; ++t) {
    auto [bob, eve] = transmit(frame, w_t, std::nullopt, ch, cfg, 1000 + t);
    for (const cxd& v : bob.y) acc += std::norm(v);
    count += bob.y.size();
  }
  CHECK(count >= 100000);
  CHECK(acc / static_cast<double>(count) == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("noise draws are decorrelated between receivers and stable under AN") {
  OfdmConfig cfg = tiny_config(8, 3, 2, 2, 2);
  cfg.noise_var = 1.0;
  ChannelRealization ch = draw_channel(cfg, 81);
  ComplexMatrix w_t = random_matrix(16, 16, 82, 0.25);
  std::vector<int> bits = random_bits(32, 83);
  SymbolFrame frame = modulate(bits);

  auto [bob1, eve1] = transmit(frame, w_t, std::nullopt, ch, cfg, 11);
  auto [bob2, eve2] = transmit(frame, w_t, std::nullopt, ch, cfg, 11);
  for (std::size_t i = 0; i < bob1.y.size(); ++i) CHECK(bob1.y[i] == bob2.y[i]);

  // adding AN must not shift the noise streams: subtracting the AN-free frame
  // leaves exactly the AN contribution, identical noise in both runs
  OfdmConfig cfg_an = cfg;
  cfg_an.n_tx = 3;
  cfg_an.n_streams = 2;
  ChannelRealization ch_an = draw_channel(cfg_an, 84);
  ComplexMatrix w_an = random_matrix(24, 16, 85, 0.25);
  ComplexMatrix q_a = an_basis(ch_an.h_block(), cfg_an);
  std::vector<cxd> z_a = generate_an(q_a, 2.0, 86);
  auto [bob_a, eve_a] = transmit(frame, w_an, z_a, ch_an, cfg_an, 12);
  auto [bob_b, eve_b] = transmit(frame, w_an, std::nullopt, ch_an, cfg_an, 12);
  for (std::size_t i = 0; i < bob_a.y.size(); ++i) {
    CHECK(std::abs(bob_a.y[i] - bob_b.y[i]) < 1e-8);  // nulled at bob, same noise
  }
}

TEST_CASE("transmit validates geometry") {
  OfdmConfig cfg = tiny_config(8, 3, 2, 2, 2);
  ChannelRealization ch = draw_channel(cfg, 91);
  std::vector<int> bits = random_bits(2 * 16, 92);
  SymbolFrame frame = modulate(bits);

  ComplexMatrix bad_rows = random_matrix(15, 16, 93);
  CHECK_THROWS_AS(transmit(frame, bad_rows, std::nullopt, ch, cfg, 1), ConfigError);

  ComplexMatrix w_t = random_matrix(16, 16, 94);
  std::vector<cxd> bad_an(5, cxd(0.0));
  CHECK_THROWS_AS(transmit(frame, w_t, bad_an, ch, cfg, 1), ConfigError);

  OfdmConfig other = cfg;
  other.n_subcarriers = 16;
  other.cp_len = 4;
  CHECK_THROWS_AS(transmit(frame, w_t, std::nullopt, ch, other, 1), ConfigError);
}
