// Micro-benchmarks for the hot paths: dense complex multiplies, the dense
// effective-channel chain, per-subcarrier SVDs, the power solvers, the
// artificial-noise basis, and a full simulated frame.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "secofdm/channel.hpp"
#include "secofdm/linalg.hpp"
#include "secofdm/modulation.hpp"
#include "secofdm/precoding.hpp"
#include "secofdm/rng.hpp"
#include "secofdm/transmit.hpp"

namespace {

using namespace secofdm;

OfdmConfig config_for(std::size_t n_subcarriers) {
  OfdmConfig cfg;
  cfg.n_subcarriers = n_subcarriers;
  cfg.cp_len = n_subcarriers / 4;
  cfg.n_taps = n_subcarriers / 8;
  cfg.total_power = 100.0;
  return cfg;
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = rng.cgaussian(1.0);
  return m;
}

void BM_MatmulSquare(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ComplexMatrix a = random_matrix(n, n, 1);
  ComplexMatrix b = random_matrix(n, n, 2);
  for (auto _ : state) {
    ComplexMatrix c = multiply(a, b);
    benchmark::DoNotOptimize(c.data());
  }
  // one complex multiply-add is 8 real flops
  state.counters["Gflops"] = benchmark::Counter(
      8.0 * static_cast<double>(n) * n * n * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate, benchmark::Counter::kIs1000);
}
BENCHMARK(BM_MatmulSquare)->Arg(128)->Arg(256)->Arg(512);

void BM_EffectiveChannel(benchmark::State& state) {
  const OfdmConfig cfg = config_for(static_cast<std::size_t>(state.range(0)));
  ChannelRealization ch = draw_channel(cfg, 7);
  for (auto _ : state) {
    ComplexMatrix h = ch.h_eff();
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_EffectiveChannel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SubcarrierSvdBatch(benchmark::State& state) {
  const OfdmConfig cfg = config_for(64);
  ChannelRealization ch = draw_channel(cfg, 11);
  for (auto _ : state) {
    for (const ComplexMatrix& block : ch.h_subs()) {
      SvdResult s = svd(block);
      benchmark::DoNotOptimize(s.sigma.data());
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cfg.n_subcarriers));
}
BENCHMARK(BM_SubcarrierSvdBatch);

void BM_Waterfill(benchmark::State& state) {
  Rng rng(13);
  std::vector<double> sigma(256);
  for (double& s : sigma) s = 1.0 + rng.uniform();
  std::sort(sigma.rbegin(), sigma.rend());
  for (auto _ : state) {
    PowerAllocation alloc = solve_waterfill_mse(sigma, 1.0, 100.0);
    benchmark::DoNotOptimize(alloc.p.data());
  }
}
BENCHMARK(BM_Waterfill);

void BM_AnBasis(benchmark::State& state) {
  const OfdmConfig cfg = config_for(64);
  ChannelRealization ch = draw_channel(cfg, 17);
  ComplexMatrix block = ch.h_block();
  for (auto _ : state) {
    ComplexMatrix q = an_basis(block, cfg);
    benchmark::DoNotOptimize(q.data());
  }
}
BENCHMARK(BM_AnBasis)->Unit(benchmark::kMillisecond);

void BM_FrameDesignAndTransmit(benchmark::State& state) {
  const OfdmConfig cfg = config_for(64);
  std::uint64_t seed = 23;
  for (auto _ : state) {
    ChannelRealization ch = draw_channel(cfg, seed++);
    SecureFilterSet fs = design_mse_filter(ch.h_subs(), cfg);
    std::vector<int> bits = random_bits(2 * fs.w_t.cols(), seed);
    SymbolFrame frame = modulate(bits);
    auto rx = transmit(frame, fs.w_t, std::nullopt, ch, cfg, seed);
    benchmark::DoNotOptimize(rx.first.y.data());
  }
}
BENCHMARK(BM_FrameDesignAndTransmit)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
