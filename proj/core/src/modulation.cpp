#include "secofdm/modulation.hpp"

#include <cmath>

#include "secofdm/errors.hpp"
#include "secofdm/rng.hpp"

namespace secofdm {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

SymbolFrame modulate(const std::vector<int>& bits) {
  if (bits.size() % 2 != 0)
    throw ConfigError("modulate: bit count " + std::to_string(bits.size()) +
                      " is odd");
  SymbolFrame f;
  f.bits = bits;
  f.symbols.resize(bits.size() / 2);
  for (std::size_t i = 0; i < f.symbols.size(); ++i) {
    const int b0 = bits[2 * i], b1 = bits[2 * i + 1];
    if ((b0 | b1) & ~1)
      throw ConfigError("modulate: bits must be 0 or 1");
    f.symbols[i] =
        cxd((1.0 - 2.0 * b0) * kInvSqrt2, (1.0 - 2.0 * b1) * kInvSqrt2);
  }
  return f;
}

std::vector<int> demodulate(const std::vector<cxd>& symbols) {
  std::vector<int> bits(2 * symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    bits[2 * i] = symbols[i].real() < 0.0 ? 1 : 0;
    bits[2 * i + 1] = symbols[i].imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

std::vector<int> random_bits(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> bits(count);
  for (int& b : bits) b = rng.bit();
  return bits;
}

}  // namespace secofdm
