#pragma once

#include <cstdint>
#include <vector>

#include "secofdm/complex_matrix.hpp"

namespace secofdm {

// One data frame: Gray-mapped QPSK symbols plus the bits that produced them.
// Constellation points are (+-1 +-i)/sqrt(2), so E|s|^2 = 1 exactly.
struct SymbolFrame {
  std::vector<cxd> symbols;  // bits.size() / 2 entries
  std::vector<int> bits;     // 0/1
};

// Gray map per symbol: [0,0] -> (1+i)/sqrt2, [0,1] -> (1-i)/sqrt2,
// [1,0] -> (-1+i)/sqrt2, [1,1] -> (-1-i)/sqrt2.
// Throws ConfigError on odd length or non-binary entries.
SymbolFrame modulate(const std::vector<int>& bits);

// Minimum-distance QPSK decisions back to bits (2 per symbol).
std::vector<int> demodulate(const std::vector<cxd>& symbols);

// Deterministic fair bits from a dedicated stream.
std::vector<int> random_bits(std::size_t count, std::uint64_t seed);

}  // namespace secofdm
