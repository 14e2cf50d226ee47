#pragma once

// Internal unitary DFT helpers (1/sqrt(N) scaling in both directions).
// Radix-2 in-place transform for power-of-two sizes, direct evaluation
// otherwise; configs in the sweeps are power-of-two but the API does not
// require it.

#include <cmath>
#include <vector>

#include "secofdm/complex_matrix.hpp"

namespace secofdm::detail {

inline bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

inline void fft_unitary_inplace(std::vector<cxd>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  const double sgn = inverse ? 1.0 : -1.0;

  if (!is_pow2(n)) {
    std::vector<cxd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      cxd acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double ang =
            sgn * 2.0 * M_PI * static_cast<double>((k * t) % n) / static_cast<double>(n);
        acc += x[t] * cxd(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) x[k] = out[k] * scale;
    return;
  }

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sgn * 2.0 * M_PI / static_cast<double>(len);
    const cxd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cxd w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cxd u = x[i + j];
        const cxd v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (cxd& v : x) v *= scale;
}

}  // namespace secofdm::detail
