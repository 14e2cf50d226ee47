#pragma once

#include <cstddef>
#include <vector>

#include "secofdm/complex_matrix.hpp"
#include "secofdm/modulation.hpp"
#include "secofdm/transmit.hpp"

namespace secofdm {

// Outcome of equalizing one received frame.
struct EqualizerReport {
  std::vector<cxd> s_hat;
  double mse_analytic = 0.0;   // expected ||s_hat - s||^2 for this cascade
  double mse_empirical = 0.0;  // realized ||s_hat - s||^2 for this frame
  std::size_t bit_errors = 0;
  std::size_t bits_total = 0;
};

// MMSE receive filter for the cascade a = (effective channel) * (transmit
// filter): w = (a a^H + noise_var I)^{-1} a, evaluated with a Hermitian
// positive definite solve, never an explicit inverse. Requires noise_var > 0.
ComplexMatrix mmse_filter(const ComplexMatrix& a, double noise_var);

// s_hat = w^H y, hard QPSK decisions, bit errors counted against frame.bits.
// The analytic MSE cannot be derived from (y, w, frame) alone; this overload
// leaves mse_analytic = 0.
EqualizerReport equalize_and_score(const ReceivedFrame& y, const ComplexMatrix& w,
                                   const SymbolFrame& frame);

// Same, but also fills mse_analytic from the cascade matrix.
EqualizerReport equalize_and_score(const ReceivedFrame& y, const ComplexMatrix& w,
                                   const SymbolFrame& frame,
                                   const ComplexMatrix& cascade);

// Expected squared symbol error of the MMSE receiver for cascade a:
// ||w^H a - I||_F^2 + noise_var * ||w||_F^2 with w the MMSE filter.
// Equals sum_i noise_var / (sigma_i^2 p_i + noise_var) when a = h_eff * w_t
// with an SVD-aligned w_t. Requires noise_var > 0.
double analytic_mse(const ComplexMatrix& a, double noise_var);

}  // namespace secofdm
