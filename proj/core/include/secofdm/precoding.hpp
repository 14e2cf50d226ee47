#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "secofdm/complex_matrix.hpp"
#include "secofdm/ofdm_config.hpp"

namespace secofdm {

// Result of a power-allocation solve against a budget P_t.
struct PowerAllocation {
  std::vector<double> p;  // per-stream powers, aligned with the input sigma
  double consumed = 0.0;  // P_c = sum(p) <= budget
  double residual = 0.0;  // P_a = budget - P_c, >= 0
  double dual = 0.0;      // KKT multiplier at the solution
};

// Transmit-side design: precoder, allocation, and (optionally) the
// artificial-noise basis.
struct SecureFilterSet {
  ComplexMatrix w_t;          // n_tx*N x N_s*N; column i = sqrt(p_i) * v_i
  PowerAllocation alloc;      // over the selected N_s*N streams
  std::vector<double> sigma;  // all pooled singular values, descending
  std::vector<double> lambda; // lambda_i = sigma_i^2 * p_i for selected streams
  // Subcarrier owning each selected stream (column of w_t), needed to
  // evaluate the block-diagonal cascade per subcarrier.
  std::vector<std::size_t> stream_subcarrier;
  std::optional<ComplexMatrix> q_a;  // AN basis when the AN scheme is active
};

// MSE of an allocation: sum_i noise_var / (sigma_i^2 p_i + noise_var).
double allocation_mse(const std::vector<double>& sigma,
                      const std::vector<double>& p, double noise_var);

// Minimize allocation_mse subject to sum(p) <= budget, p >= 0. Solved by
// bisection on the KKT multiplier mu with closed-form primal recovery
// p_i(mu) = max(0, sigma_z/(sigma_i*sqrt(mu)) - sigma_z^2/sigma_i^2).
// sigma must be descending and nonnegative. All-zero sigma (or zero budget)
// yields p = 0 with the whole budget residual.
PowerAllocation solve_waterfill_mse(const std::vector<double>& sigma,
                                    double noise_var, double budget);

// Minimize sum(p) subject to allocation_mse(p) <= mse_cap. The constraint is
// active (met with equality) whenever mse_cap < sigma.size(); mse_cap >=
// sigma.size() needs no power at all. Throws InfeasibleError carrying the
// best achievable MSE when even the full budget cannot reach the cap.
PowerAllocation solve_minpower_mse(const std::vector<double>& sigma,
                                   double noise_var, double budget,
                                   double mse_cap);

// MSE-optimal transmit filter: pool the per-subcarrier singular values of the
// block-diagonal effective channel, keep the N_s*N strongest streams, and
// water-fill the power budget over them. The overload taking the dense
// effective channel slices out the per-subcarrier blocks first.
SecureFilterSet design_mse_filter(const std::vector<ComplexMatrix>& sub_blocks,
                                  const OfdmConfig& cfg);
SecureFilterSet design_mse_filter(const ComplexMatrix& h_eff,
                                  const OfdmConfig& cfg);

// Same stream selection, but spend the least power that achieves a total MSE
// of mse_cap; the unspent budget is available for artificial noise.
SecureFilterSet design_mse_filter_capped(
    const std::vector<ComplexMatrix>& sub_blocks, const OfdmConfig& cfg,
    double mse_cap);
SecureFilterSet design_mse_filter_capped(const ComplexMatrix& h_eff,
                                         const OfdmConfig& cfg, double mse_cap);

// Conventional baseline: per-subcarrier SVD precoding with the first N_s
// right-singular vectors per subcarrier and a uniform P_t/(N_s*N) per stream.
SecureFilterSet svd_baseline_filter(const std::vector<ComplexMatrix>& sub_blocks,
                                    const OfdmConfig& cfg);
SecureFilterSet svd_baseline_filter(const ComplexMatrix& h_eff,
                                    const OfdmConfig& cfg);

// Orthonormal basis of the null space of the post-CP legitimate channel
// R_cp * H; signals in its span arrive at Bob as exactly zero. Column count
// is n_tx*(N+N_cp) - rank(R_cp*H). Throws NumericalError if the null space
// is empty.
ComplexMatrix an_basis(const ComplexMatrix& h_block, const OfdmConfig& cfg);

enum class AnNormalization {
  exact_power,       // rescale so ||z_a||^2 == power per realization
  expectation_power  // E||z_a||^2 == power, no per-sample rescale
};

// Artificial-noise sample z_a = q_a * d with i.i.d. complex Gaussian d.
// power == 0 yields the zero vector.
std::vector<cxd> generate_an(const ComplexMatrix& q_a, double power,
                             std::uint64_t seed,
                             AnNormalization norm = AnNormalization::exact_power);

}  // namespace secofdm
