#include "secofdm/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "secofdm/channel.hpp"
#include "secofdm/errors.hpp"
#include "secofdm/linalg.hpp"
#include "secofdm/rng.hpp"

namespace secofdm {

namespace {

void check_sigma(const std::vector<double>& sigma, const char* who) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] >= 0.0))
      throw ConfigError(std::string(who) + ": sigma must be nonnegative");
    if (i > 0 && sigma[i] > sigma[i - 1] + 1e-12 * sigma[i - 1])
      throw ConfigError(std::string(who) + ": sigma must be descending");
  }
}

double waterfill_total(const std::vector<double>& sigma, double sz,
                       double noise_var, double mu) {
  double total = 0.0;
  for (double s : sigma) {
    if (s <= 0.0) continue;
    const double p = sz / (s * std::sqrt(mu)) - noise_var / (s * s);
    if (p > 0.0) total += p;
  }
  return total;
}

std::vector<double> waterfill_powers(const std::vector<double>& sigma, double sz,
                                     double noise_var, double mu) {
  std::vector<double> p(sigma.size(), 0.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] <= 0.0) continue;
    const double pi = sz / (sigma[i] * std::sqrt(mu)) - noise_var / (sigma[i] * sigma[i]);
    if (pi > 0.0) p[i] = pi;
  }
  return p;
}

std::vector<double> minpower_powers(const std::vector<double>& sigma, double sz,
                                    double noise_var, double nu) {
  std::vector<double> p(sigma.size(), 0.0);
  const double rnu = std::sqrt(nu);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] <= 0.0) continue;
    const double pi = (sz * sigma[i] * rnu - noise_var) / (sigma[i] * sigma[i]);
    if (pi > 0.0) p[i] = pi;
  }
  return p;
}

constexpr int kBisectIters = 200;
constexpr double kBisectTol = 1e-12;

}  // namespace

double allocation_mse(const std::vector<double>& sigma,
                      const std::vector<double>& p, double noise_var) {
  if (sigma.size() != p.size())
    throw ConfigError("allocation_mse: sigma and p lengths differ");
  double mse = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    mse += noise_var / (sigma[i] * sigma[i] * p[i] + noise_var);
  return mse;
}

PowerAllocation solve_waterfill_mse(const std::vector<double>& sigma,
                                    double noise_var, double budget) {
  if (!(noise_var > 0.0))
    throw ConfigError("solve_waterfill_mse: noise_var must be > 0");
  if (!(budget >= 0.0))
    throw ConfigError("solve_waterfill_mse: budget must be >= 0");
  check_sigma(sigma, "solve_waterfill_mse");

  PowerAllocation out;
  out.p.assign(sigma.size(), 0.0);
  out.residual = budget;

  const bool any_active = !sigma.empty() && sigma[0] > 0.0;
  if (!any_active || budget == 0.0) {
    // Boundary multiplier: the largest |dMSE/dp_i| at p = 0.
    out.dual = any_active ? sigma[0] * sigma[0] / noise_var : 0.0;
    return out;
  }

  const double sz = std::sqrt(noise_var);
  double mu_hi = sigma[0] * sigma[0] / noise_var;  // total power 0 at and above
  double mu_lo = mu_hi;
  for (int i = 0; i < 4000; ++i) {
    mu_lo *= 0.25;
    if (mu_lo == 0.0 || waterfill_total(sigma, sz, noise_var, mu_lo) >= budget)
      break;
  }
  for (int i = 0; i < kBisectIters; ++i) {
    if (mu_hi - mu_lo <= kBisectTol * mu_hi) break;
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (waterfill_total(sigma, sz, noise_var, mid) > budget)
      mu_lo = mid;
    else
      mu_hi = mid;
  }

  out.p = waterfill_powers(sigma, sz, noise_var, mu_hi);
  out.consumed = std::accumulate(out.p.begin(), out.p.end(), 0.0);
  out.residual = std::max(0.0, budget - out.consumed);
  out.dual = mu_hi;
  return out;
}

PowerAllocation solve_minpower_mse(const std::vector<double>& sigma,
                                   double noise_var, double budget,
                                   double mse_cap) {
  if (!(noise_var > 0.0))
    throw ConfigError("solve_minpower_mse: noise_var must be > 0");
  if (!(budget >= 0.0))
    throw ConfigError("solve_minpower_mse: budget must be >= 0");
  if (!(mse_cap > 0.0))
    throw ConfigError("solve_minpower_mse: mse_cap must be > 0");
  check_sigma(sigma, "solve_minpower_mse");

  const double k = static_cast<double>(sigma.size());
  PowerAllocation out;
  out.p.assign(sigma.size(), 0.0);

  if (mse_cap >= k) {  // zero power already satisfies the cap
    out.residual = budget;
    return out;
  }

  // Feasibility: the best MSE the budget can buy comes from water-filling it.
  const PowerAllocation wf = solve_waterfill_mse(sigma, noise_var, budget);
  const double best = allocation_mse(sigma, wf.p, noise_var);
  if (best > mse_cap)
    throw InfeasibleError(
        "solve_minpower_mse: cap " + std::to_string(mse_cap) +
            " is unreachable within budget " + std::to_string(budget) +
            "; best achievable MSE is " + std::to_string(best),
        best);

  const double sz = std::sqrt(noise_var);
  auto mse_at = [&](double nu) {
    return allocation_mse(sigma, minpower_powers(sigma, sz, noise_var, nu),
                          noise_var);
  };

  double nu_lo = noise_var / (sigma[0] * sigma[0]);  // all p = 0, MSE = k
  double nu_hi = nu_lo;
  for (int i = 0; i < 4000 && mse_at(nu_hi) > mse_cap; ++i) nu_hi *= 4.0;
  for (int i = 0; i < kBisectIters; ++i) {
    if (nu_hi - nu_lo <= kBisectTol * nu_hi) break;
    const double mid = 0.5 * (nu_lo + nu_hi);
    if (mse_at(mid) > mse_cap)
      nu_lo = mid;
    else
      nu_hi = mid;
  }

  out.p = minpower_powers(sigma, sz, noise_var, nu_hi);
  out.consumed = std::accumulate(out.p.begin(), out.p.end(), 0.0);
  if (out.consumed > budget) {
    // Only the feasibility boundary can land here, and only by rounding.
    const double scale = budget / out.consumed;
    if (scale < 1.0 - 1e-9)
      throw InfeasibleError(
          "solve_minpower_mse: solution exceeds budget " + std::to_string(budget),
          best);
    for (double& pi : out.p) pi *= scale;
    out.consumed = std::accumulate(out.p.begin(), out.p.end(), 0.0);
  }
  out.residual = std::max(0.0, budget - out.consumed);
  out.dual = nu_hi;
  return out;
}

namespace {

struct PooledSvd {
  std::vector<double> sigma;        // descending
  std::vector<std::size_t> sub;     // subcarrier of each pooled value
  std::vector<std::size_t> col;     // column within that subcarrier's V
  std::vector<ComplexMatrix> v;     // per-subcarrier right singular vectors
};

void check_blocks(const std::vector<ComplexMatrix>& subs, const OfdmConfig& cfg,
                  const char* who) {
  if (subs.size() != cfg.n_subcarriers)
    throw ConfigError(std::string(who) + ": expected " +
                      std::to_string(cfg.n_subcarriers) + " blocks, got " +
                      std::to_string(subs.size()));
  for (const ComplexMatrix& b : subs)
    if (b.rows() != cfg.n_rx_bob || b.cols() != cfg.n_tx)
      throw ConfigError(std::string(who) + ": block is " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                        ", expected " + std::to_string(cfg.n_rx_bob) + "x" +
                        std::to_string(cfg.n_tx));
}

PooledSvd pool_svd(const std::vector<ComplexMatrix>& subs) {
  PooledSvd pool;
  pool.v.reserve(subs.size());
  for (std::size_t n = 0; n < subs.size(); ++n) {
    SvdResult r = svd(subs[n]);
    for (std::size_t j = 0; j < r.sigma.size(); ++j) {
      pool.sigma.push_back(r.sigma[j]);
      pool.sub.push_back(n);
      pool.col.push_back(j);
    }
    pool.v.push_back(std::move(r.v));
  }
  // Stable sort keeps (subcarrier, column) order among ties.
  std::vector<std::size_t> order(pool.sigma.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool.sigma[a] > pool.sigma[b];
  });
  PooledSvd sorted;
  sorted.v = std::move(pool.v);
  sorted.sigma.reserve(order.size());
  for (std::size_t idx : order) {
    sorted.sigma.push_back(pool.sigma[idx]);
    sorted.sub.push_back(pool.sub[idx]);
    sorted.col.push_back(pool.col[idx]);
  }
  return sorted;
}

SecureFilterSet assemble(const OfdmConfig& cfg, const PooledSvd& pool,
                         PowerAllocation alloc) {
  const std::size_t ns_total = cfg.n_data_streams();
  SecureFilterSet fs;
  fs.w_t = ComplexMatrix(cfg.n_tx * cfg.n_subcarriers, ns_total);
  fs.sigma = pool.sigma;
  fs.lambda.resize(ns_total);
  fs.stream_subcarrier.resize(ns_total);
  for (std::size_t i = 0; i < ns_total; ++i) {
    const std::size_t n = pool.sub[i], j = pool.col[i];
    const double scale = std::sqrt(alloc.p[i]);
    for (std::size_t r = 0; r < cfg.n_tx; ++r)
      fs.w_t(n * cfg.n_tx + r, i) = scale * pool.v[n](r, j);
    fs.lambda[i] = pool.sigma[i] * pool.sigma[i] * alloc.p[i];
    fs.stream_subcarrier[i] = n;
  }
  fs.alloc = std::move(alloc);
  return fs;
}

std::vector<double> selected_sigma(const PooledSvd& pool, std::size_t count) {
  return {pool.sigma.begin(), pool.sigma.begin() + count};
}

std::vector<ComplexMatrix> slice_blocks(const ComplexMatrix& h_eff,
                                        const OfdmConfig& cfg) {
  const std::size_t n = cfg.n_subcarriers;
  if (h_eff.rows() != cfg.n_rx_bob * n || h_eff.cols() != cfg.n_tx * n)
    throw ConfigError("filter design: effective channel is " +
                      std::to_string(h_eff.rows()) + "x" +
                      std::to_string(h_eff.cols()) + ", expected " +
                      std::to_string(cfg.n_rx_bob * n) + "x" +
                      std::to_string(cfg.n_tx * n));
  std::vector<ComplexMatrix> subs;
  subs.reserve(n);
  for (std::size_t nn = 0; nn < n; ++nn)
    subs.push_back(
        h_eff.block(nn * cfg.n_rx_bob, nn * cfg.n_tx, cfg.n_rx_bob, cfg.n_tx));
  return subs;
}

}  // namespace

SecureFilterSet design_mse_filter(const std::vector<ComplexMatrix>& sub_blocks,
                                  const OfdmConfig& cfg) {
  cfg.validate();
  check_blocks(sub_blocks, cfg, "design_mse_filter");
  const PooledSvd pool = pool_svd(sub_blocks);
  const std::size_t ns_total = cfg.n_data_streams();
  PowerAllocation alloc = solve_waterfill_mse(selected_sigma(pool, ns_total),
                                              cfg.noise_var, cfg.total_power);
  return assemble(cfg, pool, std::move(alloc));
}

SecureFilterSet design_mse_filter(const ComplexMatrix& h_eff,
                                  const OfdmConfig& cfg) {
  return design_mse_filter(slice_blocks(h_eff, cfg), cfg);
}

SecureFilterSet design_mse_filter_capped(
    const std::vector<ComplexMatrix>& sub_blocks, const OfdmConfig& cfg,
    double mse_cap) {
  cfg.validate();
  check_blocks(sub_blocks, cfg, "design_mse_filter_capped");
  const PooledSvd pool = pool_svd(sub_blocks);
  const std::size_t ns_total = cfg.n_data_streams();
  PowerAllocation alloc = solve_minpower_mse(selected_sigma(pool, ns_total),
                                             cfg.noise_var, cfg.total_power,
                                             mse_cap);
  return assemble(cfg, pool, std::move(alloc));
}

SecureFilterSet design_mse_filter_capped(const ComplexMatrix& h_eff,
                                         const OfdmConfig& cfg, double mse_cap) {
  return design_mse_filter_capped(slice_blocks(h_eff, cfg), cfg, mse_cap);
}

SecureFilterSet svd_baseline_filter(const std::vector<ComplexMatrix>& sub_blocks,
                                    const OfdmConfig& cfg) {
  cfg.validate();
  check_blocks(sub_blocks, cfg, "svd_baseline_filter");
  const std::size_t n = cfg.n_subcarriers, ns = cfg.n_streams;
  const std::size_t ns_total = cfg.n_data_streams();
  const double per_stream = cfg.total_power / static_cast<double>(ns_total);
  const double scale = std::sqrt(per_stream);

  SecureFilterSet fs;
  fs.w_t = ComplexMatrix(cfg.n_tx * n, ns_total);
  fs.lambda.resize(ns_total);
  fs.stream_subcarrier.resize(ns_total);
  fs.alloc.p.assign(ns_total, per_stream);

  std::vector<double> all_sigma;
  all_sigma.reserve(n * std::min(cfg.n_rx_bob, cfg.n_tx));
  for (std::size_t nn = 0; nn < n; ++nn) {
    SvdResult r = svd(sub_blocks[nn]);
    for (double s : r.sigma) all_sigma.push_back(s);
    for (std::size_t j = 0; j < ns; ++j) {
      const std::size_t i = nn * ns + j;
      for (std::size_t row = 0; row < cfg.n_tx; ++row)
        fs.w_t(nn * cfg.n_tx + row, i) = scale * r.v(row, j);
      fs.lambda[i] = r.sigma[j] * r.sigma[j] * per_stream;
      fs.stream_subcarrier[i] = nn;
    }
  }
  std::sort(all_sigma.begin(), all_sigma.end(), std::greater<double>());
  fs.sigma = std::move(all_sigma);
  fs.alloc.consumed =
      std::accumulate(fs.alloc.p.begin(), fs.alloc.p.end(), 0.0);
  fs.alloc.residual = std::max(0.0, cfg.total_power - fs.alloc.consumed);
  fs.alloc.dual = 0.0;
  return fs;
}

SecureFilterSet svd_baseline_filter(const ComplexMatrix& h_eff,
                                    const OfdmConfig& cfg) {
  return svd_baseline_filter(slice_blocks(h_eff, cfg), cfg);
}

ComplexMatrix an_basis(const ComplexMatrix& h_block, const OfdmConfig& cfg) {
  cfg.validate();
  const std::size_t s = cfg.symbol_len(), n = cfg.n_subcarriers;
  const std::size_t nb = cfg.n_rx_bob, na = cfg.n_tx;
  if (h_block.rows() != nb * s || h_block.cols() != na * s)
    throw ConfigError("an_basis: h_block is " + std::to_string(h_block.rows()) +
                      "x" + std::to_string(h_block.cols()) + ", expected " +
                      std::to_string(nb * s) + "x" + std::to_string(na * s));

  // Post-CP legitimate channel: drop the first N_cp rows of each rx antenna.
  ComplexMatrix m(nb * n, na * s);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < na * s; ++c)
        m(k * n + r, c) = h_block(k * s + cfg.cp_len + r, c);

  const double mnorm = m.frobenius_norm();
  auto certified = [&](const ComplexMatrix& q) {
    if (mnorm == 0.0) return true;
    return multiply(m, q).frobenius_norm() < 1e-8 * mnorm;
  };

  ComplexMatrix q;
  bool have = false;
  try {
    q = range_complement(m.hermitian());
    have = certified(q);
  } catch (const Error&) {
    // rank-deficient or wide post-CP channel: fall through to the SVD route
  }
  if (!have) {
    q = null_space(m);
    if (!certified(q))
      throw NumericalError("an_basis: failed to certify a null basis for the " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + " post-CP channel");
  }
  if (q.cols() == 0)
    throw NumericalError("an_basis: the post-CP channel has an empty null space");
  return q;
}

std::vector<cxd> generate_an(const ComplexMatrix& q_a, double power,
                             std::uint64_t seed, AnNormalization norm) {
  if (!(power >= 0.0)) throw ConfigError("generate_an: power must be >= 0");
  if (power == 0.0) return std::vector<cxd>(q_a.rows(), cxd(0.0, 0.0));
  if (q_a.cols() == 0)
    throw ConfigError("generate_an: basis has no columns but power > 0");

  Rng rng(seed);
  const double dvar = norm == AnNormalization::expectation_power
                          ? power / static_cast<double>(q_a.cols())
                          : 1.0;
  const std::vector<cxd> d = rng.cgaussian_vector(q_a.cols(), dvar);
  std::vector<cxd> z = multiply(q_a, d);

  if (norm == AnNormalization::exact_power) {
    double nrm = 0.0;
    for (const cxd& v : z) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0)
      throw NumericalError("generate_an: degenerate zero draw");
    const double scale = std::sqrt(power) / nrm;
    for (cxd& v : z) v *= scale;
  }
  return z;
}

}  // namespace secofdm
