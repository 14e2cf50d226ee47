#include "secofdm/receivers.hpp"

#include <string>

#include "secofdm/errors.hpp"
#include "secofdm/linalg.hpp"

namespace secofdm {

ComplexMatrix mmse_filter(const ComplexMatrix& a, double noise_var) {
  if (!(noise_var > 0.0))
    throw ConfigError("mmse_filter: noise_var must be > 0");
  const std::size_t m = a.rows();
  ComplexMatrix gram(m, m);
  // Regularized Gram matrix a a^H + noise_var I (Hermitian positive definite).
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cxd acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k)
        acc += a(i, k) * std::conj(a(j, k));
      gram(i, j) = acc;
      gram(j, i) = std::conj(acc);
    }
  for (std::size_t i = 0; i < m; ++i) gram(i, i) += noise_var;
  return cholesky_solve(gram, a);
}

EqualizerReport equalize_and_score(const ReceivedFrame& y, const ComplexMatrix& w,
                                   const SymbolFrame& frame) {
  if (w.rows() != y.y.size())
    throw ConfigError("equalize_and_score: filter has " +
                      std::to_string(w.rows()) + " rows but frame has " +
                      std::to_string(y.y.size()) + " samples");
  if (w.cols() != frame.symbols.size())
    throw ConfigError("equalize_and_score: filter has " +
                      std::to_string(w.cols()) + " columns but frame carries " +
                      std::to_string(frame.symbols.size()) + " symbols");

  EqualizerReport rep;
  rep.s_hat = multiply(w.hermitian(), y.y);
  for (std::size_t i = 0; i < rep.s_hat.size(); ++i)
    rep.mse_empirical += std::norm(rep.s_hat[i] - frame.symbols[i]);

  const std::vector<int> decided = demodulate(rep.s_hat);
  rep.bits_total = decided.size();
  for (std::size_t i = 0; i < decided.size(); ++i)
    if (decided[i] != frame.bits[i]) ++rep.bit_errors;
  return rep;
}

EqualizerReport equalize_and_score(const ReceivedFrame& y, const ComplexMatrix& w,
                                   const SymbolFrame& frame,
                                   const ComplexMatrix& cascade) {
  EqualizerReport rep = equalize_and_score(y, w, frame);
  // E||w^H(a s + z) - s||^2 = ||w^H a - I||_F^2 + noise_var ||w||_F^2.
  const ComplexMatrix wha = multiply(w.hermitian(), cascade);
  double err = 0.0;
  for (std::size_t i = 0; i < wha.rows(); ++i)
    for (std::size_t j = 0; j < wha.cols(); ++j) {
      const cxd d = wha(i, j) - (i == j ? cxd(1.0, 0.0) : cxd(0.0, 0.0));
      err += std::norm(d);
    }
  rep.mse_analytic = err + y.noise_var * w.frobenius_sq();
  return rep;
}

double analytic_mse(const ComplexMatrix& a, double noise_var) {
  if (!(noise_var > 0.0))
    throw ConfigError("analytic_mse: noise_var must be > 0");
  const ComplexMatrix w = mmse_filter(a, noise_var);
  const ComplexMatrix wha = multiply(w.hermitian(), a);
  double err = 0.0;
  for (std::size_t i = 0; i < wha.rows(); ++i)
    for (std::size_t j = 0; j < wha.cols(); ++j) {
      const cxd d = wha(i, j) - (i == j ? cxd(1.0, 0.0) : cxd(0.0, 0.0));
      err += std::norm(d);
    }
  return err + noise_var * w.frobenius_sq();
}

}  // namespace secofdm
