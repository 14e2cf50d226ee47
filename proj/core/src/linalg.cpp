#include "secofdm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "secofdm/errors.hpp"

namespace secofdm {

namespace {

std::string dims(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

struct JacobiOut {
  ComplexMatrix a;             // columns are sigma_j * u_j (unsorted)
  ComplexMatrix v;             // full cols x cols unitary accumulator
  std::vector<double> norms;   // column norms of a at convergence
};

// Convergence: every column pair satisfies |<a_p, a_q>| <= tol * |a_p||a_q|.
constexpr double kJacobiTol = 1e-13;
// Columns whose norm falls below 1e-14 of the largest are numerical noise
// (the null directions of a rank-deficient input). They are excluded from
// rotations: their mutual angles are meaningless and never settle, while
// their singular values are already certified ~0 by the norm itself.
constexpr double kNegligibleColSq = 1e-28;

JacobiOut jacobi_onesided(ComplexMatrix a, int max_sweeps) {
  const std::size_t m = a.rows(), n = a.cols();
  ComplexMatrix v = ComplexMatrix::identity(n);

  bool converged = n < 2;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double colmax_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
      colmax_sq = std::max(colmax_sq, s);
    }
    const double floor_sq = colmax_sq * kNegligibleColSq;

    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double hpp = 0.0, hqq = 0.0;
        cxd g = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const cxd ap = a(i, p), aq = a(i, q);
          hpp += std::norm(ap);
          hqq += std::norm(aq);
          g += std::conj(ap) * aq;
        }
        if (hpp <= floor_sq || hqq <= floor_sq) continue;
        const double gm = std::abs(g);
        if (gm <= kJacobiTol * std::sqrt(hpp * hqq) || gm == 0.0) continue;
        converged = false;

        const double tau = (hqq - hpp) / (2.0 * gm);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cxd phase_conj = std::conj(g) / gm;  // e^{-i arg g}

        for (std::size_t i = 0; i < m; ++i) {
          const cxd ap = a(i, p);
          const cxd aq = phase_conj * a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cxd vp = v(i, p);
          const cxd vq = phase_conj * v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged)
    throw NumericalError("svd: Jacobi sweeps did not converge for a " + dims(a) +
                         " matrix after " + std::to_string(max_sweeps) +
                         " sweeps");

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
    norms[j] = std::sqrt(s);
  }
  return {std::move(a), std::move(v), std::move(norms)};
}

// Fill columns [start, u.cols()) of u with vectors orthonormal to all earlier
// columns (used when the input is rank deficient and some left singular
// vectors are arbitrary).
void orthonormal_completion(ComplexMatrix& u, std::size_t start) {
  const std::size_t m = u.rows();
  for (std::size_t cidx = start; cidx < u.cols(); ++cidx) {
    bool placed = false;
    for (std::size_t cand = 0; cand < m && !placed; ++cand) {
      std::vector<cxd> w(m, 0.0);
      w[cand] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < cidx; ++j) {
          cxd dot = 0.0;
          for (std::size_t i = 0; i < m; ++i) dot += std::conj(u(i, j)) * w[i];
          for (std::size_t i = 0; i < m; ++i) w[i] -= dot * u(i, j);
        }
      }
      double nrm = 0.0;
      for (const cxd& x : w) nrm += std::norm(x);
      nrm = std::sqrt(nrm);
      if (nrm > 0.1) {
        for (std::size_t i = 0; i < m; ++i) u(i, cidx) = w[i] / nrm;
        placed = true;
      }
    }
    if (!placed)
      throw NumericalError("svd: failed to complete an orthonormal basis for a " +
                           std::to_string(m) + "-dimensional column space");
  }
}

}  // namespace

SvdResult svd(const ComplexMatrix& a, int max_sweeps) {
  if (a.rows() == 0 || a.cols() == 0)
    throw ConfigError("svd: empty matrix " + dims(a));
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t k = std::min(m, n);

  JacobiOut jo = jacobi_onesided(a, max_sweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return jo.norms[x] > jo.norms[y];
  });

  const double sig_max = jo.norms[order[0]];
  SvdResult out;
  out.sigma.resize(k);
  out.u = ComplexMatrix(m, k);
  out.v = ComplexMatrix(n, k);

  std::size_t effective_rank = k;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    const double sig = jo.norms[src];
    out.sigma[j] = sig;
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = jo.v(i, src);
    // A column whose norm is at rounding-noise level has no meaningful left
    // direction; normalizing it would poison u's orthonormality.
    if (sig > sig_max * 1e-13 && sig > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = jo.a(i, src) / sig;
    } else if (effective_rank == k) {
      effective_rank = j;
    }
  }
  if (effective_rank < k) orthonormal_completion(out.u, effective_rank);
  return out;
}

ComplexMatrix null_space(const ComplexMatrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0)
    throw ConfigError("null_space: empty matrix " + dims(a));
  const std::size_t n = a.cols();

  JacobiOut jo = jacobi_onesided(a, 60);
  const double sig_max = *std::max_element(jo.norms.begin(), jo.norms.end());

  std::vector<std::size_t> null_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!(jo.norms[j] > tol * sig_max)) null_cols.push_back(j);

  ComplexMatrix basis(n, null_cols.size());
  for (std::size_t c = 0; c < null_cols.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) basis(i, c) = jo.v(i, null_cols[c]);
  return basis;
}

ComplexMatrix cholesky_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols())
    throw ConfigError("cholesky_solve: matrix " + dims(a) + " is not square");
  if (b.rows() != a.rows())
    throw ConfigError("cholesky_solve: rhs " + dims(b) + " does not match " +
                      dims(a));
  const std::size_t n = a.rows();

  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t t = 0; t < j; ++t) d -= std::norm(l(j, t));
    if (!(d > 0.0))
      throw NumericalError("cholesky_solve: " + dims(a) +
                           " matrix is not positive definite (pivot " +
                           std::to_string(j) + ")");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cxd s = a(i, j);
      for (std::size_t t = 0; t < j; ++t) s -= l(i, t) * std::conj(l(j, t));
      l(i, j) = s / ljj;
    }
  }

  // Forward: L y = b, then backward: L^H x = y.
  ComplexMatrix x = b;
  const std::size_t nrhs = b.cols();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < nrhs; ++c) {
      cxd s = x(i, c);
      for (std::size_t t = 0; t < i; ++t) s -= l(i, t) * x(t, c);
      x(i, c) = s / l(i, i).real();
    }
  for (std::size_t ii = n; ii-- > 0;)
    for (std::size_t c = 0; c < nrhs; ++c) {
      cxd s = x(ii, c);
      for (std::size_t t = ii + 1; t < n; ++t) s -= std::conj(l(t, ii)) * x(t, c);
      x(ii, c) = s / l(ii, ii).real();
    }
  return x;
}

ComplexMatrix range_complement(const ComplexMatrix& m, double tol) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0) throw ConfigError("range_complement: empty matrix " + dims(m));
  if (cols > rows)
    throw ConfigError("range_complement: " + dims(m) + " has more columns than rows");

  // Householder QR; reflectors kept as unit vectors over the trailing rows.
  ComplexMatrix r = m;
  std::vector<std::vector<cxd>> reflectors(cols);
  std::vector<double> rdiag(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double xn = 0.0;
    for (std::size_t i = j; i < rows; ++i) xn += std::norm(r(i, j));
    xn = std::sqrt(xn);
    rdiag[j] = xn;
    if (xn == 0.0) continue;

    const cxd x0 = r(j, j);
    const double x0m = std::abs(x0);
    const cxd phase = x0m > 0.0 ? x0 / x0m : cxd(1.0, 0.0);
    const cxd alpha = -phase * xn;

    std::vector<cxd> v(rows - j);
    v[0] = r(j, j) - alpha;
    for (std::size_t i = j + 1; i < rows; ++i) v[i - j] = r(i, j);
    double vn = 0.0;
    for (const cxd& t : v) vn += std::norm(t);
    vn = std::sqrt(vn);
    if (vn > 0.0)
      for (cxd& t : v) t /= vn;
    reflectors[j] = std::move(v);
    const std::vector<cxd>& vr = reflectors[j];

    for (std::size_t c = j; c < cols; ++c) {
      cxd dot = 0.0;
      for (std::size_t i = j; i < rows; ++i) dot += std::conj(vr[i - j]) * r(i, c);
      dot *= 2.0;
      for (std::size_t i = j; i < rows; ++i) r(i, c) -= dot * vr[i - j];
    }
  }

  const double dmax = cols ? *std::max_element(rdiag.begin(), rdiag.end()) : 0.0;
  for (std::size_t j = 0; j < cols; ++j)
    if (!(rdiag[j] > tol * dmax) || rdiag[j] == 0.0)
      throw NumericalError("range_complement: rank-deficient " + dims(m) +
                           " input (column " + std::to_string(j) + ")");

  // Q columns cols..rows-1 = reflectors applied (in reverse) to unit vectors.
  const std::size_t nc = rows - cols;
  ComplexMatrix q(rows, nc);
  for (std::size_t c = 0; c < nc; ++c) q(cols + c, c) = 1.0;
  for (std::size_t jj = cols; jj-- > 0;) {
    const std::vector<cxd>& v = reflectors[jj];
    if (v.empty()) continue;
    for (std::size_t c = 0; c < nc; ++c) {
      cxd dot = 0.0;
      for (std::size_t i = jj; i < rows; ++i) dot += std::conj(v[i - jj]) * q(i, c);
      dot *= 2.0;
      for (std::size_t i = jj; i < rows; ++i) q(i, c) -= dot * v[i - jj];
    }
  }
  return q;
}

}  // namespace secofdm
