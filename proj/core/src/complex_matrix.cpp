#include "secofdm/complex_matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "secofdm/errors.hpp"

namespace secofdm {

namespace {

std::string shape_str(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void shape_error(const char* op, const ComplexMatrix& a,
                              const ComplexMatrix& b) {
  throw ConfigError(std::string(op) + ": incompatible shapes " + shape_str(a) +
                    " and " + shape_str(b));
}

// Planar-packed, register-blocked product for larger operands. B is unpacked
// into separate real/imag planes once; rows of A are processed four at a time
// against cached column panels so each B element is loaded once per 4 output
// rows. Accumulation order over k is fixed regardless of blocking.
constexpr std::size_t kPanel = 256;  // complex columns per panel

void kernel_rows4(const cxd* arow0, const cxd* arow1, const cxd* arow2,
                  const cxd* arow3, const double* br, const double* bi,
                  std::size_t k, std::size_t n, std::size_t jb, std::size_t w,
                  double (*accr)[kPanel], double (*acci)[kPanel]) {
  for (std::size_t kk = 0; kk < k; ++kk) {
    const double a0r = arow0[kk].real(), a0i = arow0[kk].imag();
    const double a1r = arow1[kk].real(), a1i = arow1[kk].imag();
    const double a2r = arow2[kk].real(), a2i = arow2[kk].imag();
    const double a3r = arow3[kk].real(), a3i = arow3[kk].imag();
    const double* __restrict bre = br + kk * n + jb;
    const double* __restrict bim = bi + kk * n + jb;
    for (std::size_t j = 0; j < w; ++j) {
      const double xr = bre[j], xi = bim[j];
      accr[0][j] += a0r * xr - a0i * xi;
      acci[0][j] += a0r * xi + a0i * xr;
      accr[1][j] += a1r * xr - a1i * xi;
      acci[1][j] += a1r * xi + a1i * xr;
      accr[2][j] += a2r * xr - a2i * xi;
      acci[2][j] += a2r * xi + a2i * xr;
      accr[3][j] += a3r * xr - a3i * xi;
      acci[3][j] += a3r * xi + a3i * xr;
    }
  }
}

void kernel_rows1(const cxd* arow, const double* br, const double* bi,
                  std::size_t k, std::size_t n, std::size_t jb, std::size_t w,
                  double* accr, double* acci) {
  for (std::size_t kk = 0; kk < k; ++kk) {
    const double ar = arow[kk].real(), ai = arow[kk].imag();
    const double* __restrict bre = br + kk * n + jb;
    const double* __restrict bim = bi + kk * n + jb;
    for (std::size_t j = 0; j < w; ++j) {
      const double xr = bre[j], xi = bim[j];
      accr[j] += ar * xr - ai * xi;
      acci[j] += ar * xi + ai * xr;
    }
  }
}

void multiply_packed(const ComplexMatrix& a, const ComplexMatrix& b,
                     ComplexMatrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> br(k * n), bi(k * n);
  for (std::size_t r = 0; r < k; ++r) {
    const cxd* src = b.row_ptr(r);
    double* dr = br.data() + r * n;
    double* di = bi.data() + r * n;
    for (std::size_t j = 0; j < n; ++j) {
      dr[j] = src[j].real();
      di[j] = src[j].imag();
    }
  }

  alignas(64) double accr[4][kPanel];
  alignas(64) double acci[4][kPanel];

  for (std::size_t jb = 0; jb < n; jb += kPanel) {
    const std::size_t w = std::min(kPanel, n - jb);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      std::memset(accr, 0, sizeof accr);
      std::memset(acci, 0, sizeof acci);
      kernel_rows4(a.row_ptr(i), a.row_ptr(i + 1), a.row_ptr(i + 2),
                   a.row_ptr(i + 3), br.data(), bi.data(), k, n, jb, w, accr,
                   acci);
      for (std::size_t r = 0; r < 4; ++r) {
        cxd* out = c.row_ptr(i + r) + jb;
        for (std::size_t j = 0; j < w; ++j) out[j] = cxd(accr[r][j], acci[r][j]);
      }
    }
    for (; i < m; ++i) {
      std::memset(accr[0], 0, sizeof accr[0]);
      std::memset(acci[0], 0, sizeof acci[0]);
      kernel_rows1(a.row_ptr(i), br.data(), bi.data(), k, n, jb, w, accr[0],
                   acci[0]);
      cxd* out = c.row_ptr(i) + jb;
      for (std::size_t j = 0; j < w; ++j) out[j] = cxd(accr[0][j], acci[0][j]);
    }
  }
}

void multiply_naive(const ComplexMatrix& a, const ComplexMatrix& b,
                    ComplexMatrix& c) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    cxd* crow = c.row_ptr(i);
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double ar = a(i, kk).real(), ai = a(i, kk).imag();
      const cxd* brow = b.row_ptr(kk);
      for (std::size_t j = 0; j < n; ++j) {
        const double xr = brow[j].real(), xi = brow[j].imag();
        crow[j] += cxd(ar * xr - ai * xi, ar * xi + ai * xr);
      }
    }
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::hermitian() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double ComplexMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const cxd& v : data_) s += std::norm(v);
  return s;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(frobenius_sq()); }

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0,
                                   std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw ConfigError("block: out of range for " + shape_str(*this));
  ComplexMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    std::memcpy(out.row_ptr(i), row_ptr(r0 + i) + c0, nc * sizeof(cxd));
  return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0,
                              const ComplexMatrix& m) {
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_)
    throw ConfigError("set_block: out of range for " + shape_str(*this));
  for (std::size_t i = 0; i < m.rows(); ++i)
    std::memcpy(row_ptr(r0 + i) + c0, m.row_ptr(i), m.cols() * sizeof(cxd));
}

std::vector<cxd> ComplexMatrix::col(std::size_t c) const {
  std::vector<cxd> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

void ComplexMatrix::set_col(std::size_t c, const std::vector<cxd>& v) {
  if (v.size() != rows_)
    throw ConfigError("set_col: vector length " + std::to_string(v.size()) +
                      " vs " + std::to_string(rows_) + " rows");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) shape_error("multiply", a, b);
  ComplexMatrix c(a.rows(), b.cols());
  if (c.size() == 0 || a.cols() == 0) return c;
  if (a.rows() * a.cols() * b.cols() >= 65536)
    multiply_packed(a, b, c);
  else
    multiply_naive(a, b, c);
  return c;
}

std::vector<cxd> multiply(const ComplexMatrix& a, const std::vector<cxd>& x) {
  if (a.cols() != x.size())
    throw ConfigError("multiply: matrix " + shape_str(a) + " times vector of " +
                      std::to_string(x.size()));
  std::vector<cxd> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const cxd* row = a.row_ptr(i);
    double yr = 0.0, yi = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double ar = row[j].real(), ai = row[j].imag();
      const double xr = x[j].real(), xi = x[j].imag();
      yr += ar * xr - ai * xi;
      yi += ar * xi + ai * xr;
    }
    y[i] = cxd(yr, yi);
  }
  return y;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply(a, b);
}

std::vector<cxd> operator*(const ComplexMatrix& a, const std::vector<cxd>& x) {
  return multiply(a, x);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("add", a, b);
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error("sub", a, b);
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

ComplexMatrix operator*(cxd s, const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) *= s;
  return c;
}

ComplexMatrix dft_matrix(std::size_t n) {
  if (n < 1) throw ConfigError("dft_matrix: order must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  // Roots are tabulated once so that entry (j,k) is exactly root[(j*k) mod n];
  // reducing the product before the trig call keeps large orders accurate.
  std::vector<cxd> root(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ang = -2.0 * M_PI * static_cast<double>(t) / static_cast<double>(n);
    root[t] = cxd(scale * std::cos(ang), scale * std::sin(ang));
  }
  ComplexMatrix f(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) f(j, k) = root[(j * k) % n];
  return f;
}

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (const ComplexMatrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out(rows, cols);
  std::size_t r = 0, c = 0;
  for (const ComplexMatrix& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace secofdm
