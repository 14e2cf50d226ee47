#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace secofdm {

using cxd = std::complex<double>;

// Dense row-major complex matrix.
//
// Zero-sized shapes (0 columns or 0 rows) are legal so that subspace
// extractors can return an empty basis; element access obviously requires a
// nonzero shape.
class ComplexMatrix {
public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cxd& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  cxd* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const cxd* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
  cxd* data() { return data_.data(); }
  const cxd* data() const { return data_.data(); }

  ComplexMatrix hermitian() const;  // conjugate transpose
  ComplexMatrix transpose() const;

  double frobenius_sq() const;
  double frobenius_norm() const;

  // Copy of the sub-block [r0, r0+nr) x [c0, c0+nc).
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& m);

  std::vector<cxd> col(std::size_t c) const;
  void set_col(std::size_t c, const std::vector<cxd>& v);

  bool operator==(const ComplexMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  std::size_t rows_, cols_;
  std::vector<cxd> data_;
};

// a * b with shape checking. Uses a register-blocked kernel on planar-packed
// panels; exact operation order is fixed, so results are run-to-run stable.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

std::vector<cxd> multiply(const ComplexMatrix& a, const std::vector<cxd>& x);

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cxd> operator*(const ComplexMatrix& a, const std::vector<cxd>& x);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cxd s, const ComplexMatrix& a);

// Unitary DFT matrix: entry (j,k) = exp(-2*pi*i*j*k/n) / sqrt(n), 1 <= n.
ComplexMatrix dft_matrix(std::size_t n);

// Block-diagonal assembly; blocks may have differing shapes.
ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks);

}  // namespace secofdm
