#pragma once

#include <lapacke.h>

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Square matrix made of n_blocks x n_blocks dense blocks of size b, nonzero
/// only on the block diagonal and the first block off-diagonals.
class BlockTridiagonal {
 public:
  BlockTridiagonal(std::size_t n_blocks, std::size_t block)
      : n_(n_blocks), b_(block),
        lower_(n_blocks * block * block, 0.0),
        diag_(n_blocks * block * block, 0.0),
        upper_(n_blocks * block * block, 0.0) {
    if (n_blocks == 0 || block == 0) throw std::invalid_argument("BlockTridiagonal: empty");
  }

  std::size_t n_blocks() const { return n_; }
  std::size_t block_size() const { return b_; }
  std::size_t dim() const { return n_ * b_; }

  /// Entry (i, j) of block (row_block, col_block); |row_block - col_block| <= 1.
  double& at(std::size_t row_block, std::size_t col_block, std::size_t i, std::size_t j) {
    return storage(row_block, col_block)[row_block * b_ * b_ + i * b_ + j];
  }
  double at(std::size_t row_block, std::size_t col_block, std::size_t i, std::size_t j) const {
    return const_cast<BlockTridiagonal*>(this)->at(row_block, col_block, i, j);
  }

  /// Global entry, zero outside the band structure.
  double entry(std::size_t row, std::size_t col) const {
    const std::size_t rb = row / b_, cb = col / b_;
    if (rb > cb + 1 || cb > rb + 1) return 0.0;
    return at(rb, cb, row % b_, col % b_);
  }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != dim()) throw std::invalid_argument("BlockTridiagonal::multiply: size");
    std::vector<double> y(dim(), 0.0);
    for (std::size_t rb = 0; rb < n_; ++rb) {
      const std::size_t c0 = rb == 0 ? 0 : rb - 1;
      const std::size_t c1 = rb + 1 < n_ ? rb + 1 : rb;
      for (std::size_t cb = c0; cb <= c1; ++cb) {
        for (std::size_t i = 0; i < b_; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < b_; ++j) s += at(rb, cb, i, j) * x[cb * b_ + j];
          y[rb * b_ + i] += s;
        }
      }
    }
    return y;
  }

  void set_zero() {
    std::fill(lower_.begin(), lower_.end(), 0.0);
    std::fill(diag_.begin(), diag_.end(), 0.0);
    std::fill(upper_.begin(), upper_.end(), 0.0);
  }

 private:
  std::vector<double>& storage(std::size_t rb, std::size_t cb) {
    if (rb >= n_ || cb >= n_) throw std::out_of_range("BlockTridiagonal: block index");
    if (cb == rb) return diag_;
    if (cb + 1 == rb) return lower_;
    if (rb + 1 == cb) return upper_;
    throw std::out_of_range("BlockTridiagonal: block outside the tridiagonal band");
  }

  std::size_t n_, b_;
  std::vector<double> lower_, diag_, upper_;
};

/// Direct solve through LAPACK's banded LU with partial pivoting.
inline std::vector<double> linear_solve(const BlockTridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.dim();
  if (rhs.size() != n) throw std::invalid_argument("linear_solve: rhs size");
  const std::size_t b = a.block_size();
  const lapack_int kl = static_cast<lapack_int>(2 * b - 1);
  const lapack_int ku = kl;
  const lapack_int ldab = 2 * kl + ku + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t cb = col / b;
    const std::size_t r0 = cb == 0 ? 0 : (cb - 1) * b;
    const std::size_t r1 = std::min(n, (cb + 2) * b);
    for (std::size_t row = r0; row < r1; ++row) {
      const auto band_row = static_cast<std::size_t>(kl + ku) + row - col;
      ab[band_row + col * static_cast<std::size_t>(ldab)] = a.entry(row, col);
    }
  }
  std::vector<double> x(rhs.begin(), rhs.end());
  std::vector<lapack_int> ipiv(n);
  const lapack_int info =
      LAPACKE_dgbsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), kl, ku, 1, ab.data(), ldab,
                    ipiv.data(), x.data(), static_cast<lapack_int>(n));
  if (info > 0) throw SolverError("linear_solve: singular matrix (zero pivot " +
                                  std::to_string(info) + ")");
  if (info < 0) throw SolverError("linear_solve: invalid argument to dgbsv");
  return x;
}

}  // namespace bdg
