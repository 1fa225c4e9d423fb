#pragma once

// Dense bit-packed GF(2) matrices with row reduction and null-space
// extraction. Sizes here are desk-scale (n <= 8192), so dense word-parallel
// elimination is both simplest and fast enough.

#include <cstdint>
#include <vector>

#include "eccpow/util.hpp"

namespace eccpow {

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_((cols + 63) / 64),
        data_(rows * stride_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / 64] >> (c % 64)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (c % 64);
    auto& w = data_[r * stride_ + c / 64];
    if (v)
      w |= mask;
    else
      w &= ~mask;
  }

  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / 64] ^= std::uint64_t{1} << (c % 64);
  }

  // row dst ^= row src
  void xor_rows(std::size_t dst, std::size_t src) {
    std::uint64_t* d = &data_[dst * stride_];
    const std::uint64_t* s = &data_[src * stride_];
    for (std::size_t w = 0; w < stride_; ++w) d[w] ^= s[w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint64_t* pa = &data_[a * stride_];
    std::uint64_t* pb = &data_[b * stride_];
    for (std::size_t w = 0; w < stride_; ++w) std::swap(pa[w], pb[w]);
  }

  BitVec row_bits(std::size_t r) const {
    BitVec out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = get(r, c);
    return out;
  }

  // Column c packed into 64-bit words, bit r of the column at word r/64.
  std::vector<std::uint64_t> column_words(std::size_t c) const {
    std::vector<std::uint64_t> out((rows_ + 63) / 64, 0);
    for (std::size_t r = 0; r < rows_; ++r)
      if (get(r, c)) out[r / 64] |= std::uint64_t{1} << (r % 64);
    return out;
  }

  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<std::uint64_t> data_;
};

// In-place reduced row echelon form. Returns the pivot columns in order;
// rank = pivot count.
inline std::vector<std::size_t> gf2_rref(Gf2Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && !m.get(sel, col)) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(row, sel);
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != row && m.get(r, col)) m.xor_rows(r, row);
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t gf2_rank(Gf2Matrix m) { return gf2_rref(m).size(); }

// Basis of the right null space of h, returned as an n x k' matrix whose
// columns are the basis vectors (k' = n - rank).
inline Gf2Matrix gf2_null_space(Gf2Matrix h) {
  std::vector<std::size_t> pivots = gf2_rref(h);
  const std::size_t n = h.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : pivots) is_pivot[p] = true;

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  Gf2Matrix basis(n, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    std::size_t f = free_cols[j];
    basis.set(f, j, true);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (h.get(i, f)) basis.set(pivots[i], j, true);
  }
  return basis;
}

}  // namespace eccpow
