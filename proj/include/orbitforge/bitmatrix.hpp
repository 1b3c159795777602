// Bit-packed 0/1 matrix. Rows are contiguous runs of 64-bit words, so row
// intersections reduce to AND + popcount.
#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

class BitMatrix {
 public:
  static constexpr int kMaxDim = 1024;

  BitMatrix() : rows_(0), cols_(0), words_(0) {}

  BitMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0 || rows > kMaxDim || cols > kMaxDim) {
      throw Error("BitMatrix dimensions out of range (max " +
                  std::to_string(kMaxDim) + ")");
    }
    words_ = (cols_ + 63) / 64;
    w_.assign(static_cast<size_t>(rows_) * words_, 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int words_per_row() const { return words_; }

  bool get(int r, int c) const {
    return (w_[static_cast<size_t>(r) * words_ + (c >> 6)] >> (c & 63)) & 1u;
  }

  void set(int r, int c, bool v) {
    uint64_t& word = w_[static_cast<size_t>(r) * words_ + (c >> 6)];
    uint64_t mask = uint64_t{1} << (c & 63);
    if (v)
      word |= mask;
    else
      word &= ~mask;
  }

  const uint64_t* row(int r) const { return w_.data() + static_cast<size_t>(r) * words_; }
  uint64_t* row(int r) { return w_.data() + static_cast<size_t>(r) * words_; }

  int row_popcount(int r) const {
    const uint64_t* p = row(r);
    int s = 0;
    for (int i = 0; i < words_; ++i) s += std::popcount(p[i]);
    return s;
  }

  int intersect_count(int r1, int r2) const {
    const uint64_t *a = row(r1), *b = row(r2);
    int s = 0;
    for (int i = 0; i < words_; ++i) s += std::popcount(a[i] & b[i]);
    return s;
  }

  static int intersect_count(const uint64_t* a, const uint64_t* b, int words) {
    int s = 0;
    for (int i = 0; i < words; ++i) s += std::popcount(a[i] & b[i]);
    return s;
  }

  // Flips every bit in the first `cols()` positions of each row.
  BitMatrix complemented() const {
    BitMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
      const uint64_t* src = row(r);
      uint64_t* dst = out.row(r);
      for (int i = 0; i < words_; ++i) dst[i] = ~src[i];
      if (cols_ & 63) dst[words_ - 1] &= (uint64_t{1} << (cols_ & 63)) - 1;
    }
    return out;
  }

  BitMatrix transposed() const {
    BitMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c)
        if (get(r, c)) out.set(c, r, true);
    return out;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.w_ == b.w_;
  }
  friend bool operator!=(const BitMatrix& a, const BitMatrix& b) { return !(a == b); }

  // Row-major packed bits (bit index r*cols+c, MSB-first within each byte),
  // ceil(rows*cols/8) bytes. Byte-wise lexicographic order equals bit-wise.
  std::vector<uint8_t> packed_bits() const {
    std::vector<uint8_t> out((static_cast<size_t>(rows_) * cols_ + 7) / 8, 0);
    size_t idx = 0;
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c, ++idx)
        if (get(r, c)) out[idx >> 3] |= static_cast<uint8_t>(0x80u >> (idx & 7));
    return out;
  }

  static BitMatrix from_packed_bits(int rows, int cols, const std::vector<uint8_t>& bytes) {
    BitMatrix out(rows, cols);
    size_t need = (static_cast<size_t>(rows) * cols + 7) / 8;
    if (bytes.size() != need) throw FormatError("packed bit length mismatch");
    size_t idx = 0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c, ++idx)
        if (bytes[idx >> 3] & (0x80u >> (idx & 7))) out.set(r, c, true);
    return out;
  }

 private:
  int rows_, cols_, words_;
  std::vector<uint64_t> w_;
};

}  // namespace orbitforge
