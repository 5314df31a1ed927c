#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dignet {

class Rng;

/// Dense bit vector over GF(2). Bit i lives in word i/64 at position i%64;
/// padding bits above size() are kept zero.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}
  static BitVector from_string(std::string_view s);
  static BitVector random(std::size_t len, Rng& rng);

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const;
  std::size_t popcount() const;

  // addition over GF(2)
  void xor_with(const BitVector& other);
  BitVector operator^(const BitVector& other) const;

  /// Parity of the bitwise AND with `mask` (inner product over GF(2)).
  bool dot(const BitVector& mask) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
  friend class BitMatrix;
};

/// Dense row-major bit matrix over GF(2). Empty matrices (0 rows and/or
/// 0 columns) are legal everywhere.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {}

  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng);
  static BitMatrix from_rows(const std::vector<std::string>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t m = std::uint64_t{1} << (c & 63);
    std::uint64_t& w = bits_[r * wpr_ + (c >> 6)];
    if (v) w |= m; else w &= ~m;
  }

  BitVector row(std::size_t r) const;
  void set_row(std::size_t r, const BitVector& v);
  void xor_row_into(std::size_t src, std::size_t dst);  // row dst ^= row src
  void swap_rows(std::size_t a, std::size_t b);
  bool row_is_zero(std::size_t r) const;

  /// Matrix product over GF(2); cols() must equal other.rows().
  BitMatrix multiply(const BitMatrix& other) const;
  /// Matrix-vector product over GF(2); x.size() must equal cols().
  BitVector apply(const BitVector& x) const;
  BitMatrix transposed() const;

  /// In-place reduced row-echelon form; returns the pivot columns.
  std::vector<std::size_t> rref();

  std::string to_string() const;
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Row product v*A over GF(2) (v.size() == A.rows()).
BitVector row_times_matrix(const BitVector& v, const BitMatrix& a);

BitMatrix stack_rows(const BitMatrix& top, const BitMatrix& bottom);

/// Rank over GF(2); 0 for an empty matrix.
std::size_t rank(BitMatrix a);

/// Number of x with A x = y over GF(2); always 0 or 2^(cols - rank).
std::uint64_t solve_count(const BitMatrix& a, const BitVector& y);

/// Canonical basis (reduced row-echelon, zero rows dropped) of the row space.
BitMatrix row_space_basis(BitMatrix a);

/// Canonical basis of {x : A x = 0}, one basis vector per matrix row.
BitMatrix null_space_basis(const BitMatrix& a);

/// Canonical basis of the intersection of the given row spaces. All inputs
/// must share a column count. The empty list is rejected.
BitMatrix intersect_row_spaces(std::span<const BitMatrix> bases);
BitMatrix intersect_row_spaces(const BitMatrix& a, const BitMatrix& b);

bool in_row_space(const BitMatrix& a, const BitVector& v);

}  // namespace dignet
