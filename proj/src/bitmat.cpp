#include "dignet/bitmat.hpp"

#include <bit>
#include <stdexcept>

#include "dignet/rng.hpp"

namespace dignet {

BitVector BitVector::from_string(std::string_view s) {
  BitVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') v.set(i, true);
    else if (s[i] != '0') throw std::invalid_argument("BitVector: expected '0' or '1'");
  }
  return v;
}

BitVector BitVector::random(std::size_t len, Rng& rng) {
  BitVector v(len);
  for (std::size_t w = 0; w + 1 < v.words_.size(); ++w) v.words_[w] = rng.word();
  if (len % 64 != 0 && !v.words_.empty())
    v.words_.back() = rng.bits(static_cast<unsigned>(len % 64));
  else if (!v.words_.empty() && len % 64 == 0)
    v.words_.back() = rng.word();
  return v;
}

bool BitVector::any() const {
  for (auto w : words_) if (w) return true;
  return false;
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

void BitVector::xor_with(const BitVector& other) {
  if (other.len_ != len_) throw std::invalid_argument("BitVector: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
}

BitVector BitVector::operator^(const BitVector& other) const {
  BitVector r = *this;
  r.xor_with(other);
  return r;
}

bool BitVector::dot(const BitVector& mask) const {
  if (mask.len_ != len_) throw std::invalid_argument("BitVector: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & mask.words_[w];
  return std::popcount(acc) & 1u;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) if (get(i)) s[i] = '1';
  return s;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) m.set_row(r, BitVector::random(cols, rng));
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
  BitMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw std::invalid_argument("BitMatrix: ragged rows");
    m.set_row(r, BitVector::from_string(rows[r]));
  }
  return m;
}

BitVector BitMatrix::row(std::size_t r) const {
  BitVector v(cols_);
  for (std::size_t w = 0; w < wpr_; ++w) v.words_[w] = bits_[r * wpr_ + w];
  return v;
}

void BitMatrix::set_row(std::size_t r, const BitVector& v) {
  if (v.size() != cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
  for (std::size_t w = 0; w < wpr_; ++w) bits_[r * wpr_ + w] = v.words_[w];
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
  for (std::size_t w = 0; w < wpr_; ++w) bits_[dst * wpr_ + w] ^= bits_[src * wpr_ + w];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t w = 0; w < wpr_; ++w)
    std::swap(bits_[a * wpr_ + w], bits_[b * wpr_ + w]);
}

bool BitMatrix::row_is_zero(std::size_t r) const {
  for (std::size_t w = 0; w < wpr_; ++w) if (bits_[r * wpr_ + w]) return false;
  return true;
}

BitMatrix BitMatrix::multiply(const BitMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("BitMatrix: product shape mismatch");
  BitMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c))
        for (std::size_t w = 0; w < other.wpr_; ++w)
          out.bits_[r * out.wpr_ + w] ^= other.bits_[c * other.wpr_ + w];
  return out;
}

BitVector BitMatrix::apply(const BitVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("BitMatrix: apply shape mismatch");
  BitVector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < wpr_; ++w) acc ^= bits_[r * wpr_ + w] & x.words_[w];
    if (std::popcount(acc) & 1u) y.set(r, true);
  }
  return y;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r, true);
  return out;
}

std::vector<std::size_t> BitMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols_ && next < rows_; ++c) {
    std::size_t p = next;
    while (p < rows_ && !get(p, c)) ++p;
    if (p == rows_) continue;
    swap_rows(p, next);
    for (std::size_t r = 0; r < rows_; ++r)
      if (r != next && get(r, c)) xor_row_into(next, r);
    pivots.push_back(c);
    ++next;
  }
  return pivots;
}

std::string BitMatrix::to_string() const {
  std::string s;
  for (std::size_t r = 0; r < rows_; ++r) {
    s += row(r).to_string();
    s += '\n';
  }
  return s;
}

BitVector row_times_matrix(const BitVector& v, const BitMatrix& a) {
  if (v.size() != a.rows()) throw std::invalid_argument("row_times_matrix: shape mismatch");
  BitVector out(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (v.get(r)) out.xor_with(a.row(r));
  return out;
}

BitMatrix stack_rows(const BitMatrix& top, const BitMatrix& bottom) {
  if (top.cols() != bottom.cols())
    throw std::invalid_argument("stack_rows: column mismatch");
  BitMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r) out.set_row(r, top.row(r));
  for (std::size_t r = 0; r < bottom.rows(); ++r) out.set_row(top.rows() + r, bottom.row(r));
  return out;
}

std::size_t rank(BitMatrix a) { return a.rref().size(); }

std::uint64_t solve_count(const BitMatrix& a, const BitVector& y) {
  if (y.size() != a.rows()) throw std::invalid_argument("solve_count: rhs length mismatch");
  BitMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.set(r, c, a.get(r, c));
    aug.set(r, a.cols(), y.get(r));
  }
  std::size_t r_a = rank(a);
  std::size_t r_aug = rank(std::move(aug));
  if (r_aug > r_a) return 0;  // inconsistent
  std::size_t free_dim = a.cols() - r_a;
  if (free_dim >= 64) throw std::overflow_error("solve_count: solution count exceeds 2^63");
  return std::uint64_t{1} << free_dim;
}

BitMatrix row_space_basis(BitMatrix a) {
  std::size_t r = a.rref().size();
  BitMatrix out(r, a.cols());
  for (std::size_t i = 0; i < r; ++i) out.set_row(i, a.row(i));
  return out;
}

BitMatrix null_space_basis(const BitMatrix& a) {
  BitMatrix r = a;
  std::vector<std::size_t> pivots = r.rref();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  BitMatrix out(a.cols() - pivots.size(), a.cols());
  std::size_t bi = 0;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    out.set(bi, f, true);
    for (std::size_t p = 0; p < pivots.size(); ++p)
      if (r.get(p, f)) out.set(bi, pivots[p], true);
    ++bi;
  }
  return out;
}

BitMatrix intersect_row_spaces(const BitMatrix& a, const BitMatrix& b) {
  const BitMatrix u = row_space_basis(a);
  const BitMatrix v = row_space_basis(b);
  if (u.cols() != v.cols())
    throw std::invalid_argument("intersect_row_spaces: column mismatch");
  if (u.rows() == 0 || v.rows() == 0) return BitMatrix(0, u.cols());
  // Left kernel of [U; V]: every w = (p|q) with pU + qV = 0 yields the
  // intersection vector pU.
  BitMatrix stacked = stack_rows(u, v);
  BitMatrix kernel = null_space_basis(stacked.transposed());
  BitMatrix gens(kernel.rows(), u.cols());
  for (std::size_t i = 0; i < kernel.rows(); ++i) {
    BitVector acc(u.cols());
    for (std::size_t r = 0; r < u.rows(); ++r)
      if (kernel.get(i, r)) acc.xor_with(u.row(r));
    gens.set_row(i, acc);
  }
  return row_space_basis(std::move(gens));
}

BitMatrix intersect_row_spaces(std::span<const BitMatrix> bases) {
  if (bases.empty()) throw std::invalid_argument("intersect_row_spaces: empty list");
  BitMatrix cur = row_space_basis(bases[0]);
  for (std::size_t i = 1; i < bases.size(); ++i)
    cur = intersect_row_spaces(cur, bases[i]);
  return cur;
}

bool in_row_space(const BitMatrix& a, const BitVector& v) {
  BitMatrix basis = row_space_basis(a);
  std::size_t r0 = basis.rows();
  BitMatrix ext(r0 + 1, a.cols());
  for (std::size_t r = 0; r < r0; ++r) ext.set_row(r, basis.row(r));
  ext.set_row(r0, v);
  return rank(std::move(ext)) == r0;
}

}  // namespace dignet
