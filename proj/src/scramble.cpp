#include "dignet/scramble.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "dignet/rng.hpp"

namespace dignet {

namespace {

void check_precision(unsigned m, unsigned E) {
  if (E < m) throw std::invalid_argument("scramble: precision E must be >= m");
  if (E > 64) throw std::invalid_argument("scramble: precision E above 64 unsupported");
}

}  // namespace

ScrambleSet ScrambleSet::trivial(unsigned m, unsigned s, unsigned E) {
  check_precision(m, E);
  ScrambleSet scr{s, m, E, {}, {}};
  BitMatrix mat(E, m);
  for (unsigned r = 0; r < m; ++r) mat.set(r, r, true);
  scr.mats.assign(s, mat);
  scr.shifts.assign(s, BitVector(E));
  return scr;
}

ScrambleSet random_scramble(unsigned m, unsigned s, unsigned E, Rng& rng) {
  check_precision(m, E);
  if (s < 1) throw std::invalid_argument("random_scramble: s must be >= 1");
  ScrambleSet scr{s, m, E, {}, {}};
  scr.mats.reserve(s);
  scr.shifts.reserve(s);
  for (unsigned j = 0; j < s; ++j) {
    BitMatrix mat(E, m);
    for (unsigned r = 0; r < E; ++r) {
      if (r < m) {
        std::uint64_t below = rng.bits(r);  // columns 1..r of row r+1
        for (unsigned c = 0; c < r; ++c)
          if ((below >> c) & 1u) mat.set(r, c, true);
        mat.set(r, r, true);
      } else {
        std::uint64_t free = rng.bits(m);
        for (unsigned c = 0; c < m; ++c)
          if ((free >> c) & 1u) mat.set(r, c, true);
      }
    }
    scr.mats.push_back(std::move(mat));
    scr.shifts.push_back(BitVector::random(E, rng));
  }
  return scr;
}

ScrambleSet random_scramble(unsigned m, unsigned s, unsigned E, std::uint64_t seed) {
  Rng rng(seed);
  return random_scramble(m, s, E, rng);
}

PointSet::PointSet(unsigned m, unsigned s, unsigned E)
    : m_(m), s_(s), E_(E), words_((std::size_t{1} << m) * s, 0) {
  if (E > 64) throw std::invalid_argument("PointSet: precision above 64 unsupported");
}

BitVector PointSet::digits(std::size_t i, unsigned j) const {
  BitVector v(E_);
  std::uint64_t w = word(i, j);
  for (unsigned l = 1; l <= E_; ++l)
    if ((w >> (E_ - l)) & 1u) v.set(l - 1, true);
  return v;
}

double PointSet::coord(std::size_t i, unsigned j) const {
  if (E_ == 0) return 0.0;
  return std::ldexp(static_cast<double>(word(i, j)), -static_cast<int>(E_));
}

namespace {

// Digit word of an E-bit column vector (digit l at bit E-l).
std::uint64_t pack_digits(const BitVector& v, unsigned E) {
  std::uint64_t w = 0;
  for (unsigned l = 1; l <= E; ++l)
    if (v.get(l - 1)) w |= std::uint64_t{1} << (E - l);
  return w;
}

PointSet points_from_digit_map(const BitMatrix* per_coord, const BitVector* shift,
                               unsigned m, unsigned s, unsigned E) {
  PointSet pts(m, s, E);
  std::vector<std::uint64_t> cols(m);
  for (unsigned j = 0; j < s; ++j) {
    const BitMatrix& a = per_coord[j];
    for (unsigned b = 0; b < m; ++b) {
      BitVector col(E);
      for (unsigned r = 0; r < E; ++r) col.set(r, a.get(r, b));
      cols[b] = pack_digits(col, E);
    }
    std::uint64_t d = shift ? pack_digits(shift[j], E) : 0;
    for (std::size_t i = 0; i < pts.n(); ++i) {
      std::uint64_t w = d;
      std::uint64_t rem = i;
      while (rem) {
        unsigned b = static_cast<unsigned>(std::countr_zero(rem));
        w ^= cols[b];
        rem &= rem - 1;
      }
      pts.set_word(i, j, w);
    }
  }
  return pts;
}

}  // namespace

PointSet generate_points(const GeneratorSet& gens, const ScrambleSet& scr) {
  if (scr.m != gens.m || scr.s != gens.s)
    throw std::invalid_argument("generate_points: scramble/generator shape mismatch");
  std::vector<BitMatrix> maps;
  maps.reserve(gens.s);
  for (unsigned j = 0; j < gens.s; ++j)
    maps.push_back(scr.mats[j].multiply(gens.mat(j)));  // E x m
  return points_from_digit_map(maps.data(), scr.shifts.data(), gens.m, gens.s, scr.E);
}

PointSet unscrambled_points(const GeneratorSet& gens) {
  return points_from_digit_map(gens.mats.data(), nullptr, gens.m, gens.s, gens.m);
}

bool elementary_interval_census(const PointSet& pts,
                                std::span<const unsigned> shape, unsigned t) {
  if (shape.size() != pts.s())
    throw std::invalid_argument("census: shape dimension mismatch");
  unsigned total = 0;
  for (unsigned k : shape) {
    if (k > pts.precision())
      throw std::invalid_argument("census: precision insufficient for shape");
    total += k;
  }
  if (total + t != pts.m())
    throw std::invalid_argument("census: shape must satisfy sum(k) = m - t");
  std::vector<std::size_t> counts(std::size_t{1} << total, 0);
  for (std::size_t i = 0; i < pts.n(); ++i) {
    std::size_t idx = 0;
    for (unsigned j = 0; j < pts.s(); ++j) {
      unsigned k = shape[j];
      std::uint64_t lead = k == 0 ? 0 : pts.word(i, j) >> (pts.precision() - k);
      idx = (idx << k) | lead;
    }
    ++counts[idx];
  }
  const std::size_t want = std::size_t{1} << t;
  for (std::size_t c : counts)
    if (c != want) return false;
  return true;
}

bool census_all_shapes(const PointSet& pts, unsigned t) {
  if (t > pts.m()) throw std::invalid_argument("census_all_shapes: t above m");
  unsigned d = pts.m() - t;
  std::vector<unsigned> shape(pts.s(), 0);
  shape[0] = d;
  while (true) {
    bool valid = true;
    for (unsigned k : shape)
      if (k > pts.precision()) { valid = false; break; }
    if (valid && !elementary_interval_census(pts, shape, t)) return false;
    // next composition of d
    unsigned s = pts.s();
    bool advanced = false;
    for (unsigned i = s - 1; i-- > 0;) {
      if (shape[i] == 0) continue;
      --shape[i];
      unsigned rest = 1;
      for (unsigned k = i + 1; k < s; ++k) { rest += shape[k]; shape[k] = 0; }
      shape[i + 1] = rest;
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  return true;
}

int wal_at(const PointSet& pts, std::size_t i, const KappaVector& kvec) {
  if (kvec.dim() != pts.s()) throw std::invalid_argument("wal_at: dimension mismatch");
  unsigned parity = 0;
  for (unsigned j = 0; j < pts.s(); ++j) {
    const KappaSet& kap = kvec[j];
    if (kap.top() > pts.precision())
      throw std::invalid_argument("wal_at: precision shorter than the top index");
    std::uint64_t mask = 0;
    for (unsigned l : kap.elements()) mask |= std::uint64_t{1} << (pts.precision() - l);
    parity ^= std::popcount(pts.word(i, j) & mask) & 1u;
  }
  return parity ? -1 : 1;
}

}  // namespace dignet
