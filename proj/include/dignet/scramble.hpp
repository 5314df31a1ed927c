#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dignet/bitmat.hpp"
#include "dignet/kappa.hpp"
#include "dignet/netgen.hpp"

namespace dignet {

class Rng;

/// Random linear scramble: per coordinate an E x m matrix M_j with unit
/// diagonal, zeros above the diagonal and free bits below (rows past m are
/// fully free), plus an E-bit digital shift D_j. Precision E is capped at 64
/// so a coordinate's digits fit one word.
struct ScrambleSet {
  unsigned s = 1;
  unsigned m = 0;
  unsigned E = 0;
  std::vector<BitMatrix> mats;    // s matrices, E x m
  std::vector<BitVector> shifts;  // s vectors, E bits

  /// M_j = [I_m; 0], D_j = 0: scrambled points equal the raw net.
  static ScrambleSet trivial(unsigned m, unsigned s, unsigned E);
};

ScrambleSet random_scramble(unsigned m, unsigned s, unsigned E, std::uint64_t seed);
ScrambleSet random_scramble(unsigned m, unsigned s, unsigned E, Rng& rng);

/// 2^m points of s coordinates, each an E-digit binary fraction packed into
/// a word with digit 1 (the most significant) at bit E-1.
class PointSet {
public:
  PointSet(unsigned m, unsigned s, unsigned E);

  unsigned m() const { return m_; }
  unsigned s() const { return s_; }
  unsigned precision() const { return E_; }
  std::size_t n() const { return std::size_t{1} << m_; }

  std::uint64_t word(std::size_t i, unsigned j) const { return words_[i * s_ + j]; }
  void set_word(std::size_t i, unsigned j, std::uint64_t w) { words_[i * s_ + j] = w; }

  bool digit(std::size_t i, unsigned j, unsigned l) const {
    return (word(i, j) >> (E_ - l)) & 1u;
  }
  BitVector digits(std::size_t i, unsigned j) const;

  /// Coordinate value as a binary64 number; exact whenever E <= 53.
  double coord(std::size_t i, unsigned j) const;

private:
  unsigned m_, s_, E_;
  std::vector<std::uint64_t> words_;
};

PointSet generate_points(const GeneratorSet& gens, const ScrambleSet& scr);

/// Precision-m points of the raw (unrandomized) net.
PointSet unscrambled_points(const GeneratorSet& gens);

/// True iff every dyadic box of shape (2^-k_1, ..., 2^-k_s) holds exactly
/// 2^t points. Requires sum(k_j) = m - t and E >= max(k_j).
bool elementary_interval_census(const PointSet& pts,
                                std::span<const unsigned> shape, unsigned t);

/// The census over every shape with sum(k_j) = m - t.
bool census_all_shapes(const PointSet& pts, unsigned t);

/// Multivariate Walsh function at point i (+-1). Requires top(kappa_j) <= E.
int wal_at(const PointSet& pts, std::size_t i, const KappaVector& kvec);

}  // namespace dignet
