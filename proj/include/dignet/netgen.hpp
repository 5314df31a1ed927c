#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dignet/bitmat.hpp"

namespace dignet {

class Rng;

/// The s generator matrices of a base-2 digital net with 2^m points.
/// Row l of C_j produces fractional digit l of coordinate j; column c
/// multiplies bit c of the point index (bit 1 = least significant).
struct GeneratorSet {
  unsigned m = 0;
  unsigned s = 1;
  std::vector<BitMatrix> mats;  // s matrices, each m x m

  const BitMatrix& mat(unsigned j) const { return mats[j]; }  // 0-based
};

/// Quality of an s=3 set under the row-space-intersection parameter:
/// minimal_nontrivial_sum is the smallest l1+l2+l3 (1 <= l_j <= m) with a
/// nontrivial triple intersection (0 when none exists), and
/// T = max(0, 2m - minimal_nontrivial_sum + 1).
struct TripleQuality {
  unsigned T = 0;
  unsigned minimal_nontrivial_sum = 0;
  std::array<unsigned, 3> witness{0, 0, 0};
};

GeneratorSet identity_generators(unsigned m, unsigned s);

/// Every entry of every C_j an independent fair bit; deterministic in seed.
GeneratorSet random_generators(unsigned m, unsigned s, std::uint64_t seed);
GeneratorSet random_generators(unsigned m, unsigned s, Rng& rng);

/// The classical s=3 base-2 triple {identity, binary Pascal, row reversal};
/// gives t = 0 at every m (verified by tests, not assumed).
GeneratorSet classic3_generators(unsigned m);

/// A t <= 1 three-dimensional base of size m for embed_counterexample:
/// tries classic3_generators first, then seeded random search within the
/// given budget. Throws when nothing qualifies.
GeneratorSet find_base3(unsigned m, std::uint64_t seed, unsigned budget = 2000);

/// Block embedding that inserts a shared unit row/column at position r = m/2
/// into a t <= 1 three-dimensional base of size m-1. The result generates a
/// net with t <= 2 whose triple row spaces all contain e_r at depth r, so the
/// intersection parameter T grows like m/2.
GeneratorSet embed_counterexample(const GeneratorSet& base);

/// Quality parameter t: smallest t such that every stack of first-q_j rows
/// with q_1+...+q_s = m-t has full row rank. Uses a depth-first shared
/// elimination across compositions with a common prefix.
unsigned t_value(const GeneratorSet& gens);

/// Same value by independent per-composition elimination (reference path).
unsigned t_value_plain(const GeneratorSet& gens);

/// Rank of Row(C_1,l1) n Row(C_2,l2) n Row(C_3,l3); requires s = 3.
unsigned triple_intersection_rank(const GeneratorSet& gens,
                                  unsigned l1, unsigned l2, unsigned l3);

TripleQuality big_t_value(const GeneratorSet& gens);

/// Text format: header "dignet v1 m=<m> s=<s>", then per matrix m lines of
/// m characters over {0,1}, matrices separated by one blank line.
std::string serialize_generators(const GeneratorSet& gens);
GeneratorSet parse_generators(const std::string& text);
void save_generators(const GeneratorSet& gens, const std::string& path);
GeneratorSet load_generators(const std::string& path);

}  // namespace dignet
