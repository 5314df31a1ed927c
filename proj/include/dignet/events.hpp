#pragma once

#include <cstdint>
#include <optional>

#include "dignet/kappa.hpp"
#include "dignet/netgen.hpp"
#include "dignet/rational.hpp"
#include "dignet/scramble.hpp"

namespace dignet {

/// The vanishing event for Walsh index k: sum_j (sum of the kappa_j rows of
/// M_j) C_j = 0 over GF(2). Requires top(kappa_j) <= E for every coordinate.
bool z_event(const KappaVector& kvec, const GeneratorSet& gens, const ScrambleSet& scr);

/// Sign the digital shift attaches to index k: (-1)^(sum of selected shift bits).
int s_sign(const KappaVector& kvec, const ScrambleSet& scr);

/// Exact Pr(Z(k)) over the scramble distribution for fixed generators,
/// by rank of the affine system the event imposes on the free scramble bits.
Rat z_prob_exact(const KappaVector& kvec, const GeneratorSet& gens, unsigned E);

/// Exact Pr(Z(k1) and Z(k2)), same method.
Rat z_pair_prob_exact(const KappaVector& k1, const KappaVector& k2,
                      const GeneratorSet& gens, unsigned E);

/// Exhaustive-enumeration ground truth for the same probabilities. The
/// referenced free bits are enumerated in Gray-code order; budgets above
/// 28 bits are rejected.
Rat z_prob_enum(const KappaVector& kvec, const GeneratorSet& gens, unsigned E);
Rat z_pair_prob_enum(const KappaVector& k1, const KappaVector& k2,
                     const GeneratorSet& gens, unsigned E);

struct McEstimate {
  double estimate = 0;
  double se = 0;  // binomial standard error
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

McEstimate z_prob_mc(const KappaVector& kvec, const GeneratorSet& gens, unsigned E,
                     std::uint64_t trials, std::uint64_t seed);
McEstimate z_pair_prob_mc(const KappaVector& k1, const KappaVector& k2,
                          const GeneratorSet& gens, unsigned E,
                          std::uint64_t trials, std::uint64_t seed);

}  // namespace dignet
