#include "dignet/events.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "dignet/rng.hpp"

namespace dignet {

namespace {

void check_shapes(const KappaVector& kvec, const GeneratorSet& gens, unsigned E) {
  if (kvec.dim() != gens.s) throw std::invalid_argument("z_event: dimension mismatch");
  for (unsigned j = 0; j < gens.s; ++j)
    if (kvec[j].top() > E)
      throw std::invalid_argument("z_event: index exceeds scramble precision");
}

}  // namespace

bool z_event(const KappaVector& kvec, const GeneratorSet& gens, const ScrambleSet& scr) {
  if (scr.m != gens.m || scr.s != gens.s)
    throw std::invalid_argument("z_event: scramble/generator shape mismatch");
  check_shapes(kvec, gens, scr.E);
  BitVector acc(gens.m);
  for (unsigned j = 0; j < gens.s; ++j) {
    if (kvec[j].empty()) continue;
    BitVector v(gens.m);
    for (unsigned r : kvec[j].elements()) v.xor_with(scr.mats[j].row(r - 1));
    acc.xor_with(row_times_matrix(v, gens.mat(j)));
  }
  return !acc.any();
}

int s_sign(const KappaVector& kvec, const ScrambleSet& scr) {
  if (kvec.dim() != scr.s) throw std::invalid_argument("s_sign: dimension mismatch");
  unsigned parity = 0;
  for (unsigned j = 0; j < scr.s; ++j) {
    if (kvec[j].top() > scr.E)
      throw std::invalid_argument("s_sign: index exceeds scramble precision");
    for (unsigned l : kvec[j].elements()) parity ^= scr.shifts[j].get(l - 1) ? 1u : 0u;
  }
  return parity ? -1 : 1;
}

namespace {

// One free scramble bit M_j(row, col): row/col 1-based, row in the union of
// the two index sets, col < row for rows <= m, col <= m for rows > m.
struct Slot {
  unsigned j, row, col;
};

struct EventSystem {
  std::vector<Slot> slots;
  // Per event block: constant part (length m) and per-slot contribution rows.
  std::vector<BitVector> consts;                 // one per block
  std::vector<std::vector<BitVector>> contribs;  // [block][slot]
};

EventSystem build_system(const std::vector<const KappaVector*>& ks,
                         const GeneratorSet& gens, unsigned E) {
  for (const auto* k : ks) check_shapes(*k, gens, E);
  const unsigned m = gens.m;
  EventSystem sys;
  for (unsigned j = 0; j < gens.s; ++j) {
    std::uint64_t rows = 0;
    for (const auto* k : ks) rows |= (*k)[j].mask();
    std::uint64_t iter = rows;
    while (iter) {
      unsigned r = static_cast<unsigned>(std::countr_zero(iter)) + 1;
      iter &= iter - 1;
      unsigned ncols = r <= m ? r - 1 : m;
      for (unsigned c = 1; c <= ncols; ++c) sys.slots.push_back({j, r, c});
    }
  }
  sys.consts.assign(ks.size(), BitVector(m));
  sys.contribs.assign(ks.size(), std::vector<BitVector>(sys.slots.size(), BitVector(m)));
  for (std::size_t b = 0; b < ks.size(); ++b) {
    const KappaVector& k = *ks[b];
    for (unsigned j = 0; j < gens.s; ++j)
      for (unsigned r : k[j].elements())
        if (r <= m) sys.consts[b].xor_with(gens.mat(j).row(r - 1));  // diagonal ones
    for (std::size_t sl = 0; sl < sys.slots.size(); ++sl) {
      const Slot& slot = sys.slots[sl];
      if (k[slot.j].contains(slot.row))
        sys.contribs[b][sl] = gens.mat(slot.j).row(slot.col - 1);
    }
  }
  return sys;
}

Rat prob_exact(const std::vector<const KappaVector*>& ks,
               const GeneratorSet& gens, unsigned E) {
  EventSystem sys = build_system(ks, gens, E);
  const unsigned m = gens.m;
  const std::size_t nb = ks.size();
  // Equations over the slots: one per output column per event block,
  // augmented with the constant part.
  BitMatrix aug(nb * m, sys.slots.size() + 1);
  for (std::size_t b = 0; b < nb; ++b)
    for (unsigned out = 0; out < m; ++out) {
      std::size_t row = b * m + out;
      for (std::size_t sl = 0; sl < sys.slots.size(); ++sl)
        if (sys.contribs[b][sl].get(out)) aug.set(row, sl, true);
      aug.set(row, sys.slots.size(), sys.consts[b].get(out));
    }
  BitMatrix lhs(nb * m, sys.slots.size());
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c) lhs.set(r, c, aug.get(r, c));
  std::size_t r_lhs = rank(std::move(lhs));
  std::size_t r_aug = rank(std::move(aug));
  if (r_aug > r_lhs) return Rat(0);
  return pow2(-static_cast<long>(r_lhs));
}

Rat prob_enum(const std::vector<const KappaVector*>& ks,
              const GeneratorSet& gens, unsigned E) {
  EventSystem sys = build_system(ks, gens, E);
  if (sys.slots.size() > 28)
    throw std::invalid_argument("z_prob_enum: free-bit budget of 28 exceeded");
  const std::size_t nb = ks.size();
  std::vector<BitVector> acc = sys.consts;
  auto all_zero = [&] {
    for (const auto& a : acc)
      if (a.any()) return false;
    return true;
  };
  std::uint64_t hits = all_zero() ? 1 : 0;
  const std::uint64_t total = std::uint64_t{1} << sys.slots.size();
  for (std::uint64_t i = 1; i < total; ++i) {
    unsigned flip = static_cast<unsigned>(std::countr_zero(i));  // Gray-code step
    for (std::size_t b = 0; b < nb; ++b) acc[b].xor_with(sys.contribs[b][flip]);
    if (all_zero()) ++hits;
  }
  return Rat(hits) / Rat(mpz_class(1) << sys.slots.size());
}

McEstimate prob_mc(const std::vector<const KappaVector*>& ks,
                   const GeneratorSet& gens, unsigned E,
                   std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("z_prob_mc: trials must be positive");
  for (const auto* k : ks) check_shapes(*k, gens, E);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::substream(seed, t);
    ScrambleSet scr = random_scramble(gens.m, gens.s, E, rng);
    bool all = true;
    for (const auto* k : ks)
      if (!z_event(*k, gens, scr)) { all = false; break; }
    if (all) ++hits;
  }
  McEstimate est;
  est.hits = hits;
  est.trials = trials;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  est.se = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

}  // namespace

Rat z_prob_exact(const KappaVector& kvec, const GeneratorSet& gens, unsigned E) {
  return prob_exact({&kvec}, gens, E);
}

Rat z_pair_prob_exact(const KappaVector& k1, const KappaVector& k2,
                      const GeneratorSet& gens, unsigned E) {
  if (k1 == k2) throw std::invalid_argument("z_pair_prob_exact: indices must differ");
  return prob_exact({&k1, &k2}, gens, E);
}

Rat z_prob_enum(const KappaVector& kvec, const GeneratorSet& gens, unsigned E) {
  return prob_enum({&kvec}, gens, E);
}

Rat z_pair_prob_enum(const KappaVector& k1, const KappaVector& k2,
                     const GeneratorSet& gens, unsigned E) {
  if (k1 == k2) throw std::invalid_argument("z_pair_prob_enum: indices must differ");
  return prob_enum({&k1, &k2}, gens, E);
}

McEstimate z_prob_mc(const KappaVector& kvec, const GeneratorSet& gens, unsigned E,
                     std::uint64_t trials, std::uint64_t seed) {
  return prob_mc({&kvec}, gens, E, trials, seed);
}

McEstimate z_pair_prob_mc(const KappaVector& k1, const KappaVector& k2,
                          const GeneratorSet& gens, unsigned E,
                          std::uint64_t trials, std::uint64_t seed) {
  return prob_mc({&k1, &k2}, gens, E, trials, seed);
}

}  // namespace dignet
