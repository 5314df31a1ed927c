#include "dignet/kappa.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dignet {

KappaSet KappaSet::from_k(std::uint64_t k, unsigned max_index) {
  if (max_index > 64) throw std::invalid_argument("KappaSet: max_index above 64");
  if (max_index < 64 && (k >> max_index) != 0)
    throw std::invalid_argument("KappaSet: index overflow, k >= 2^max_index");
  KappaSet s;
  s.mask_ = k;
  return s;
}

KappaSet KappaSet::of(std::initializer_list<unsigned> elements) {
  KappaSet s;
  for (unsigned l : elements) {
    if (l < 1 || l > 64) throw std::invalid_argument("KappaSet: element outside 1..64");
    s.mask_ |= std::uint64_t{1} << (l - 1);
  }
  return s;
}

unsigned KappaSet::card() const { return static_cast<unsigned>(std::popcount(mask_)); }

unsigned KappaSet::top() const { return static_cast<unsigned>(std::bit_width(mask_)); }

unsigned KappaSet::second() const {
  unsigned t = top();
  if (t == 0) return 0;
  std::uint64_t rest = mask_ & ~(std::uint64_t{1} << (t - 1));
  return static_cast<unsigned>(std::bit_width(rest));
}

unsigned KappaSet::top2() const { return top() + second(); }

std::vector<unsigned> KappaSet::elements() const {
  std::vector<unsigned> out;
  std::uint64_t m = mask_;
  while (m) {
    unsigned l = static_cast<unsigned>(std::countr_zero(m)) + 1;
    out.push_back(l);
    m &= m - 1;
  }
  return out;
}

KappaVector KappaVector::from_ks(const std::vector<std::uint64_t>& ks, unsigned max_index) {
  std::vector<KappaSet> comps;
  comps.reserve(ks.size());
  for (auto k : ks) comps.push_back(KappaSet::from_k(k, max_index));
  return KappaVector(std::move(comps));
}

bool KappaVector::is_zero() const {
  for (const auto& c : comps_) if (!c.empty()) return false;
  return true;
}

std::vector<unsigned> KappaVector::support() const {
  std::vector<unsigned> out;
  for (unsigned j = 0; j < dim(); ++j) if (!comps_[j].empty()) out.push_back(j + 1);
  return out;
}

unsigned KappaVector::card_sum() const {
  unsigned n = 0;
  for (const auto& c : comps_) n += c.card();
  return n;
}

unsigned KappaVector::top_sum() const {
  unsigned n = 0;
  for (const auto& c : comps_) n += c.top();
  return n;
}

unsigned KappaVector::top2_sum() const {
  unsigned n = 0;
  for (const auto& c : comps_) n += c.top2();
  return n;
}

KappaVector KappaVector::operator^(const KappaVector& o) const {
  if (o.dim() != dim()) throw std::invalid_argument("KappaVector: dimension mismatch");
  std::vector<KappaSet> comps(comps_.size());
  for (unsigned j = 0; j < dim(); ++j) comps[j] = comps_[j] ^ o.comps_[j];
  return KappaVector(std::move(comps));
}

int wal(KappaSet kappa, const BitVector& digits) {
  if (kappa.top() > digits.size())
    throw std::invalid_argument("wal: point precision shorter than the top index");
  unsigned parity = 0;
  for (unsigned l : kappa.elements()) parity ^= digits.get(l - 1) ? 1u : 0u;
  return parity ? -1 : 1;
}

Rat walsh_coeff_xsq(KappaSet kappa) {
  switch (kappa.card()) {
    case 0: return Rat(1, 3);
    case 1: return -pow2(-static_cast<long>(kappa.top()) - 1);
    case 2: return pow2(-static_cast<long>(kappa.top() + kappa.second()) - 1);
    default: return Rat(0);
  }
}

Rat walsh_coeff_prod_xsq(const KappaVector& kvec) {
  Rat prod(1);
  for (const auto& c : kvec.comps()) {
    if (c.card() > 2) return Rat(0);
    prod *= walsh_coeff_xsq(c);
  }
  return prod;
}

double walsh_decay_bound(const KappaVector& kvec, double deriv_sup) {
  return std::ldexp(deriv_sup, -static_cast<int>(kvec.top2_sum()));
}

namespace {

// All subsets of {1..l} whose largest element is exactly l (just the empty
// set for l = 0), as masks.
std::vector<std::uint64_t> masks_with_top(unsigned l) {
  if (l == 0) return {0};
  std::vector<std::uint64_t> out;
  std::uint64_t high = std::uint64_t{1} << (l - 1);
  std::uint64_t count = std::uint64_t{1} << (l - 1);
  out.reserve(count);
  for (std::uint64_t sub = 0; sub < count; ++sub) out.push_back(high | sub);
  return out;
}

}  // namespace

Rat t_sum(unsigned l1, unsigned l2, unsigned l12) {
  if (l1 > 20 || l2 > 20 || l12 > 20)
    throw std::invalid_argument("t_sum: arguments above 20 rejected");
  Rat total(0);
  for (std::uint64_t m1 : masks_with_top(l1)) {
    KappaSet k1 = KappaSet::from_k(m1);
    for (std::uint64_t m2 : masks_with_top(l2)) {
      KappaSet k2 = KappaSet::from_k(m2);
      KappaSet k12 = k1 ^ k2;
      if (k12.top() != l12) continue;
      total += pow2(-static_cast<long>(k1.top2() + k2.top2() + k12.top2()));
    }
  }
  return total;
}

}  // namespace dignet
