#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "dignet/bitmat.hpp"
#include "dignet/rational.hpp"

namespace dignet {

/// Finite set kappa of digit positions 1..64 encoding a Walsh index k:
/// position l is in kappa iff bit 2^(l-1) of k is set, so k and kappa
/// determine each other. The positions cap B = 64 keeps the mask in one
/// word; every series truncation used here sits far below it.
class KappaSet {
public:
  KappaSet() = default;

  /// kappa from the binary digits of k. With max_index < 64, k >= 2^max_index
  /// is rejected as an index overflow.
  static KappaSet from_k(std::uint64_t k, unsigned max_index = 64);
  static KappaSet of(std::initializer_list<unsigned> elements);

  std::uint64_t k() const { return mask_; }
  std::uint64_t mask() const { return mask_; }

  bool empty() const { return mask_ == 0; }
  bool contains(unsigned l) const {
    return l >= 1 && l <= 64 && ((mask_ >> (l - 1)) & 1u);
  }
  unsigned card() const;           // |kappa|
  unsigned top() const;            // largest element, 0 for the empty set
  unsigned second() const;         // second largest, 0 when |kappa| <= 1
  unsigned top2() const;           // sum of the two largest (= top when |kappa| <= 1)
  std::vector<unsigned> elements() const;  // ascending

  KappaSet operator^(KappaSet o) const { KappaSet r; r.mask_ = mask_ ^ o.mask_; return r; }
  friend bool operator==(KappaSet, KappaSet) = default;

private:
  std::uint64_t mask_ = 0;
};

/// Per-coordinate Walsh index for an s-dimensional integrand.
class KappaVector {
public:
  KappaVector() = default;
  explicit KappaVector(std::vector<KappaSet> comps) : comps_(std::move(comps)) {}
  static KappaVector from_ks(const std::vector<std::uint64_t>& ks, unsigned max_index = 64);

  unsigned dim() const { return static_cast<unsigned>(comps_.size()); }
  const KappaSet& operator[](unsigned j) const { return comps_[j]; }
  const std::vector<KappaSet>& comps() const { return comps_; }

  bool is_zero() const;
  std::vector<unsigned> support() const;   // 1-based coordinates with nonempty kappa
  unsigned card_sum() const;               // sum of |kappa_j|
  unsigned top_sum() const;                // sum of largest elements
  unsigned top2_sum() const;               // sum of two-largest sums

  KappaVector operator^(const KappaVector& o) const;
  friend bool operator==(const KappaVector&, const KappaVector&) = default;

private:
  std::vector<KappaSet> comps_;
};

/// Univariate Walsh function value (-1)^(sum of selected digits) at a point
/// given by its fractional digits (digits.get(l-1) is digit l, the most
/// significant first). Requires digits.size() >= kappa.top().
int wal(KappaSet kappa, const BitVector& digits);

/// Exact Walsh coefficient of f(x) = x^2: 1/3 at k = 0, -2^(-l-1) for a
/// singleton {l}, 2^(-l1-l2-1) for a two-element set, 0 otherwise.
Rat walsh_coeff_xsq(KappaSet kappa);

/// Coefficient of the product integrand prod_j x_j^2 (per-coordinate product).
Rat walsh_coeff_prod_xsq(const KappaVector& kvec);

/// Relaxed decay bound deriv_sup * 2^(-sum of two-largest sums), used only
/// for series-tail truncation control.
double walsh_decay_bound(const KappaVector& kvec, double deriv_sup);

/// Exact finite sum T(l1, l2, l12) over pairs (kappa1, kappa2) with tops
/// l1, l2 and kappa1 xor kappa2 topping at l12, of
/// 2^(-top2(k1) - top2(k2) - top2(k12)). Arguments above 20 are rejected
/// (enumeration cost 2^(l1+l2)).
Rat t_sum(unsigned l1, unsigned l2, unsigned l12);

}  // namespace dignet
