#pragma once

#include <gmpxx.h>

#include <string>

namespace dignet {

/// Exact rational arithmetic for the series oracles and probability rules.
/// Floating point appears only when a value is reported.
using Rat = mpq_class;

/// 2^e as an exact rational, e of either sign.
inline Rat pow2(long e) {
  mpz_class num = 1, den = 1;
  if (e >= 0) num <<= static_cast<unsigned long>(e);
  else den <<= static_cast<unsigned long>(-e);
  return Rat(num, den);
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace dignet
