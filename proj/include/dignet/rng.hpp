#pragma once

#include <cstdint>
#include <random>

namespace dignet {

/// Deterministic seeded bit source. Substreams derived from (seed, stream)
/// are independent and reproducible across platforms (mt19937_64 seeded
/// through a splitmix64 mix is fully specified by the standard), so
/// replicate-level work can be partitioned across workers without changing
/// any drawn value.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    std::uint64_t a = mix(x);
    std::uint64_t b = mix(x);
    eng_.seed(a ^ (b << 1));
  }

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(seed, stream);
  }

  std::uint64_t word() { return eng_(); }

  /// Low n bits of a fresh draw, n in [0, 64].
  std::uint64_t bits(unsigned n) {
    if (n == 0) return 0;
    std::uint64_t w = eng_();
    return n >= 64 ? w : (w & ((std::uint64_t{1} << n) - 1));
  }

  bool bit() {
    if (navail_ == 0) {
      buf_ = eng_();
      navail_ = 64;
    }
    bool b = buf_ & 1u;
    buf_ >>= 1;
    --navail_;
    return b;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(eng_);
  }

private:
  static std::uint64_t mix(std::uint64_t& x) {
    // splitmix64 step
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
  std::uint64_t buf_ = 0;
  unsigned navail_ = 0;
};

}  // namespace dignet
