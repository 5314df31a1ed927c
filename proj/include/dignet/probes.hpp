#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dignet/events.hpp"
#include "dignet/moments.hpp"
#include "dignet/netgen.hpp"

namespace dignet {

/// Margin policy for stochastic verdicts: a bound probe passes when the
/// empirical frequency is at most bound + 4 SE, an equality probe when the
/// frequency sits within 4 SE of the target (two-sided false-alarm rate
/// about 6e-5 per probe).
inline constexpr double kMarginSes = 4.0;

struct BoundCheck {
  std::string what;
  double empirical = 0;
  double se = 0;
  double bound = 0;      // upper bound, or target for equality checks
  bool equality = false;
  bool pass = false;
};

struct ProbeResult {
  std::string probe;
  std::vector<BoundCheck> checks;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  bool pass = true;

  BoundCheck& add_bound(const std::string& what, double emp, double se, double bound);
  BoundCheck& add_equality(const std::string& what, double emp, double se, double target);
  void add_exact_zero(const std::string& what, std::uint64_t hits);
};

/// Empirical Pr(Z(k)) against the net bound 2^(t+s-m).
ProbeResult probe_single_event(const GeneratorSet& gens, const KappaVector& kvec,
                               std::uint64_t trials, std::uint64_t seed);

/// Empirical joint probability against 2^(-1.5(m-t-s)) always, against
/// 2^(-2(m-t-s)) when s <= 2 or the off-overlap tops of k1 reach m-t, plus a
/// product-independence check when no coordinate shares its top index.
ProbeResult probe_pair_event(const GeneratorSet& gens, const KappaVector& k1,
                             const KappaVector& k2, std::uint64_t trials,
                             std::uint64_t seed);

/// Empirical Pr(t >= s log2 m) over uniformly random generator sets against
/// 1/((s-1)! m); also reports the older ceil((s-1)log2 m + log2((s-1)!))
/// style threshold for comparison.
ProbeResult probe_t_distribution(unsigned m, unsigned s, std::uint64_t draws,
                                 std::uint64_t seed);

/// Joint frequency over fresh draws of both the generators and the scramble
/// against the exact value 2^-2m (equality probe). Requires distinct nonzero
/// indices with all tops at most m.
ProbeResult probe_random_pair_law(unsigned m, unsigned s, const KappaVector& k1,
                                  const KappaVector& k2, std::uint64_t trials,
                                  std::uint64_t seed);

struct CstarOptions {
  double epsilon = 0.5;
  unsigned c_draws = 200;
  unsigned pair_samples = 64;
  std::uint64_t trials = 0;  // optional MC cross-check of the worst pair
};

struct CstarEval {
  Rat worst_prob;          // largest conditional pair probability found
  KappaVector worst_k1, worst_k2;
  double threshold = 0;    // 2^(-2(1-eps)m)
  bool fails = false;      // worst_prob > threshold
};

/// Worst conditional pair probability of a FIXED generator set over a
/// sampled family of index pairs (exact, by affine-system rank over the
/// scramble's free bits). The universal quantifier over all pairs is not
/// checkable; only the sampled surrogate is evaluated.
CstarEval cstar_evaluate(const GeneratorSet& gens, double epsilon,
                         unsigned pair_samples, std::uint64_t seed);

/// Fraction of random generator sets whose sampled worst pair probability
/// exceeds 2^(-2(1-eps)m), against 1/((s-1)! m) + m^(3s) 2^(-2 eps m).
ProbeResult probe_cstar(unsigned m, unsigned s, const CstarOptions& opt,
                        std::uint64_t seed);

struct CIReport {
  std::string integrand;
  unsigned m = 0;
  unsigned R = 0;
  unsigned repetitions = 0;
  double level = 0;
  double coverage = 0;
  double se = 0;
  double mean_halfwidth = 0;
  std::uint64_t seed = 0;
};

/// Empirical coverage of the Student-t interval from R scramble replicates.
CIReport ci_coverage(const Integrand& f, const GeneratorSet& gens, unsigned E,
                     unsigned R, unsigned repetitions, double level,
                     std::uint64_t seed);

/// Student-t quantile via the regularized incomplete beta (continued
/// fraction) inverted by bisection.
double student_t_quantile(unsigned df, double p);

}  // namespace dignet
