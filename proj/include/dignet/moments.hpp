#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "dignet/kappa.hpp"
#include "dignet/netgen.hpp"
#include "dignet/rational.hpp"
#include "dignet/scramble.hpp"

namespace dignet {

struct Integrand {
  std::string name;
  unsigned s = 1;
  double mu = 0;  // exact mean, used for exact centering
  std::function<double(std::span<const double>)> f;
};

/// Built-ins: "xsq" (s = 1, mean 1/3) and "prod_xsq" (any s, mean 3^-s).
Integrand make_integrand(const std::string& name, unsigned s);

/// Sample mean of f over the point set.
double rqmc_estimate(const Integrand& f, const PointSet& pts);

enum class Centering { KnownMean, SampleMean };

/// Central-moment estimates across scramble replicates. Standard errors come
/// from batch means with ceil(sqrt(R)) batches (the replicate distribution is
/// heavy-tailed, so batching beats the naive fourth-moment formula).
/// gamma/theta are absent when the variance estimate is zero.
struct MomentReport {
  std::uint64_t replicates = 0;
  double mean = 0;
  double var = 0;   // second central moment of the estimate
  double m3 = 0;    // third central moment
  double m4 = 0;    // fourth central moment
  std::optional<double> gamma;  // m3 / var^(3/2)
  std::optional<double> theta;  // m4 / var^2 - 3
  double se_mean = 0, se_var = 0, se_m3 = 0, se_m4 = 0;
  std::optional<double> se_gamma, se_theta;  // batch means of the ratio statistics
  std::uint64_t seed = 0;
  unsigned batches = 0;
  Centering centering = Centering::KnownMean;
};

MomentReport mc_moments(const Integrand& f, const GeneratorSet& gens, unsigned E,
                        std::uint64_t R, std::uint64_t seed,
                        Centering centering = Centering::KnownMean,
                        unsigned workers = 1);

/// (1/45 - 2^-2m/189) * 2^-6m, the exact third central moment of the
/// estimate for f(x)=x^2 with identity generators under the full scramble.
Rat closed_form_third_xsq(unsigned m);

struct SeriesValue {
  Rat value;          // exact truncated sum
  double tail_bound;  // analytic bound on everything omitted
  unsigned K = 0;     // truncation index (largest digit position kept)
};

/// The pair series for the third moment of the x^2 estimate with identity
/// generators, summed exactly over all index pairs supported on {1..K}.
/// Requires K >= m + 2.
SeriesValue exact_third_moment_xsq(unsigned m, unsigned K);

struct VarianceSeries {
  Rat value;              // exact truncated sum over indices in {1..K}
  Rat singleton_series;   // exact full sum of the singleton terms past m
  double tail_bound;
  unsigned K = 0;
};

VarianceSeries exact_variance_xsq(unsigned m, unsigned K);

/// Exact Pr(Z(k)) for s = 1, identity generators: 2^-m when top(kappa) > m,
/// else 0 (1 for the empty set).
Rat z_prob_identity(KappaSet kappa, unsigned m);

/// Exact joint probability Pr(Z(k1) and Z(k2)) for s = 1, identity
/// generators, |kappa| <= 2 on both sides. Always 0 or 2^-2m: the pair of
/// row constraints either pins two free rows past m or is unsatisfiable.
Rat z_pair_prob_identity(KappaSet k1, KappaSet k2, unsigned m);

/// Three-part bound on the joint probability for the s = 3 singleton shape:
/// 0 below the pairwise-sum cutoff, 2^-2(m-t-3) when some l exceeds m-t,
/// else 2^(-2m+T+3).
double pbar_bound(unsigned l1, unsigned l2, unsigned l3,
                  unsigned m, unsigned t, unsigned T);

}  // namespace dignet
