#include "dignet/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dignet/rng.hpp"

namespace dignet {

Integrand make_integrand(const std::string& name, unsigned s) {
  if (name == "xsq") {
    if (s != 1) throw std::invalid_argument("integrand xsq is one-dimensional");
    return Integrand{"xsq", 1, 1.0 / 3.0,
                     [](std::span<const double> x) { return x[0] * x[0]; }};
  }
  if (name == "prod_xsq") {
    if (s < 1) throw std::invalid_argument("prod_xsq needs s >= 1");
    return Integrand{"prod_xsq", s, std::pow(3.0, -static_cast<double>(s)),
                     [](std::span<const double> x) {
                       double p = 1;
                       for (double v : x) p *= v * v;
                       return p;
                     }};
  }
  throw std::invalid_argument("unknown integrand '" + name + "'");
}

double rqmc_estimate(const Integrand& f, const PointSet& pts) {
  if (f.s != pts.s()) throw std::invalid_argument("rqmc_estimate: dimension mismatch");
  std::vector<double> x(pts.s());
  double sum = 0;
  for (std::size_t i = 0; i < pts.n(); ++i) {
    for (unsigned j = 0; j < pts.s(); ++j) x[j] = pts.coord(i, j);
    sum += f.f(x);
  }
  return sum / static_cast<double>(pts.n());
}

namespace {

std::vector<double> batch_means(std::span<const double> values, unsigned batches) {
  // trailing remainder ignored
  std::size_t len = values.size() / batches;
  std::vector<double> means(batches, 0.0);
  if (len == 0) return means;
  for (unsigned b = 0; b < batches; ++b) {
    double s = 0;
    for (std::size_t i = 0; i < len; ++i) s += values[b * len + i];
    means[b] = s / static_cast<double>(len);
  }
  return means;
}

double se_of_means(std::span<const double> means) {
  std::size_t n = means.size();
  if (n < 2) return 0;
  double grand = 0;
  for (double mb : means) grand += mb;
  grand /= static_cast<double>(n);
  double ss = 0;
  for (double mb : means) ss += (mb - grand) * (mb - grand);
  return std::sqrt(ss / (n - 1) / static_cast<double>(n));
}

double batch_se(std::span<const double> values, unsigned batches) {
  return se_of_means(batch_means(values, batches));
}

}  // namespace

MomentReport mc_moments(const Integrand& f, const GeneratorSet& gens, unsigned E,
                        std::uint64_t R, std::uint64_t seed,
                        Centering centering, unsigned workers) {
  if (R < 16) throw std::invalid_argument("mc_moments: at least 16 replicates required");
  if (f.s != gens.s) throw std::invalid_argument("mc_moments: dimension mismatch");
  std::vector<double> est(R);
  auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t r = lo; r < hi; ++r) {
      Rng rng = Rng::substream(seed, r);
      ScrambleSet scr = random_scramble(gens.m, gens.s, E, rng);
      est[r] = rqmc_estimate(f, generate_points(gens, scr));
    }
  };
  if (workers <= 1) {
    run_range(0, R);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (R + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(R, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  MomentReport rep;
  rep.replicates = R;
  rep.seed = seed;
  rep.centering = centering;
  double mean = 0;
  for (double e : est) mean += e;
  mean /= static_cast<double>(R);
  rep.mean = mean;
  const double center = centering == Centering::KnownMean ? f.mu : mean;

  std::vector<double> d2(R), d3(R), d4(R);
  double s2 = 0, s3 = 0, s4 = 0;
  for (std::uint64_t r = 0; r < R; ++r) {
    double d = est[r] - center;
    d2[r] = d * d;
    d3[r] = d2[r] * d;
    d4[r] = d2[r] * d2[r];
    s2 += d2[r];
    s3 += d3[r];
    s4 += d4[r];
  }
  rep.var = s2 / static_cast<double>(R);
  rep.m3 = s3 / static_cast<double>(R);
  rep.m4 = s4 / static_cast<double>(R);
  rep.batches = static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(R))));
  rep.se_mean = batch_se(est, rep.batches);
  std::vector<double> b2 = batch_means(d2, rep.batches);
  std::vector<double> b3 = batch_means(d3, rep.batches);
  std::vector<double> b4 = batch_means(d4, rep.batches);
  rep.se_var = se_of_means(b2);
  rep.se_m3 = se_of_means(b3);
  rep.se_m4 = se_of_means(b4);
  if (rep.var > 0) {
    rep.gamma = rep.m3 / std::pow(rep.var, 1.5);
    rep.theta = rep.m4 / (rep.var * rep.var) - 3.0;
    bool all_positive = true;
    std::vector<double> bg(rep.batches), bt(rep.batches);
    for (unsigned b = 0; b < rep.batches; ++b) {
      if (b2[b] <= 0) { all_positive = false; break; }
      bg[b] = b3[b] / std::pow(b2[b], 1.5);
      bt[b] = b4[b] / (b2[b] * b2[b]) - 3.0;
    }
    if (all_positive) {
      rep.se_gamma = se_of_means(bg);
      rep.se_theta = se_of_means(bt);
    }
  }
  return rep;
}

Rat closed_form_third_xsq(unsigned m) {
  long lm = static_cast<long>(m);
  return (Rat(1, 45) - Rat(1, 189) * pow2(-2 * lm)) * pow2(-6 * lm);
}

Rat z_prob_identity(KappaSet kappa, unsigned m) {
  if (kappa.empty()) return Rat(1);
  return kappa.top() > m ? pow2(-static_cast<long>(m)) : Rat(0);
}

Rat z_pair_prob_identity(KappaSet k1, KappaSet k2, unsigned m) {
  if (k1.empty() || k2.empty())
    throw std::invalid_argument("z_pair_prob_identity: indices must be nonzero");
  if (k1 == k2) throw std::invalid_argument("z_pair_prob_identity: indices must differ");
  if (k1.card() > 2 || k2.card() > 2)
    throw std::invalid_argument("z_pair_prob_identity: |kappa| <= 2 required");
  const Rat both = pow2(-2 * static_cast<long>(m));
  const unsigned c1 = k1.card(), c2 = k2.card();
  if (c1 == 1 && c2 == 1) {
    // rows top(k1) and top(k2) must both vanish
    return (k1.top() > m && k2.top() > m) ? both : Rat(0);
  }
  if (c1 == 1 || c2 == 1) {
    KappaSet single = c1 == 1 ? k1 : k2;
    KappaSet pair = c1 == 1 ? k2 : k1;
    if (pair.contains(single.top())) {
      // both rows of the pair must vanish
      KappaSet other = pair ^ single;
      return (single.top() > m && other.top() > m) ? both : Rat(0);
    }
    // disjoint: row top(single) vanishes, rows of the pair coincide
    return (single.top() > m && pair.top() > m) ? both : Rat(0);
  }
  KappaSet shared = KappaSet::from_k(k1.mask() & k2.mask());
  if (shared.card() == 1) {
    // three distinct rows all equal; the middle one must be free
    KappaSet uni = KappaSet::from_k(k1.mask() | k2.mask());
    return uni.second() > m ? both : Rat(0);
  }
  // disjoint pairs: two separate coincidence constraints
  return (k1.top() > m && k2.top() > m) ? both : Rat(0);
}

namespace {

// Nonzero indices supported on {1..K} with |kappa| <= 2.
std::vector<KappaSet> small_support_indices(unsigned K) {
  std::vector<KappaSet> out;
  for (unsigned l = 1; l <= K; ++l) out.push_back(KappaSet::of({l}));
  for (unsigned a = 1; a <= K; ++a)
    for (unsigned b = a + 1; b <= K; ++b) out.push_back(KappaSet::of({a, b}));
  return out;
}

}  // namespace

SeriesValue exact_third_moment_xsq(unsigned m, unsigned K) {
  if (K < m + 2) throw std::invalid_argument("exact_third_moment_xsq: K must be >= m+2");
  if (K > 64) throw std::invalid_argument("exact_third_moment_xsq: K above 64");
  std::vector<KappaSet> idx = small_support_indices(K);
  Rat total(0);
  const Rat both = pow2(-2 * static_cast<long>(m));
  for (const KappaSet& k1 : idx) {
    for (const KappaSet& k2 : idx) {
      if (k1 == k2) continue;
      Rat pr = z_pair_prob_identity(k1, k2, m);
      if (pr == 0) continue;
      KappaSet k12 = k1 ^ k2;
      if (k12.card() > 2) continue;  // coefficient vanishes
      total += walsh_coeff_xsq(k1) * walsh_coeff_xsq(k2) * walsh_coeff_xsq(k12) * pr;
    }
  }
  SeriesValue out;
  out.value = total;
  out.K = K;
  // Every omitted term is positive and at most 2^-2m times its coefficient
  // product; summing the coefficient geometry past K gives 4^-K/9.
  out.tail_bound = std::ldexp(1.0 / 9.0, -2 * static_cast<int>(m) - 2 * static_cast<int>(K));
  return out;
}

VarianceSeries exact_variance_xsq(unsigned m, unsigned K) {
  if (K <= m) throw std::invalid_argument("exact_variance_xsq: K must exceed m");
  if (K > 64) throw std::invalid_argument("exact_variance_xsq: K above 64");
  const Rat pz = pow2(-static_cast<long>(m));
  Rat total(0);
  for (unsigned l = m + 1; l <= K; ++l) {
    Rat c = walsh_coeff_xsq(KappaSet::of({l}));
    total += c * c * pz;
  }
  for (unsigned b = m + 1; b <= K; ++b)
    for (unsigned a = 1; a < b; ++a) {
      Rat c = walsh_coeff_xsq(KappaSet::of({a, b}));
      total += c * c * pz;
    }
  VarianceSeries out;
  out.value = total;
  out.K = K;
  // Full geometric sum of the singleton terms past m:
  // 2^-m * sum_{l>m} 4^-(l+1) = (1/12) 2^-3m.
  out.singleton_series = pz * Rat(1, 3) * pow2(-2 * static_cast<long>(m) - 2);
  out.tail_bound = std::ldexp(1.0 / 9.0, -static_cast<int>(m) - 2 * static_cast<int>(K));
  return out;
}

double pbar_bound(unsigned l1, unsigned l2, unsigned l3,
                  unsigned m, unsigned t, unsigned T) {
  long mt = static_cast<long>(m) - static_cast<long>(t);
  long min_pair = std::min({static_cast<long>(l1) + l2, static_cast<long>(l1) + l3,
                            static_cast<long>(l2) + l3});
  long max_l = std::max({l1, l2, l3});
  if (min_pair <= mt) return 0.0;
  if (max_l > mt) return std::ldexp(1.0, static_cast<int>(-2 * (mt - 3)));
  return std::ldexp(1.0, static_cast<int>(-2 * static_cast<long>(m) + T + 3));
}

}  // namespace dignet
