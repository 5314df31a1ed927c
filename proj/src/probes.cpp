#include "dignet/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dignet/rng.hpp"

namespace dignet {

BoundCheck& ProbeResult::add_bound(const std::string& what, double emp, double se,
                                   double bound) {
  BoundCheck c{what, emp, se, bound, false, emp <= bound + kMarginSes * se};
  checks.push_back(c);
  pass = pass && checks.back().pass;
  return checks.back();
}

BoundCheck& ProbeResult::add_equality(const std::string& what, double emp, double se,
                                      double target) {
  BoundCheck c{what, emp, se, target, true,
               std::abs(emp - target) <= kMarginSes * se};
  checks.push_back(c);
  pass = pass && checks.back().pass;
  return checks.back();
}

void ProbeResult::add_exact_zero(const std::string& what, std::uint64_t hits) {
  BoundCheck c{what, static_cast<double>(hits), 0.0, 0.0, true, hits == 0};
  checks.push_back(c);
  pass = pass && c.pass;
}

namespace {

double binom_se(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double factorial(unsigned n) {
  double f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ProbeResult probe_single_event(const GeneratorSet& gens, const KappaVector& kvec,
                               std::uint64_t trials, std::uint64_t seed) {
  if (kvec.is_zero()) throw std::invalid_argument("probe_single_event: k must be nonzero");
  ProbeResult res;
  res.probe = "single-event";
  unsigned t = t_value(gens);
  unsigned E = gens.m;
  for (const auto& c : kvec.comps()) E = std::max(E, c.top());
  McEstimate mc = z_prob_mc(kvec, gens, E, trials, seed);
  double bound = std::ldexp(1.0, static_cast<int>(t + gens.s) - static_cast<int>(gens.m));
  res.add_bound("Pr(Z(k)) <= 2^(t+s-m)", mc.estimate, mc.se, bound);
  if (kvec.top_sum() <= gens.m - t)
    res.add_exact_zero("Pr(Z(k)) = 0 below the net cutoff", mc.hits);
  res.metrics.emplace_back("t", t);
  res.metrics.emplace_back("trials", static_cast<double>(trials));
  return res;
}

ProbeResult probe_pair_event(const GeneratorSet& gens, const KappaVector& k1,
                             const KappaVector& k2, std::uint64_t trials,
                             std::uint64_t seed) {
  if (k1.is_zero() || k2.is_zero() || k1 == k2)
    throw std::invalid_argument("probe_pair_event: indices must be distinct and nonzero");
  ProbeResult res;
  res.probe = "pair-event";
  unsigned t = t_value(gens);
  unsigned E = gens.m;
  for (const auto& c : k1.comps()) E = std::max(E, c.top());
  for (const auto& c : k2.comps()) E = std::max(E, c.top());

  std::uint64_t joint = 0, h1 = 0, h2 = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    Rng rng = Rng::substream(seed, tr);
    ScrambleSet scr = random_scramble(gens.m, gens.s, E, rng);
    bool a = z_event(k1, gens, scr);
    bool b = z_event(k2, gens, scr);
    h1 += a;
    h2 += b;
    joint += a && b;
  }
  double pj = static_cast<double>(joint) / trials;
  double p1 = static_cast<double>(h1) / trials;
  double p2 = static_cast<double>(h2) / trials;
  double sej = binom_se(pj, trials);

  int mts = static_cast<int>(gens.m) - static_cast<int>(t) - static_cast<int>(gens.s);
  res.add_bound("joint <= 2^(-1.5(m-t-s))", pj, sej, std::ldexp(1.0, -mts) * std::exp2(-0.5 * mts));
  std::vector<unsigned> off_overlap;  // coordinates whose tops differ
  unsigned off_top_sum = 0;
  for (unsigned j = 0; j < gens.s; ++j)
    if (k1[j].top() != k2[j].top()) {
      off_overlap.push_back(j);
      off_top_sum += k1[j].top();
    }
  bool stronger = gens.s <= 2 || off_top_sum + t >= gens.m;
  if (stronger)
    res.add_bound("joint <= 2^(-2(m-t-s))", pj, sej, std::ldexp(1.0, -2 * mts));
  if (off_overlap.size() == gens.s) {
    // no coordinate shares its top index: the two events are independent
    double prod = p1 * p2;
    double se_comb = std::sqrt(sej * sej + p2 * p2 * binom_se(p1, trials) * binom_se(p1, trials) +
                               p1 * p1 * binom_se(p2, trials) * binom_se(p2, trials));
    res.add_equality("independence: joint = Pr(Z1) Pr(Z2)", pj, se_comb, prod);
  }
  auto zero_norm = [&](const KappaVector& k) { return k.top_sum() <= gens.m - t; };
  if (zero_norm(k1) || zero_norm(k2) || zero_norm(k1 ^ k2))
    res.add_exact_zero("joint = 0 below the net cutoff", joint);
  res.metrics.emplace_back("t", t);
  res.metrics.emplace_back("p1", p1);
  res.metrics.emplace_back("p2", p2);
  res.metrics.emplace_back("trials", static_cast<double>(trials));
  return res;
}

ProbeResult probe_t_distribution(unsigned m, unsigned s, std::uint64_t draws,
                                 std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("probe_t_distribution: m must be >= 2");
  ProbeResult res;
  res.probe = "t-distribution";
  const double threshold = s * std::log2(static_cast<double>(m));
  std::uint64_t exceed = 0, exceed_strict = 0;
  unsigned tmin = m, tmax = 0;
  for (std::uint64_t d = 0; d < draws; ++d) {
    Rng rng = Rng::substream(seed, d);
    GeneratorSet g = random_generators(m, s, rng);
    unsigned t = t_value(g);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    if (static_cast<double>(t) >= threshold) ++exceed;
    if (static_cast<double>(t) > threshold) ++exceed_strict;
  }
  double emp = static_cast<double>(exceed) / draws;
  double emp_strict = static_cast<double>(exceed_strict) / draws;
  double bound = 1.0 / (factorial(s - 1) * m);
  res.add_bound("Pr(t >= s log2 m) <= 1/((s-1)! m)", emp, binom_se(emp, draws), bound);
  res.metrics.emplace_back("exceed_strict", emp_strict);
  if (s == 1)
    res.notes.push_back(
        "at s = 1 and integer log2 m the non-strict tail is about 2/m, so only the "
        "strict form of the bound can hold; exceed_strict carries that frequency");
  // older threshold, for comparison: smallest value the previous tail bound
  // certifies at the same confidence
  double alpha = 1.0 - bound;
  double old_threshold =
      std::ceil((s - 1) * std::log2(static_cast<double>(m)) - std::log2(1.0 - alpha));
  res.metrics.emplace_back("threshold", threshold);
  res.metrics.emplace_back("older_threshold", old_threshold);
  res.metrics.emplace_back("t_min", tmin);
  res.metrics.emplace_back("t_max", tmax);
  res.metrics.emplace_back("draws", static_cast<double>(draws));
  if (tmax > m) res.pass = false;  // never attainable; t <= m by construction
  return res;
}

ProbeResult probe_random_pair_law(unsigned m, unsigned s, const KappaVector& k1,
                                  const KappaVector& k2, std::uint64_t trials,
                                  std::uint64_t seed) {
  if (k1.is_zero() || k2.is_zero() || k1 == k2)
    throw std::invalid_argument("probe_random_pair_law: indices must be distinct and nonzero");
  for (const auto& c : k1.comps())
    if (c.top() > m) throw std::invalid_argument("probe_random_pair_law: top index above m");
  for (const auto& c : k2.comps())
    if (c.top() > m) throw std::invalid_argument("probe_random_pair_law: top index above m");
  ProbeResult res;
  res.probe = "pair-law";
  std::uint64_t joint = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    Rng rng = Rng::substream(seed, tr);
    GeneratorSet g = random_generators(m, s, rng);
    ScrambleSet scr = random_scramble(m, s, m, rng);
    if (z_event(k1, g, scr) && z_event(k2, g, scr)) ++joint;
  }
  double emp = static_cast<double>(joint) / trials;
  double target = std::ldexp(1.0, -2 * static_cast<int>(m));
  res.add_equality("joint = 2^-2m under random C and M", emp, binom_se(emp, trials), target);
  res.metrics.emplace_back("target", target);
  res.metrics.emplace_back("trials", static_cast<double>(trials));
  return res;
}

namespace {

// Index-pair sampler for the conditional-probability scan: tops at most
// m + 4 with weight toward small top sums, where the probabilities are
// largest. For s = 3 a deterministic sweep of the paired-singleton shape
// (a,b,-)/(a,-,c) runs first; that is the shape behind the block
// counterexample.
std::vector<std::pair<KappaVector, KappaVector>> sample_pairs(
    unsigned m, unsigned s, unsigned count, Rng& rng) {
  std::vector<std::pair<KappaVector, KappaVector>> out;
  if (s == 3) {
    auto push_singletons = [&](unsigned a, unsigned b, unsigned c) {
      KappaVector k1({KappaSet::of({a}), KappaSet::of({b}), KappaSet()});
      KappaVector k2({KappaSet::of({a}), KappaSet(), KappaSet::of({c})});
      out.emplace_back(std::move(k1), std::move(k2));
    };
    // diagonal triples first: the shape a shared depth-r unit row excites
    for (unsigned a = 1; a <= std::min(m, 12u); ++a) push_singletons(a, a, a);
    unsigned cap = std::min(m, 6u);
    for (unsigned a = 1; a <= cap && out.size() < count / 2; ++a)
      for (unsigned b = 1; b <= cap && out.size() < count / 2; ++b)
        for (unsigned c = 1; c <= cap && out.size() < count / 2; ++c)
          if (!(a == b && b == c)) push_singletons(a, b, c);
  }
  auto draw_set = [&](bool allow_empty) {
    if (allow_empty && rng.below(3) == 0) return KappaSet();
    unsigned top = 1 + static_cast<unsigned>(rng.below(m + 4));
    // geometric-ish tilt toward small tops
    while (top > 1 && rng.below(2) == 0) top = 1 + static_cast<unsigned>(rng.below(top));
    KappaSet k = KappaSet::of({top});
    while (k.card() < 3 && rng.below(4) == 0) {
      unsigned l = 1 + static_cast<unsigned>(rng.below(top));
      k = k ^ (k.contains(l) ? KappaSet() : KappaSet::of({l}));
    }
    return k;
  };
  while (out.size() < count) {
    std::vector<KappaSet> a(s), b(s);
    for (unsigned j = 0; j < s; ++j) {
      a[j] = draw_set(true);
      b[j] = draw_set(true);
    }
    KappaVector k1{std::move(a)}, k2{std::move(b)};
    if (k1.is_zero() || k2.is_zero() || k1 == k2) continue;
    out.emplace_back(std::move(k1), std::move(k2));
  }
  return out;
}

}  // namespace

CstarEval cstar_evaluate(const GeneratorSet& gens, double epsilon,
                         unsigned pair_samples, std::uint64_t seed) {
  Rng rng(seed);
  const unsigned E = gens.m + 4;
  CstarEval ev;
  ev.threshold = std::exp2(-2.0 * (1.0 - epsilon) * gens.m);
  ev.worst_prob = Rat(0);
  for (auto& [k1, k2] : sample_pairs(gens.m, gens.s, pair_samples, rng)) {
    Rat p = z_pair_prob_exact(k1, k2, gens, E);
    if (p > ev.worst_prob) {
      ev.worst_prob = p;
      ev.worst_k1 = k1;
      ev.worst_k2 = k2;
    }
  }
  ev.fails = to_double(ev.worst_prob) > ev.threshold;
  return ev;
}

ProbeResult probe_cstar(unsigned m, unsigned s, const CstarOptions& opt,
                        std::uint64_t seed) {
  if (opt.epsilon <= 0) throw std::invalid_argument("probe_cstar: epsilon must be positive");
  ProbeResult res;
  res.probe = "cstar";
  unsigned failing = 0;
  double worst_seen = 0;
  for (unsigned d = 0; d < opt.c_draws; ++d) {
    Rng rng = Rng::substream(seed, d);
    GeneratorSet g = random_generators(m, s, rng);
    CstarEval ev = cstar_evaluate(g, opt.epsilon, opt.pair_samples, seed ^ (d + 1));
    failing += ev.fails;
    worst_seen = std::max(worst_seen, to_double(ev.worst_prob));
    if (opt.trials > 0 && ev.fails) {
      McEstimate mc =
          z_pair_prob_mc(ev.worst_k1, ev.worst_k2, g, m + 4, opt.trials, seed ^ (d + 1));
      res.metrics.emplace_back("mc_crosscheck_draw_" + std::to_string(d), mc.estimate);
    }
  }
  double emp = static_cast<double>(failing) / opt.c_draws;
  double bound = 1.0 / (factorial(s - 1) * m) +
                 std::pow(static_cast<double>(m), 3.0 * s) * std::exp2(-2.0 * opt.epsilon * m);
  res.add_bound("Pr(worst sampled pair prob > 2^(-2(1-eps)m))", emp,
                binom_se(emp, opt.c_draws), std::min(1.0, bound));
  res.metrics.emplace_back("epsilon", opt.epsilon);
  res.metrics.emplace_back("threshold", std::exp2(-2.0 * (1.0 - opt.epsilon) * m));
  res.metrics.emplace_back("worst_prob_seen", worst_seen);
  res.metrics.emplace_back("c_draws", opt.c_draws);
  res.metrics.emplace_back("pair_samples", opt.pair_samples);
  res.notes.push_back(
      "the quantifier over all index pairs is not checkable; this probe scans a "
      "sampled family weighted toward small top sums");
  return res;
}

namespace {

double betacf(double a, double b, double x) {
  // Lentz continued fraction for the incomplete beta function.
  const int kMaxIter = 300;
  const double eps = 3e-14, fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int mm = 1; mm <= kMaxIter; ++mm) {
    int m2 = 2 * mm;
    double aa = mm * (b - mm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + mm) * (qab + mm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_quantile(unsigned df, double p) {
  if (df == 0 || p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("student_t_quantile: need df >= 1 and 0 < p < 1");
  if (p == 0.5) return 0.0;
  double tail = p > 0.5 ? 2.0 * (1.0 - p) : 2.0 * p;
  // Two-sided tail: Pr(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2); bisection on z.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (betai(df / 2.0, 0.5, mid) < tail) lo = mid;
    else hi = mid;
  }
  double z = 0.5 * (lo + hi);
  double t = std::sqrt(df * (1.0 - z) / z);
  return p > 0.5 ? t : -t;
}

CIReport ci_coverage(const Integrand& f, const GeneratorSet& gens, unsigned E,
                     unsigned R, unsigned repetitions, double level,
                     std::uint64_t seed) {
  if (R < 2) throw std::invalid_argument("ci_coverage: R must be >= 2");
  if (level <= 0.0 || level >= 1.0)
    throw std::invalid_argument("ci_coverage: level must lie in (0,1)");
  const double tq = student_t_quantile(R - 1, 1.0 - (1.0 - level) / 2.0);
  unsigned covered = 0;
  double hw_sum = 0;
  for (unsigned rep = 0; rep < repetitions; ++rep) {
    double sum = 0, sumsq = 0;
    for (unsigned r = 0; r < R; ++r) {
      Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(rep) * R + r);
      ScrambleSet scr = random_scramble(gens.m, gens.s, E, rng);
      double est = rqmc_estimate(f, generate_points(gens, scr));
      sum += est;
      sumsq += est * est;
    }
    double mean = sum / R;
    double var = std::max(0.0, (sumsq - R * mean * mean) / (R - 1));
    double hw = tq * std::sqrt(var / R);
    hw_sum += hw;
    if (std::abs(mean - f.mu) <= hw) ++covered;
  }
  CIReport rep;
  rep.integrand = f.name;
  rep.m = gens.m;
  rep.R = R;
  rep.repetitions = repetitions;
  rep.level = level;
  rep.coverage = static_cast<double>(covered) / repetitions;
  rep.se = binom_se(rep.coverage, repetitions);
  rep.mean_halfwidth = hw_sum / repetitions;
  rep.seed = seed;
  return rep;
}

}  // namespace dignet
