// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Stochastic criteria use fixed seeds and the 4-standard-error
// margin policy; exact criteria compare rationals.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dignet/events.hpp"
#include "dignet/moments.hpp"
#include "dignet/netgen.hpp"
#include "dignet/probes.hpp"
#include "dignet/rng.hpp"
#include "dignet/scramble.hpp"

using namespace dignet;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- criterion 1: exact third-moment series vs closed form --------------

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  bool ok = true;
  for (unsigned m = 0; m <= 8; ++m) {
    SeriesValue sv = exact_third_moment_xsq(m, m + 24);
    Rat truth = closed_form_third_xsq(m);
    double rel = std::abs(to_double((sv.value - truth) / truth));
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-6;
  }
  double secs = seconds_since(t0);
  ok = ok && secs < 10.0;
  report(1, ok, "exact third-moment series matches the closed form for m=0..8",
         "max rel err " + fmt(worst) + ", " + fmt(secs) + "s");
}

// ---- criterion 2: variance series lower bound ----------------------------

void criterion2() {
  bool ok = true;
  for (unsigned m = 0; m <= 8; ++m) {
    VarianceSeries vs = exact_variance_xsq(m, m + 24);
    Rat floor = Rat(1, 12) * pow2(-3 * static_cast<long>(m));
    if (!(vs.singleton_series == floor)) ok = false;
    if (!(vs.value >= floor)) ok = false;
  }
  report(2, ok, "variance series >= (1/12) 2^-3m with exact singleton subseries",
         "m=0..8, rational equality");
}

// ---- criterion 3: Monte Carlo third moment, m=3, R=2e6 ------------------

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  Integrand xsq = make_integrand("xsq", 1);
  GeneratorSet g = identity_generators(3, 1);
  MomentReport rep = mc_moments(xsq, g, 64, 2000000, 20240311);
  double truth = to_double(closed_form_third_xsq(3));
  double err = std::abs(rep.m3 - truth);
  bool ok = err <= 4.0 * rep.se_m3;
  double secs = seconds_since(t0);
  ok = ok && secs < 300.0;
  report(3, ok, "MC third central moment within 4 SE of the closed form (m=3, R=2e6)",
         "est " + fmt(rep.m3) + ", truth " + fmt(truth) + ", 4SE " +
             fmt(4.0 * rep.se_m3) + ", " + fmt(secs) + "s");
}

// ---- criterion 4: exact 2^-2m law under random C and M ------------------

void criterion4() {
  KappaVector k1({KappaSet::of({3}), KappaSet()});
  KappaVector k2({KappaSet(), KappaSet::of({4})});
  ProbeResult res = probe_random_pair_law(4, 2, k1, k2, 1000000, 20240404);
  const BoundCheck& c = res.checks.at(0);
  report(4, res.pass, "joint frequency matches 2^-8 over 1e6 (C, M) draws",
         "emp " + fmt(c.empirical) + ", target " + fmt(c.bound) + ", 4SE " +
             fmt(4.0 * c.se));
}

// ---- criterion 5: t-value tail bound under random C ---------------------

void criterion5() {
  ProbeResult res = probe_t_distribution(8, 2, 4000, 20240505);
  double tmin = 1e9, tmax = -1;
  for (const auto& [k, v] : res.metrics) {
    if (k == "t_min") tmin = v;
    if (k == "t_max") tmax = v;
  }
  bool range_ok = tmin >= 0 && tmax <= 8;
  const BoundCheck& c = res.checks.at(0);
  report(5, res.pass && range_ok,
         "Pr(t >= 6) <= 1/8 + 4 SE over 4000 random m=8 s=2 sets",
         "emp " + fmt(c.empirical) + ", bound " + fmt(c.bound) + ", t range [" +
             fmt(tmin) + "," + fmt(tmax) + "]");
}

// ---- criterion 6: exhaustive T(l1,l2,l12) bound and symmetry -------------

void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  const unsigned L = 10;
  std::vector<Rat> table((L + 1) * (L + 1) * (L + 1));
  auto at = [&](unsigned a, unsigned b, unsigned c) -> Rat& {
    return table[(a * (L + 1) + b) * (L + 1) + c];
  };
  bool ok = true;
  for (unsigned l1 = 0; l1 <= L; ++l1)
    for (unsigned l2 = 0; l2 <= L; ++l2)
      for (unsigned l12 = 0; l12 <= L; ++l12) {
        Rat v = t_sum(l1, l2, l12);
        at(l1, l2, l12) = v;
        if (!(v < pow2(2 - static_cast<long>(l1 + l2 + l12)))) ok = false;
      }
  for (unsigned a = 0; a <= L && ok; ++a)
    for (unsigned b = 0; b <= L && ok; ++b)
      for (unsigned c = 0; c <= L && ok; ++c) {
        const Rat& v = at(a, b, c);
        if (v != at(a, c, b) || v != at(b, a, c) || v != at(b, c, a) ||
            v != at(c, a, b) || v != at(c, b, a))
          ok = false;
      }
  double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  report(6, ok, "T(l1,l2,l12) < 2^(-l1-l2-l12+2) and fully symmetric up to 10",
         fmt(secs) + "s");
}

// ---- criterion 7: counterexample tightness -------------------------------

void criterion7() {
  GeneratorSet net = embed_counterexample(find_base3(7, 20240707));
  unsigned t = t_value(net);
  TripleQuality q = big_t_value(net);
  KappaVector k1({KappaSet::of({4}), KappaSet::of({4}), KappaSet()});
  KappaVector k2({KappaSet::of({4}), KappaSet(), KappaSet::of({4})});
  McEstimate mc = z_pair_prob_mc(k1, k2, net, 8, 1000000, 20240708);
  double target = std::ldexp(1.0, -9);
  bool ok = t <= 2 && q.T >= 5 && mc.estimate >= target - 4.0 * mc.se;
  report(7, ok, "embedded m=8 net: t <= 2, T >= 5, witness pair above 2^-9",
         "t=" + fmt(t) + ", T=" + fmt(q.T) + ", emp " + fmt(mc.estimate) +
             " vs " + fmt(target) + " - " + fmt(4.0 * mc.se));
}

// ---- criterion 8: identity t-values --------------------------------------

void criterion8() {
  bool ok = true;
  for (unsigned m = 2; m <= 10; ++m)
    if (t_value(identity_generators(m, 2)) != m - 1) ok = false;
  Rng rng(20240808);
  int seen = 0;
  while (seen < 10) {
    GeneratorSet g = random_generators(7, 1, rng.word());
    if (rank(g.mat(0)) == 7) {
      if (t_value(g) != 0) ok = false;
      ++seen;
    }
  }
  report(8, ok, "identity pairs have t = m-1 (m=2..10); invertible singles have t = 0",
         "9 sizes + 10 invertible draws");
}

// ---- criterion 9: oracle cross-validation --------------------------------

void criterion9() {
  bool ok = true;
  // full admissible grid: |kappa| <= 2, elements <= 5, distinct, nonzero
  std::vector<KappaSet> idx;
  for (unsigned a = 1; a <= 5; ++a) idx.push_back(KappaSet::of({a}));
  for (unsigned a = 1; a <= 5; ++a)
    for (unsigned b = a + 1; b <= 5; ++b) idx.push_back(KappaSet::of({a, b}));
  unsigned checked = 0;
  for (unsigned m = 0; m <= 3 && ok; ++m) {
    GeneratorSet g = identity_generators(m, 1);
    for (const auto& a : idx)
      for (const auto& b : idx) {
        if (a == b) continue;
        Rat rule = z_pair_prob_identity(a, b, m);
        Rat enumed = z_pair_prob_enum(KappaVector({a}), KappaVector({b}), g, 5);
        ++checked;
        if (rule != enumed) { ok = false; break; }
      }
  }
  // 10 random two-dimensional fixtures: enumeration vs Monte Carlo
  Rng rng(20240909);
  double worst_gap_se = 0;
  for (int f = 0; f < 10 && ok; ++f) {
    GeneratorSet g = random_generators(3, 2, rng.word());
    auto draw_kappa = [&] {
      KappaSet k = KappaSet::of({1 + static_cast<unsigned>(rng.below(5))});
      if (rng.bit()) {
        unsigned l = 1 + static_cast<unsigned>(rng.below(5));
        if (!k.contains(l)) k = k ^ KappaSet::of({l});
      }
      return k;
    };
    KappaVector k1({draw_kappa(), rng.bit() ? draw_kappa() : KappaSet()});
    KappaVector k2({rng.bit() ? draw_kappa() : KappaSet(), draw_kappa()});
    if (k1.is_zero() || k2.is_zero() || k1 == k2) { --f; continue; }
    Rat enumed = z_pair_prob_enum(k1, k2, g, 5);
    McEstimate mc = z_pair_prob_mc(k1, k2, g, 5, 1000000, rng.word());
    double gap = std::abs(mc.estimate - to_double(enumed));
    if (gap > 4.0 * mc.se + 1e-12) ok = false;
    if (mc.se > 0) worst_gap_se = std::max(worst_gap_se, gap / mc.se);
  }
  report(9, ok, "pair-probability rule == enumeration on the m<=3 grid; enum vs MC on 10 fixtures",
         fmt(checked) + " exact comparisons, worst MC gap " + fmt(worst_gap_se) + " SE");
}

// ---- criterion 10: decomposition residual --------------------------------

void criterion10() {
  const unsigned m = 4, E = 48, K = 40;
  GeneratorSet g = identity_generators(m, 1);
  // truncated series indices: all kappa over {1..K} with |kappa| <= 2
  std::vector<KappaSet> idx;
  for (unsigned a = 1; a <= K; ++a) idx.push_back(KappaSet::of({a}));
  for (unsigned a = 1; a <= K; ++a)
    for (unsigned b = a + 1; b <= K; ++b) idx.push_back(KappaSet::of({a, b}));
  // analytic tail with deriv_sup 2: sum over tops past K of (l+1) 2^-l
  Rat tail = Rat(K + 3) * pow2(-static_cast<long>(K));
  bool ok = true;
  double worst_ratio = 0;
  for (int rep = 0; rep < 100 && ok; ++rep) {
    Rng rng(20241010, rep);
    ScrambleSet scr = random_scramble(m, 1, E, rng);
    PointSet pts = generate_points(g, scr);
    Rat muhat(0);
    for (std::size_t i = 0; i < pts.n(); ++i) {
      Rat x = Rat(mpz_class(static_cast<unsigned long>(pts.word(i, 0)))) /
              Rat(mpz_class(1) << E);
      muhat += x * x;
    }
    muhat /= static_cast<long>(pts.n());
    Rat series(0);
    for (const auto& kap : idx) {
      KappaVector kv({kap});
      if (!z_event(kv, g, scr)) continue;
      series += s_sign(kv, scr) * walsh_coeff_xsq(kap);
    }
    Rat resid = muhat - Rat(1, 3) - series;
    if (resid < 0) resid = -resid;
    if (!(resid <= tail)) ok = false;
    worst_ratio = std::max(worst_ratio, to_double(resid / tail));
  }
  report(10, ok, "error decomposition residual below the analytic tail (100 scrambles)",
         "worst residual/tail " + fmt(worst_ratio));
}

// ---- criterion 11: census invariance under scrambling --------------------

void criterion11() {
  Rng rng(20241111);
  bool ok = true;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    GeneratorSet g = random_generators(4, 2, rng.word());
    unsigned t = t_value(g);
    ScrambleSet scr = random_scramble(4, 2, 16, rng.word());
    if (!census_all_shapes(generate_points(g, scr), t)) ok = false;
  }
  report(11, ok, "elementary-interval census at the unscrambled t passes for 100 scrambles",
         "m=4, s=2");
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d of 11 criteria passed (%.1fs total)\n", 11 - failures,
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
