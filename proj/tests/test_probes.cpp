#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dignet/probes.hpp"
#include "dignet/rng.hpp"

using namespace dignet;

TEST_CASE("student t quantiles hit published values") {
  CHECK(student_t_quantile(7, 0.975) == doctest::Approx(2.3646).epsilon(2e-4));
  CHECK(student_t_quantile(1, 0.975) == doctest::Approx(12.706).epsilon(2e-4));
  CHECK(student_t_quantile(10, 0.95) == doctest::Approx(1.8125).epsilon(2e-4));
  CHECK(student_t_quantile(2000, 0.975) == doctest::Approx(1.9612).epsilon(1e-3));
  CHECK(student_t_quantile(7, 0.5) == 0.0);
  CHECK(student_t_quantile(7, 0.025) == doctest::Approx(-2.3646).epsilon(2e-4));
  CHECK_THROWS_AS(student_t_quantile(0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(student_t_quantile(3, 1.0), std::invalid_argument);
}

TEST_CASE("single-event probe: identity net, free row") {
  GeneratorSet g = identity_generators(4, 1);
  KappaVector k({KappaSet::of({5})});
  ProbeResult res = probe_single_event(g, k, 40000, 31);
  CHECK(res.pass);
  REQUIRE(!res.checks.empty());
  CHECK(res.checks[0].empirical == doctest::Approx(std::ldexp(1.0, -4)).epsilon(0.3));
}

TEST_CASE("single-event probe: exact zero below the cutoff") {
  GeneratorSet g = identity_generators(5, 1);  // t = 0
  KappaVector k({KappaSet::of({2, 4})});       // top sum 4 <= m - t
  ProbeResult res = probe_single_event(g, k, 20000, 1);
  CHECK(res.pass);
  bool found = false;
  for (const auto& c : res.checks)
    if (c.what.find("= 0") != std::string::npos) {
      found = true;
      CHECK(c.empirical == 0.0);
    }
  CHECK(found);
}

TEST_CASE("single-event probe respects the bound on random nets and indices") {
  Rng rng(606060);
  for (int trial = 0; trial < 5; ++trial) {
    GeneratorSet g = random_generators(6, 2, rng.word());
    KappaVector k({KappaSet::from_k(1 + rng.below(255)),
                   KappaSet::from_k(rng.below(256))});
    ProbeResult res = probe_single_event(g, k, 20000, rng.word());
    CHECK(res.pass);
  }
}

TEST_CASE("pair-event probe on a random two-dimensional net") {
  GeneratorSet g = random_generators(6, 2, 12);
  KappaVector k1({KappaSet::of({7}), KappaSet()});
  KappaVector k2({KappaSet(), KappaSet::of({8})});
  ProbeResult res = probe_pair_event(g, k1, k2, 30000, 77);
  CHECK(res.pass);
  bool independence_checked = false;
  for (const auto& c : res.checks)
    if (c.what.find("independence") != std::string::npos) independence_checked = true;
  CHECK(independence_checked);  // no coordinate shares a top index
}

TEST_CASE("pair-event probe reports zero occurrences below the cutoff") {
  GeneratorSet g = identity_generators(6, 1);
  KappaVector k1({KappaSet::of({2})});  // top sum 2 <= m - t = 6
  KappaVector k2({KappaSet::of({9})});
  ProbeResult res = probe_pair_event(g, k1, k2, 5000, 3);
  CHECK(res.pass);
  bool zero_found = false;
  for (const auto& c : res.checks)
    if (c.what.find("= 0") != std::string::npos) {
      zero_found = true;
      CHECK(c.empirical == 0.0);
    }
  CHECK(zero_found);
}

TEST_CASE("t-distribution probe at moderate size") {
  ProbeResult res = probe_t_distribution(4, 2, 600, 5);
  CHECK(res.pass);
  double tmax = -1, tmin = -1;
  for (const auto& [k, v] : res.metrics) {
    if (k == "t_max") tmax = v;
    if (k == "t_min") tmin = v;
  }
  CHECK(tmin >= 0);
  CHECK(tmax <= 4);
  CHECK_THROWS_AS(probe_t_distribution(1, 2, 10, 1), std::invalid_argument);
}

TEST_CASE("t-distribution probe honors the s = 1 edge") {
  // At s = 1 with integer log2 m the non-strict tail sits near 2/m, so only
  // the strict exceed frequency can respect the 1/m bound; the probe reports
  // both and flags the edge in its notes.
  ProbeResult res = probe_t_distribution(8, 1, 2000, 9);
  REQUIRE(!res.checks.empty());
  CHECK(res.checks[0].bound == doctest::Approx(1.0 / 8.0));
  double strict = -1;
  for (const auto& [k, v] : res.metrics)
    if (k == "exceed_strict") strict = v;
  REQUIRE(strict >= 0);
  double se = std::sqrt(strict * (1.0 - strict) / 2000.0);
  CHECK(strict <= 1.0 / 8.0 + 4.0 * se);
  CHECK_FALSE(res.notes.empty());
}

TEST_CASE("t-distribution probe at s = 3: threshold above m makes the tail empty") {
  ProbeResult res = probe_t_distribution(4, 3, 800, 2);
  CHECK(res.pass);
  CHECK(res.checks[0].bound == doctest::Approx(0.125));  // 1/(2! * 4)
  CHECK(res.checks[0].empirical == 0.0);                 // t <= m < 3 log2(4)
}

TEST_CASE("pair-law probe at small size") {
  KappaVector k1({KappaSet::of({2})});
  KappaVector k2({KappaSet::of({3})});
  ProbeResult res = probe_random_pair_law(3, 1, k1, k2, 200000, 17);
  CHECK(res.pass);
  CHECK(res.checks[0].equality);
  CHECK(res.checks[0].bound == doctest::Approx(std::ldexp(1.0, -6)));

  KappaVector deep({KappaSet::of({4})});
  CHECK_THROWS_AS(probe_random_pair_law(3, 1, deep, k2, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(probe_random_pair_law(3, 1, k1, k1, 100, 1), std::invalid_argument);
}

TEST_CASE("cstar: random sets at generous epsilon pass; epsilon = 1 never fails") {
  CstarOptions opt;
  opt.epsilon = 0.5;
  opt.c_draws = 40;
  opt.pair_samples = 24;
  ProbeResult res = probe_cstar(6, 2, opt, 4);
  CHECK(res.pass);

  opt.epsilon = 1.0;
  ProbeResult res1 = probe_cstar(5, 2, opt, 4);
  CHECK(res1.pass);
  CHECK(res1.checks[0].empirical == 0.0);  // threshold 2^0 cannot be exceeded
}

TEST_CASE("cstar: the embedded counterexample fails at small epsilon by design") {
  GeneratorSet net = embed_counterexample(find_base3(7, 1));
  CstarEval ev = cstar_evaluate(net, 0.2, 64, 11);
  CHECK(ev.fails);
  CHECK(to_double(ev.worst_prob) >= std::ldexp(1.0, -9));
}

TEST_CASE("pair-event probe on the embedded counterexample witness pair") {
  GeneratorSet net = embed_counterexample(find_base3(7, 1));
  KappaVector k1({KappaSet::of({4}), KappaSet::of({4}), KappaSet()});
  KappaVector k2({KappaSet::of({4}), KappaSet(), KappaSet::of({4})});
  ProbeResult res = probe_pair_event(net, k1, k2, 200000, 404);
  CHECK(res.pass);  // the 3/2-exponent bound still holds
  const BoundCheck& c = res.checks.at(0);
  // and the joint probability really is large: at least 2^(-3m/2+3)
  CHECK(c.empirical >= std::ldexp(1.0, -9) - 4.0 * c.se);
}

TEST_CASE("probes are reproducible bit-for-bit from their seed") {
  GeneratorSet g = random_generators(5, 2, 3);
  KappaVector k({KappaSet::of({6}), KappaSet::of({2})});
  ProbeResult a = probe_single_event(g, k, 20000, 42);
  ProbeResult b = probe_single_event(g, k, 20000, 42);
  REQUIRE(a.checks.size() == b.checks.size());
  CHECK(a.checks[0].empirical == b.checks[0].empirical);
  ProbeResult c = probe_single_event(g, k, 20000, 43);
  CHECK(a.checks[0].empirical != c.checks[0].empirical);
}

TEST_CASE("ci coverage: degenerate integrand covers always") {
  Integrand c{"const", 1, 0.375, [](std::span<const double>) { return 0.375; }};
  CIReport rep = ci_coverage(c, identity_generators(3, 1), 16, 8, 200, 0.95, 3);
  CHECK(rep.coverage == 1.0);
  CHECK(rep.mean_halfwidth == 0.0);
}

TEST_CASE("ci coverage: x^2 at the 95% level is near nominal") {
  Integrand xsq = make_integrand("xsq", 1);
  CIReport rep = ci_coverage(xsq, identity_generators(5, 1), 48, 8, 800, 0.95, 21);
  CHECK(rep.coverage >= 0.85);
  CHECK(rep.coverage <= 1.0);
  CHECK(rep.mean_halfwidth > 0.0);
}

TEST_CASE("ci coverage: 50% level sits near one half for many replicates") {
  Integrand xsq = make_integrand("xsq", 1);
  CIReport rep = ci_coverage(xsq, identity_generators(5, 1), 48, 64, 1200, 0.5, 33);
  CHECK(std::abs(rep.coverage - 0.5) <= 4.0 * rep.se + 0.02);
}
