#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dignet/rng.hpp"
#include "dignet/scramble.hpp"

using namespace dignet;

TEST_CASE("random scrambles honor the structural constraints") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ScrambleSet scr = random_scramble(5, 2, 9, rng.word());
    for (unsigned j = 0; j < 2; ++j) {
      CHECK(scr.mats[j].rows() == 9);
      CHECK(scr.mats[j].cols() == 5);
      for (unsigned r = 0; r < 5; ++r) {
        CHECK(scr.mats[j].get(r, r));
        for (unsigned c = r + 1; c < 5; ++c) CHECK_FALSE(scr.mats[j].get(r, c));
      }
      CHECK(scr.shifts[j].size() == 9);
    }
  }
  CHECK_THROWS_AS(random_scramble(5, 1, 4, 1), std::invalid_argument);
}

TEST_CASE("random scrambles are deterministic with fair free bits") {
  ScrambleSet a = random_scramble(4, 2, 8, 333);
  ScrambleSet b = random_scramble(4, 2, 8, 333);
  CHECK(a.mats == b.mats);
  CHECK(a.shifts == b.shifts);

  std::size_t ones = 0, total = 0;
  for (int draw = 0; draw < 300; ++draw) {
    ScrambleSet s = random_scramble(4, 1, 12, 5000 + draw);
    for (unsigned r = 4; r < 12; ++r)
      for (unsigned c = 0; c < 4; ++c) {
        ones += s.mats[0].get(r, c);
        ++total;
      }
    for (unsigned l = 0; l < 12; ++l) {
      ones += s.shifts[0].get(l);
      ++total;
    }
  }
  double mean = static_cast<double>(ones) / total;
  CHECK(std::abs(mean - 0.5) <= 4.0 * 0.5 / std::sqrt(static_cast<double>(total)));
}

TEST_CASE("trivial scramble reproduces the raw net at higher precision") {
  GeneratorSet g = identity_generators(2, 1);
  PointSet pts = generate_points(g, ScrambleSet::trivial(2, 1, 6));
  std::vector<double> want = {0.0, 0.5, 0.25, 0.75};  // van der Corput order
  for (std::size_t i = 0; i < 4; ++i) CHECK(pts.coord(i, 0) == want[i]);
}

TEST_CASE("index zero maps to the origin whenever the shift is zero") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    ScrambleSet scr = random_scramble(4, 2, 8, rng.word());
    for (auto& d : scr.shifts) d = BitVector(8);
    PointSet pts = generate_points(identity_generators(4, 2), scr);
    CHECK(pts.coord(0, 0) == 0.0);
    CHECK(pts.coord(0, 1) == 0.0);
  }
}

TEST_CASE("over the shift alone every coordinate sweeps the full dyadic grid") {
  const unsigned m = 3, E = 6;
  GeneratorSet g = identity_generators(m, 1);
  ScrambleSet scr = random_scramble(m, 1, E, 99);
  for (std::size_t i = 0; i < (1u << m); ++i) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t d = 0; d < (1u << E); ++d) {
      for (unsigned l = 1; l <= E; ++l) scr.shifts[0].set(l - 1, (d >> (E - l)) & 1u);
      PointSet pts = generate_points(g, scr);
      seen.insert(pts.word(i, 0));
    }
    CHECK(seen.size() == (1u << E));  // each value exactly once
  }
}

TEST_CASE("a second digital shift leaves the shift-orbit multiset unchanged") {
  const unsigned m = 2, E = 6;
  GeneratorSet g = identity_generators(m, 1);
  ScrambleSet scr = random_scramble(m, 1, E, 7);
  Rng shift_rng(13);
  BitVector extra = BitVector::random(E, shift_rng);
  std::multiset<std::uint64_t> orbit, shifted_orbit;
  for (std::uint64_t d = 0; d < (1u << E); ++d) {
    for (unsigned l = 1; l <= E; ++l) scr.shifts[0].set(l - 1, (d >> (E - l)) & 1u);
    PointSet pts = generate_points(g, scr);
    orbit.insert(pts.word(1, 0));
    scr.shifts[0].xor_with(extra);
    PointSet pts2 = generate_points(g, scr);
    shifted_orbit.insert(pts2.word(1, 0));
  }
  CHECK(orbit == shifted_orbit);
}

TEST_CASE("unscrambled points: van der Corput, degenerate m, equal coordinates") {
  PointSet vdc = unscrambled_points(identity_generators(3, 1));
  std::vector<double> want = {0, .5, .25, .75, .125, .625, .375, .875};
  for (std::size_t i = 0; i < 8; ++i) CHECK(vdc.coord(i, 0) == want[i]);

  PointSet single = unscrambled_points(identity_generators(0, 1));
  CHECK(single.n() == 1);
  CHECK(single.coord(0, 0) == 0.0);

  PointSet twin = unscrambled_points(identity_generators(4, 2));
  for (std::size_t i = 0; i < twin.n(); ++i)
    CHECK(twin.coord(i, 0) == twin.coord(i, 1));
}

TEST_CASE("digit accessors agree with coordinates") {
  PointSet pts = unscrambled_points(identity_generators(3, 1));
  for (std::size_t i = 0; i < pts.n(); ++i) {
    double x = 0;
    for (unsigned l = 1; l <= 3; ++l)
      if (pts.digit(i, 0, l)) x += std::ldexp(1.0, -static_cast<int>(l));
    CHECK(x == pts.coord(i, 0));
    CHECK(pts.digits(i, 0).size() == 3);
  }
}

TEST_CASE("elementary interval census on identity nets") {
  PointSet one = unscrambled_points(identity_generators(4, 1));
  for (unsigned k = 0; k <= 4; ++k) {
    std::vector<unsigned> shape = {k};
    CHECK(elementary_interval_census(one, shape, 4 - k));
  }

  PointSet two = unscrambled_points(identity_generators(3, 2));
  CHECK_FALSE(census_all_shapes(two, 0));
  CHECK_FALSE(census_all_shapes(two, 1));
  CHECK(census_all_shapes(two, 2));

  std::vector<unsigned> bad = {5, 0};
  CHECK_THROWS_AS(elementary_interval_census(two, bad, 0), std::invalid_argument);
  std::vector<unsigned> wrong_sum = {1, 1};
  CHECK_THROWS_AS(elementary_interval_census(two, wrong_sum, 0), std::invalid_argument);
}

TEST_CASE("the census is scramble-invariant") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    GeneratorSet g = random_generators(4, 2, rng.word());
    unsigned t = t_value(g);
    CHECK(census_all_shapes(unscrambled_points(g), t));
    ScrambleSet scr = random_scramble(4, 2, 8, rng.word());
    CHECK(census_all_shapes(generate_points(g, scr), t));
  }
}

TEST_CASE("wal_at matches the digit-level definition") {
  Rng rng(404);
  GeneratorSet g = random_generators(3, 2, rng.word());
  ScrambleSet scr = random_scramble(3, 2, 8, rng.word());
  PointSet pts = generate_points(g, scr);
  KappaVector kv({KappaSet::of({1, 4}), KappaSet::of({2})});
  for (std::size_t i = 0; i < pts.n(); ++i) {
    int direct = wal(kv[0], pts.digits(i, 0)) * wal(kv[1], pts.digits(i, 1));
    CHECK(wal_at(pts, i, kv) == direct);
  }
  KappaVector deep({KappaSet::of({9}), KappaSet()});
  CHECK_THROWS_AS(wal_at(pts, 0, deep), std::invalid_argument);
}
