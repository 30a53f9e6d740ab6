#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "arreg/errors.hpp"
#include "arreg/rng.hpp"
#include "arreg/setops.hpp"
#include "arreg/vc.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace arreg;
using testing_support::gr;
using testing_support::set_of;

namespace {
int vcdim(const GroupSubset& a) { return vc_dimension(TranslateSystem::full(a)).value; }

GroupSubset interval(std::uint32_t p, std::uint32_t len) {
  const Group g = gr({p});
  GroupSubset s(g);
  for (Rank r = 1; r <= len; ++r) s.insert(r);
  return s;
}
}  // namespace

TEST_CASE("vc_dimension examples") {
  const Group g = gr({2, 2, 2});
  CHECK(vcdim(GroupSubset(g)) == 0);
  CHECK(vcdim(GroupSubset::full(g)) == 0);
  CHECK(vcdim(set_of(g, {0, 1})) == 1);
  CHECK(vcdim(set_of(g, {0, 1, 2, 3})) == 1);
  CHECK(vcdim(interval(13, 6)) <= 3);
}

TEST_CASE("vc_dimension matches brute force on every subset of small groups") {
  for (const Group& g : testing_support::small_groups(8)) {
    CAPTURE(g.name());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.order()); ++m) {
      const GroupSubset a = testing_support::from_mask(g, m);
      const VcDimension v = vc_dimension(TranslateSystem::full(a));
      CHECK(v.value == oracle::vc_dimension(g, oracle::bits_of(a)));
      CHECK(v.shattered.size() == static_cast<std::size_t>(v.value));
      CHECK(is_shattered(TranslateSystem::full(a), v.shattered));
    }
  }
}

TEST_CASE("vc_dimension matches brute force on random subsets of order 16") {
  Rng rng(1);
  for (const auto& m : abelian_group_moduli(16)) {
    const Group g(m);
    for (int rep = 0; rep < 40; ++rep) {
      const GroupSubset a = testing_support::random_subset(g, rng);
      CHECK(vcdim(a) == oracle::vc_dimension(g, oracle::bits_of(a)));
    }
  }
}

TEST_CASE("threshold mode") {
  Rng rng(2);
  const Group g = gr({2, 2, 2, 2, 2, 2});
  const GroupSubset a = testing_support::random_subset(g, rng);
  const int d = vcdim(a);
  REQUIRE(d >= 2);
  const VcDimension low = vc_dimension(TranslateSystem::full(a), d - 2);
  CHECK(low.exceeds_limit);
  CHECK(low.value == d - 1);
  const VcDimension high = vc_dimension(TranslateSystem::full(a), d);
  CHECK_FALSE(high.exceeds_limit);
  CHECK(high.value == d);
  CHECK_THROWS_AS(vc_dimension(TranslateSystem::full(a), -1), InvalidArgument);
}

TEST_CASE("restricted systems") {
  Rng rng(3);
  const Group g = gr({2, 2, 2, 2, 2});
  for (int rep = 0; rep < 20; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng);
    const GroupSubset y = testing_support::random_subset(g, rng);
    const GroupSubset x = testing_support::random_subset(g, rng, 3, 4) | set_of(g, {0});
    const int full = vcdim(a);
    const int ry = vc_dimension(TranslateSystem{a, y, GroupSubset::full(g)}).value;
    const int rxy = vc_dimension(TranslateSystem{a, y, x}).value;
    CHECK(ry <= full);
    CHECK(rxy <= ry);
  }
}

TEST_CASE("vc_dimension is translation invariant") {
  Rng rng(4);
  const Group g = gr({3, 9});
  for (int rep = 0; rep < 10; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng);
    const int d = vcdim(a);
    for (Rank z = 0; z < g.order(); z += 5) CHECK(vcdim(translate(a, z)) == d);
  }
}

TEST_CASE("search caps") {
  Caps caps;
  caps.vc_ground = 8;
  const Group g = gr({16});
  CHECK_THROWS_AS(vc_dimension(TranslateSystem::full(set_of(g, {1})), std::nullopt, caps), CapExceeded);
  caps = Caps{};
  caps.search_nodes = 3;
  Rng rng(5);
  const GroupSubset a = testing_support::random_subset(gr({2, 2, 2, 2, 2, 2}), rng);
  CHECK_THROWS_AS(vc_dimension(TranslateSystem::full(a), std::nullopt, caps), CapExceeded);
}

TEST_CASE("sauer_check examples") {
  const Group g = gr({2, 2, 2});
  const SauerReport r = sauer_check(TranslateSystem::full(set_of(g, {0, 1, 2, 3})));
  CHECK(r.trace_count == 2);
  CHECK(r.d == 1);
  CHECK(r.binomial_sum == 9);
  CHECK(r.polynomial_bound == 16);
  CHECK(r.holds());

  const SauerReport full = sauer_check(TranslateSystem::full(GroupSubset::full(g)));
  CHECK(full.trace_count == 1);
  CHECK(full.d == 0);
  CHECK(full.binomial_sum == 1);
  CHECK(full.holds());

  Rng rng(6);
  const Group g16 = gr({2, 2, 2, 2});
  for (int rep = 0; rep < 50; ++rep) {
    const GroupSubset a = testing_support::random_subset(g16, rng);
    const SauerReport s = sauer_check(TranslateSystem::full(a));
    CHECK(s.holds());
    CHECK(s.trace_count == oracle::distinct_translates(g16, oracle::bits_of(a)));
  }
}

TEST_CASE("sauer_check on restricted systems") {
  Rng rng(7);
  const Group g = gr({4, 4, 4});
  for (int rep = 0; rep < 30; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng);
    const GroupSubset y = testing_support::random_subset(g, rng, 1, 6);
    CHECK(sauer_check(TranslateSystem{a, y, GroupSubset::full(g)}).holds());
  }
}

TEST_CASE("greedy_packing examples") {
  const Group g = gr({2, 2, 2});
  const PackingResult h = greedy_packing(set_of(g, {0, 1, 2, 3}), Rational(1, 2));
  CHECK(h.centers == std::vector<Rank>{0, 4});
  CHECK(h.certified_separation);
  CHECK(h.haussler_holds);

  CHECK(greedy_packing(set_of(g, {0, 3, 5}), Rational(1)).centers.size() == 1);
  CHECK(greedy_packing(GroupSubset(g), Rational(1, 4)).centers.size() == 1);
  CHECK_THROWS_AS(greedy_packing(GroupSubset(g), Rational(0)), InvalidArgument);
}

TEST_CASE("greedy_packing is separated and maximal") {
  Rng rng(8);
  for (const std::vector<std::uint32_t>& m : {std::vector<std::uint32_t>{2, 2, 2, 2, 2, 2}, {45}, {2, 4, 8}}) {
    const Group g(m);
    for (const Rational d : {Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
      const GroupSubset a = testing_support::random_subset(g, rng);
      const PackingResult r = greedy_packing(a, d);
      CHECK(r.certified_separation);
      CHECK(r.haussler_holds);
      const auto bits = oracle::bits_of(a);
      for (std::size_t i = 0; i < r.centers.size(); ++i) {
        for (std::size_t j = i + 1; j < r.centers.size(); ++j) {
          const auto s = oracle::symdiff(oracle::translate(g, bits, r.centers[i]), oracle::translate(g, bits, r.centers[j]));
          CHECK_FALSE(d.bounds_count(s, g.order()));
        }
      }
    }
  }
}

TEST_CASE("sampled_vc") {
  const Group g = gr({2, 2, 2, 2});
  Rng rng(9);
  const GroupSubset a = testing_support::random_subset(g, rng);
  const int d = vcdim(a);
  const SampledVcReport full = sampled_vc(a, 16, 16, 1, d - 1, 3);
  CHECK(full.exceed_count == 1);
  CHECK(sampled_vc(a, 16, 16, 1, d, 3).exceed_count == 0);

  for (int dd = 0; dd < 3; ++dd) CHECK(sampled_vc(GroupSubset(g), 8, 8, 20, dd, 1).frequency == 0.0);
  CHECK_THROWS_AS(sampled_vc(a, 17, 4, 1, 1, 1), InvalidArgument);

  const SampledVcReport r = sampled_vc(a, 8, 8, 200, 1, 42);
  CHECK(r.wilson95.contains(r.frequency));
  CHECK(sampled_vc(a, 8, 8, 200, 1, 42).exceed_count == r.exceed_count);
}

TEST_CASE("sampled_vc frequency agrees with exhaustive enumeration of small samples") {
  // planted high-VC set in Z2^8: a random set; all (X, Y) pairs of size 2 over
  // a fixed 6-element window give the exact probability of vcdim > d.
  Rng rng(10);
  const Group g = gr({2, 2, 2, 2, 2, 2, 2, 2});
  const GroupSubset a = testing_support::random_subset(g, rng);
  std::uint64_t exceed = 0;
  std::uint64_t total = 0;
  for (Rank x0 = 0; x0 < g.order(); ++x0) {
    for (Rank x1 = x0 + 1; x1 < g.order(); ++x1) {
      for (Rank y0 = 0; y0 < 4; ++y0) {
        for (Rank yy = y0 + 1; yy < 4; ++yy) {
          const TranslateSystem sys{a, set_of(g, {y0, yy}), set_of(g, {x0, x1})};
          exceed += vc_dimension(sys, 0).exceeds_limit;
          ++total;
        }
      }
    }
  }
  const double p = static_cast<double>(exceed) / static_cast<double>(total);
  // vcdim > 0 means some y separates the two translates
  std::uint64_t direct = 0;
  for (Rank x0 = 0; x0 < g.order(); ++x0) {
    for (Rank x1 = x0 + 1; x1 < g.order(); ++x1) {
      for (Rank y0 = 0; y0 < 4; ++y0) {
        for (Rank yy = y0 + 1; yy < 4; ++yy) {
          bool split = false;
          for (const Rank y : {y0, yy}) split |= a.contains(g.sub(y, x0)) != a.contains(g.sub(y, x1));
          direct += split;
        }
      }
    }
  }
  CHECK(exceed == direct);
  CHECK(p > 0.0);
}

TEST_CASE("adjacency oracles") {
  const std::pair<std::uint32_t, std::uint32_t> e[] = {{0, 1}, {1, 0}, {2, 3}, {2, 2}};
  const AdjacencyOracle g = AdjacencyOracle::from_edges(4, e);
  CHECK(g.max_degree() == 1);
  CHECK(g.adjacent(1, 0));
  CHECK_FALSE(g.adjacent(1, 2));
  CHECK(g.neighbors(2) == std::vector<std::uint32_t>{3});

  const Group z8 = gr({8});
  const AdjacencyOracle c = AdjacencyOracle::cayley(set_of(z8, {0, 1}));
  CHECK(c.max_degree() == 2);
  CHECK(c.neighbors(0) == std::vector<std::uint32_t>{1, 7});
  CHECK(c.adjacent(3, 4));
  CHECK_FALSE(c.adjacent(3, 5));
}

TEST_CASE("independent subset rate") {
  const AdjacencyOracle empty = AdjacencyOracle::from_edges(32, {});
  const RateReport e = random_independent_subset_rate(empty, 8, 500, 1);
  CHECK(e.successes == 500);
  CHECK(e.holds);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> matching;
  for (std::uint32_t i = 0; i < 32; i += 2) matching.emplace_back(i, i + 1);
  const RateReport m = random_independent_subset_rate(AdjacencyOracle::from_edges(32, matching), 8, 4000, 2);
  CHECK(m.bound == doctest::Approx(1 - std::exp(-1.0)));
  CHECK(m.holds);

  Rng rng(11);
  const Group g = gr({2, 2, 2, 2, 2, 2});
  GroupSubset b(g);
  b.insert(0);
  for (int i = 0; i < 4; ++i) b.insert(static_cast<Rank>(rng.below(64)));
  const AdjacencyOracle cay = AdjacencyOracle::cayley(b);
  const std::uint32_t k = static_cast<std::uint32_t>(64 / std::max<std::size_t>(cay.max_degree(), 1));
  const RateReport c = random_independent_subset_rate(cay, std::min<std::uint32_t>(k, 32), 4000, 3);
  CHECK(c.holds);

  CHECK_THROWS_AS(random_independent_subset_rate(AdjacencyOracle::from_edges(32, matching), 17, 10, 1),
                  PreconditionViolated);
  CHECK_THROWS_AS(random_independent_subset_rate(cay, 64, 10, 1), PreconditionViolated);
}

TEST_CASE("separated sample bound") {
  const Group g = gr({2, 2, 2, 2, 2, 2, 2, 2});
  const SeparatedSampleReport one = separated_sample_bound_check(GroupSubset(g), Rational(1, 4), 4, 1, 50, 1);
  CHECK(one.family_size == 1);
  CHECK(one.low_vc_count == 50);
  CHECK(one.holds());

  GroupSubset h(g);
  for (Rank r = 0; r < 128; ++r) h.insert(r);
  const SeparatedSampleReport two = separated_sample_bound_check(h, Rational(1, 2), 6, 1, 50, 2);
  CHECK(two.family_size == 2);
  CHECK(two.conclusion);

  Rng rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng);
    CHECK(separated_sample_bound_check(a, Rational(1, 4), 8, 2, 40, 10 + rep).holds());
  }
}
