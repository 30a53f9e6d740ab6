#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "arreg/errors.hpp"
#include "arreg/rng.hpp"
#include "arreg/setops.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace arreg;
using testing_support::gr;
using testing_support::set_of;

TEST_CASE("translate examples") {
  const Group v4 = gr({2, 2});
  CHECK(translate(set_of(v4, {0, 1}), 2) == set_of(v4, {2, 3}));
  const Group z4 = gr({4});
  CHECK(translate(set_of(z4, {1}), 3) == set_of(z4, {0}));
  const GroupSubset a = set_of(z4, {0, 3});
  CHECK(translate(a, 0) == a);
}

TEST_CASE("translate agrees with elementwise shift on every kernel") {
  Rng rng(11);
  for (const std::vector<std::uint32_t>& m : {std::vector<std::uint32_t>{2, 2, 2, 2, 2, 2, 2}, {200}, {64}, {3, 5, 7},
                                              {4, 2, 8}, {2}}) {
    const Group g(m);
    const GroupSubset a = testing_support::random_subset(g, rng);
    for (Rank x = 0; x < g.order(); x += 1 + g.order() / 17) {
      const GroupSubset t = translate(a, x);
      CHECK(t.size() == a.size());
      CHECK(oracle::bits_of(t) == oracle::translate(g, oracle::bits_of(a), x));
    }
  }
}

TEST_CASE("symdiff_size examples") {
  const Group v4 = gr({2, 2});
  CHECK(symdiff_size(set_of(v4, {0, 1}), set_of(v4, {2, 3})) == 4);
  CHECK(symdiff_size(set_of(v4, {0, 1}), set_of(v4, {0, 1})) == 0);
  CHECK(symdiff_size(set_of(v4, {0, 1}), set_of(v4, {1, 2})) == 2);
  CHECK_THROWS_AS(symdiff_size(set_of(v4, {0}), set_of(gr({4}), {0})), GroupMismatch);
}

TEST_CASE("translation profile matches direct symmetric differences") {
  Rng rng(5);
  for (const std::vector<std::uint32_t>& m : {std::vector<std::uint32_t>{2, 2, 2, 2, 2}, {27}, {3, 6}, {2, 4, 4}}) {
    const Group g(m);
    for (int rep = 0; rep < 4; ++rep) {
      const GroupSubset a = testing_support::random_subset(g, rng, 1 + rep, 5);
      const auto profile = translation_profile(a);
      const auto bits = oracle::bits_of(a);
      for (Rank x = 0; x < g.order(); ++x) CHECK(profile[x] == oracle::symdiff(bits, oracle::translate(g, bits, x)));
    }
  }
}

TEST_CASE("almost_periods examples") {
  const Group v4 = gr({2, 2});
  const GroupSubset h = set_of(v4, {0, 1});
  CHECK(almost_periods(h, Rational(1, 2)).members == h);
  CHECK(almost_periods(set_of(v4, {0, 2, 3}), Rational(1)).members.is_full());
  CHECK(almost_periods(GroupSubset(v4), Rational(1, 8)).members.is_full());
  CHECK_THROWS_AS(almost_periods(h, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(almost_periods(h, Rational(3, 2)), InvalidArgument);
}

TEST_CASE("almost_periods: contains 0, symmetric, monotone in delta") {
  Rng rng(7);
  const Group g = gr({2, 2, 4, 3});
  for (int rep = 0; rep < 10; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng, 1, 3);
    GroupSubset prev(g);
    for (const Rational d : {Rational(1, 16), Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1)}) {
      const GroupSubset b = almost_periods(a, d).members;
      CHECK(b.contains(0));
      CHECK(negate(b) == b);
      CHECK(prev.is_subset_of(b));
      prev = b;
    }
  }
}

TEST_CASE("triangle inequality for translates") {
  Rng rng(3);
  const Group g = gr({3, 9});
  const GroupSubset a = testing_support::random_subset(g, rng);
  const auto p = translation_profile(a);
  for (Rank x = 0; x < g.order(); ++x) {
    for (Rank y = 0; y < g.order(); ++y) CHECK(p[g.add(x, y)] <= p[x] + p[y]);
  }
}

TEST_CASE("sumset and difference_set examples") {
  const Group v4 = gr({2, 2});
  CHECK(sumset(set_of(v4, {0, 1}), set_of(v4, {0, 2})).is_full());
  const GroupSubset a = set_of(v4, {1, 3});
  CHECK(sumset(a, set_of(v4, {0})) == a);
  const Group z5 = gr({5});
  CHECK(sumset(set_of(z5, {1, 2}), set_of(z5, {1, 2})) == set_of(z5, {2, 3, 4}));
  CHECK(difference_set(set_of(z5, {1, 2}), set_of(z5, {1, 2})) == set_of(z5, {0, 1, 4}));
  const GroupSubset h = set_of(v4, {0, 2});
  CHECK(difference_set(h, h) == h);
  CHECK(sumset(GroupSubset(z5), set_of(z5, {1})).empty());
}

TEST_CASE("sumset matches pairwise oracle") {
  Rng rng(9);
  for (const std::vector<std::uint32_t>& m : {std::vector<std::uint32_t>{2, 2, 2, 2, 2, 2}, {50}, {3, 3, 4}}) {
    const Group g(m);
    for (int rep = 0; rep < 5; ++rep) {
      const GroupSubset a = testing_support::random_subset(g, rng, 1, 8);
      const GroupSubset b = testing_support::random_subset(g, rng, 1, 4);
      CHECK(oracle::bits_of(sumset(a, b)) == oracle::sumset(g, oracle::bits_of(a), oracle::bits_of(b)));
      CHECK(difference_set(a, b).contains(0) == a.intersects(b));
      if (!a.empty()) {
        CHECK(multiple_sumset(a, 3) == sumset(sumset(a, a), a));
      }
    }
  }
}

TEST_CASE("doubling growth schedule") {
  CHECK(DoublingConfig::for_delta(Rational(9, 10)).growth == doctest::Approx(2.0));
  CHECK(DoublingConfig::for_delta(Rational(1, 2)).growth == doctest::Approx(std::exp(std::pow(std::log(2.0), 0.2))));
  const double d = 1e-6;
  CHECK(DoublingConfig::for_delta(Rational(1, 1000000)).growth ==
        doctest::Approx(std::max(2.0, std::exp(std::pow(std::log(1 / d), 0.2)))));
}

TEST_CASE("iterated_doubling examples") {
  const Group g = gr({2, 2, 2, 2});
  const GroupSubset h = set_of(g, {0, 1, 2, 3});
  const DoublingTrace t = iterated_doubling(h, DoublingConfig{});
  CHECK(t.ell == 1);
  CHECK(t.sizes == std::vector<std::size_t>{4, 4});

  // 2{0,1} = {0,1} in an exponent-2 group
  const DoublingTrace two = iterated_doubling(set_of(g, {0, 1}), DoublingConfig{2.0});
  CHECK(two.ell == 1);
  CHECK(two.sizes == std::vector<std::size_t>{2, 2});

  CHECK(iterated_doubling(GroupSubset::full(g), DoublingConfig{}).ell == 1);
  CHECK_THROWS_AS(iterated_doubling(GroupSubset(g), DoublingConfig{}), PreconditionViolated);

  // growth is large until the sumsets saturate
  const Group z = gr({1000});
  const DoublingTrace iv = iterated_doubling(set_of(z, {0, 1, 500}), DoublingConfig{2.0});
  for (std::size_t i = 0; i + 2 < iv.sizes.size(); ++i) CHECK(iv.sizes[i + 1] > 2 * iv.sizes[i]);
  CHECK(iv.sizes.back() <= 2 * iv.sizes[iv.sizes.size() - 2]);
  CHECK(iv.two_ell_b.size() == iv.sizes.back());
  CHECK(multiple_sumset(set_of(z, {0, 1, 500}), iv.ell) == iv.ell_b);
}

TEST_CASE("max_subgroup_within examples") {
  const Group z4 = gr({4});
  CHECK(max_subgroup_within(set_of(z4, {0, 3})).size() == 1);
  CHECK(max_subgroup_within(set_of(z4, {0, 2, 3})).members() == set_of(z4, {0, 2}));
  const Group g = gr({2, 2, 2});
  const GroupSubset h = set_of(g, {0, 1, 2, 3});
  CHECK(max_subgroup_within(h).members() == h);
  CHECK_THROWS_AS(max_subgroup_within(set_of(g, {1, 2})), PreconditionViolated);
}

TEST_CASE("max_subgroup_within is maximum among all subgroups inside T") {
  Rng rng(21);
  for (const Group& g : testing_support::small_groups(16)) {
    const auto subs = oracle::all_subgroups(g);
    for (int rep = 0; rep < 12; ++rep) {
      GroupSubset t = testing_support::random_subset(g, rng, 2 + rep % 3, 5);
      t.insert(0);
      const Subgroup h = max_subgroup_within(t);
      CHECK(is_subgroup(h.members()));
      CHECK(h.members().is_subset_of(t));
      std::size_t best = 0;
      const auto tb = oracle::bits_of(t);
      for (const auto& s : subs) {
        bool inside = true;
        for (std::size_t i = 0; i < s.size(); ++i) inside = inside && (!s[i] || tb[i]);
        if (inside) best = std::max(best, oracle::count(s));
      }
      CHECK(h.size() == best);
    }
  }
}

TEST_CASE("max_subgroup_within on large sets containing a planted subgroup") {
  Rng rng(4);
  const Group g = gr({2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
  const Rank gens[] = {1, 2, 4, 8, 16, 32};
  const Subgroup planted = generated_subgroup(g, gens);
  GroupSubset t = planted.members();
  for (int i = 0; i < 200; ++i) t.insert(static_cast<Rank>(rng.below(g.order())));
  const Subgroup h = max_subgroup_within(t);
  CHECK(h.members().is_subset_of(t));
  CHECK(h.size() >= planted.size());
}

TEST_CASE("kneser_fill_check examples") {
  const Group z5 = gr({5});
  const FillReport r = kneser_fill_check(set_of(z5, {0, 1}), 3);
  CHECK(r.generates);
  CHECK(r.large_enough);
  CHECK(r.filled);
  CHECK(r.holds());

  const Group v4 = gr({2, 2});
  const FillReport sub = kneser_fill_check(set_of(v4, {0, 1}), 1);
  CHECK_FALSE(sub.generates);
  CHECK(sub.holds());

  CHECK(kneser_fill_check(GroupSubset::full(v4), 1).filled);
  CHECK_THROWS_AS(kneser_fill_check(GroupSubset(v4), 1), PreconditionViolated);
}

TEST_CASE("kneser fill: a generating set inside a coset need not fill") {
  // A = {1} generates Z2 and |A| >= |G|/2, yet 4A = {0}
  const FillReport r = kneser_fill_check(set_of(gr({2}), {1}), 2);
  CHECK(r.generates);
  CHECK(r.large_enough);
  CHECK_FALSE(r.filled);
  CHECK_FALSE(r.differences_generate);
  CHECK(r.affine_holds());
}

TEST_CASE("kneser fill under the affine hypothesis, exhaustive for |G| <= 12") {
  for (const Group& g : testing_support::small_groups(12)) {
    const std::uint32_t n = g.order();
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const GroupSubset a = testing_support::from_mask(g, m);
      for (std::uint64_t t = 1; t <= 4; ++t) CHECK(kneser_fill_check(a, t).affine_holds());
    }
  }
}
