#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arreg/errors.hpp"
#include "arreg/regularity.hpp"
#include "arreg/rng.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace arreg;
using testing_support::gr;
using testing_support::set_of;

namespace {

GroupSubset union_of_cosets(const Subgroup& h, std::initializer_list<std::size_t> which) {
  const auto cs = cosets(h);
  GroupSubset out(h.group());
  for (const std::size_t i : which) out |= cs.at(i);
  return out;
}

Subgroup span(const Group& g, std::initializer_list<Rank> gens) {
  const std::vector<Rank> v(gens);
  return generated_subgroup(g, v);
}

GroupSubset with_noise(const GroupSubset& a, Rng& rng, double rate) {
  GroupSubset out = a;
  for (Rank r = 0; r < a.universe(); ++r) {
    if (rng.unit() < rate) {
      if (out.contains(r)) {
        out.erase(r);
      } else {
        out.insert(r);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("coset_round examples") {
  const Group v4 = gr({2, 2});
  const Subgroup h = Subgroup::from_members(set_of(v4, {0, 1}));
  CHECK(coset_round(set_of(v4, {0, 1, 2}), h).is_full());
  CHECK(symdiff_size(set_of(v4, {0, 1, 2}), coset_round(set_of(v4, {0, 1, 2}), h)) == 1);
  CHECK(coset_round(set_of(v4, {2, 3}), h) == set_of(v4, {2, 3}));
  CHECK(coset_round(GroupSubset(v4), h).empty());
  CHECK(coset_round(set_of(v4, {1, 3}), trivial_subgroup(v4)) == set_of(v4, {1, 3}));
  CHECK(relative_error(set_of(v4, {0}), GroupSubset(v4)) == Rational(1, 4));
}

TEST_CASE("coset_round matches the majority oracle") {
  Rng rng(1);
  for (const Group& g : testing_support::small_groups(16)) {
    for (const Subgroup& h : enumerate_subgroups(g, std::nullopt)) {
      const GroupSubset a = testing_support::random_subset(g, rng);
      const GroupSubset s = coset_round(a, h);
      CHECK(oracle::bits_of(s) == oracle::coset_round(g, oracle::bits_of(a), oracle::bits_of(h.members())));
    }
  }
}

TEST_CASE("rounding error bound") {
  const Group g = gr({2, 2, 2, 2, 2, 2});
  const Subgroup h = span(g, {1, 2, 4});
  const RoundingReport exact = rounding_error_bound_check(union_of_cosets(h, {0, 3}), h);
  CHECK(exact.symdiff == 0);
  CHECK(exact.profile_sum == 0);
  CHECK(exact.holds);

  Rng rng(2);
  const auto subs = enumerate_subgroups(g, std::nullopt);
  for (int rep = 0; rep < 60; ++rep) {
    const GroupSubset a = testing_support::random_subset(g, rng, 1 + rep % 4, 5);
    const Subgroup& s = subs[rng.below(subs.size())];
    const RoundingReport r = rounding_error_bound_check(a, s);
    CHECK(r.holds);
    CHECK(r.subgroup_size == s.size());
  }
  const RoundingReport triv = rounding_error_bound_check(testing_support::random_subset(g, rng), trivial_subgroup(g));
  CHECK(triv.symdiff == 0);
  CHECK(triv.holds);
}

TEST_CASE("regularize examples") {
  const Group g = gr({2, 2, 2, 2, 2, 2});
  for (const GroupSubset& a : {GroupSubset(g), GroupSubset::full(g)}) {
    const RegularityCertificate c = regularize(a, Rational(1, 10));
    CHECK(c.index == 1);
    CHECK(c.rounded == a);
    CHECK(c.achieved_error == Rational(0));
    CHECK_FALSE(c.degenerate);
    CHECK(verify_certificate(c).ok());
  }

  const Subgroup h0 = span(g, {1, 2, 4});
  const GroupSubset planted = union_of_cosets(h0, {0, 2, 5});
  const RegularityCertificate c = regularize(planted, Rational(1, 5));
  CHECK(c.achieved_error == Rational(0));
  CHECK(h0.members().is_subset_of(almost_periods(planted, c.delta_used).members));
  CHECK(verify_certificate(c).ok());

  CHECK_THROWS_AS(regularize(planted, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(regularize(planted, Rational(1)), InvalidArgument);
}

TEST_CASE("regularize on planted cosets with noise") {
  const Group g = gr({2, 2, 2, 2, 2, 2});
  const Subgroup h0 = span(g, {1, 2, 4});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(seed);
    const GroupSubset a = with_noise(union_of_cosets(h0, {0, 3, 6}), rng, 0.05);
    const Rational eps(1, 5);
    const RegularityCertificate c = regularize(a, eps);
    CHECK(c.achieved_error <= eps);
    CHECK(verify_certificate(c).ok());
    const OracleReport o = oracle_best_subgroup(a, eps, 64);
    REQUIRE(o.min_index);
    CHECK(c.index >= *o.min_index);
  }
}

TEST_CASE("regularize never exceeds epsilon and stays above the oracle minimum") {
  Rng rng(3);
  for (const Group& g : testing_support::small_groups(16)) {
    const auto subs = enumerate_subgroups(g, std::nullopt);
    for (int rep = 0; rep < 10; ++rep) {
      const GroupSubset a = testing_support::random_subset(g, rng);
      for (const Rational eps : {Rational(1, 4), Rational(1, 8)}) {
        const RegularityCertificate c = regularize(a, eps);
        CHECK(c.achieved_error <= eps);
        const OracleReport o = oracle_best_subgroup(a, eps, g.order(), subs);
        REQUIRE(o.min_index);
        CHECK(c.index >= *o.min_index);
        if (!c.degenerate) CHECK(verify_certificate(c).ok());
      }
    }
  }
}

TEST_CASE("regularize sweeps the explicit schedule and reports every sweep") {
  const Group g = gr({3, 3, 3});
  Rng rng(4);
  const GroupSubset a = testing_support::random_subset(g, rng);
  PipelineConfig pc;
  pc.delta_schedule = {Rational(1, 4), Rational(1, 8)};
  const RegularityCertificate c = regularize(a, Rational(1, 2), pc);
  CHECK(c.sweeps.size() == 2);
  CHECK(c.sweeps[0].delta == Rational(1, 4));
  CHECK(c.achieved_error <= Rational(1, 2));

  pc.delta_schedule = {Rational(1, 2)};
  pc.max_sweeps = 0;
  const RegularityCertificate d = regularize(a, Rational(1, 100), pc);
  CHECK(d.degenerate);
  CHECK(d.index == g.order());
  CHECK(d.rounded == a);
  CHECK(d.achieved_error == Rational(0));
}

TEST_CASE("verify_certificate detects tampering") {
  const Group g = gr({2, 2, 2, 2, 2});
  Rng rng(5);
  const Subgroup h0 = span(g, {1, 2});
  const GroupSubset a = with_noise(union_of_cosets(h0, {1, 2, 4}), rng, 0.05);
  const RegularityCertificate c = regularize(a, Rational(1, 4));
  REQUIRE(verify_certificate(c).ok());

  RegularityCertificate bad = c;
  bad.achieved_error = c.achieved_error + Rational(1, 32);
  CHECK_FALSE(verify_certificate(bad).error_matches);

  bad = c;
  Rank outside = 0;
  while (outside < g.order() && c.subgroup.contains(outside)) ++outside;
  if (outside < g.order()) {
    if (bad.rounded.contains(outside)) {
      bad.rounded.erase(outside);
    } else {
      bad.rounded.insert(outside);
    }
    const CertificateCheck k = verify_certificate(bad);
    CHECK_FALSE((k.union_of_cosets && k.error_matches));
  }

  bad = c;
  bad.delta_used = Rational(1, 100000);
  const auto profile = translation_profile(a);
  std::uint32_t worst = 0;
  for (const Rank x : c.subgroup.members().elements()) worst = std::max(worst, profile[x]);
  CHECK(verify_certificate(bad).period_bound == (worst == 0));
}

TEST_CASE("oracle_best_subgroup examples") {
  const Group g = gr({2, 2, 2, 2});
  const Subgroup h0 = span(g, {1, 2});
  const GroupSubset a = union_of_cosets(h0, {0, 3});
  const OracleReport o = oracle_best_subgroup(a, Rational(1, 100), 16);
  REQUIRE(o.min_index);
  CHECK(*o.min_index <= h0.index());
  CHECK(*o.best_error == Rational(0));

  Rng rng(6);
  const GroupSubset r = testing_support::random_subset(g, rng);
  const OracleReport one = oracle_best_subgroup(r, Rational(1, 2), 16);
  CHECK(one.min_index == std::optional<std::uint64_t>(1));

  const OracleReport single = oracle_best_subgroup(set_of(g, {5}), Rational(1, 32), 16);
  CHECK(single.min_index == std::optional<std::uint64_t>(16));
  CHECK(single.best->size() == 1);

  const OracleReport none = oracle_best_subgroup(set_of(g, {5}), Rational(1, 32), 8);
  CHECK_FALSE(none.min_index);

  Caps caps;
  caps.enumeration_order = 8;
  CHECK_THROWS_AS(oracle_best_subgroup(r, Rational(1, 2), 16, caps), CapExceeded);
}

TEST_CASE("oracle frontier is monotone") {
  Rng rng(7);
  for (const std::vector<std::uint32_t>& m : {std::vector<std::uint32_t>{2, 2, 2, 2, 2}, {4, 8}, {3, 9}}) {
    const Group g(m);
    const GroupSubset a = testing_support::random_subset(g, rng);
    const OracleReport o = oracle_best_subgroup(a, Rational(1, 8), g.order());
    REQUIRE_FALSE(o.frontier.empty());
    CHECK(o.frontier.front().index == 1);
    for (std::size_t i = 1; i < o.frontier.size(); ++i) {
      CHECK(o.frontier[i - 1].index < o.frontier[i].index);
      CHECK(o.frontier[i].cumulative_error <= o.frontier[i - 1].cumulative_error);
      CHECK(o.frontier[i].cumulative_error <= o.frontier[i].best_error);
    }
    CHECK(o.frontier.back().cumulative_error == Rational(0));
  }
}

TEST_CASE("robust pipeline examples") {
  const Group g = gr({2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
  RobustConfig rc;
  const RobustOutcome e = robust_pipeline(GroupSubset(g), Rational(1, 10), 1, rc, 1);
  CHECK(e.kind == RobustOutcome::Kind::certificate);
  CHECK(e.certificate->achieved_error == Rational(0));

  const Subgroup h0 = span(g, {1, 2, 4, 8, 16, 32, 64});
  const RobustOutcome p = robust_pipeline(union_of_cosets(h0, {1, 4}), Rational(1, 10), 1, rc, 2);
  CHECK(p.kind == RobustOutcome::Kind::certificate);
  CHECK(p.ball_large);
  CHECK(p.certificate->achieved_error == Rational(0));

  Rng rng(8);
  const GroupSubset rand = testing_support::random_subset(g, rng);
  rc.c = 1.0;
  const RobustOutcome r = robust_pipeline(rand, Rational(1, 10), 1, rc, 3);
  // m = ceil(20 ln 20) = 60, so the ball test needs |B| >= 1024 / 720
  CHECK(r.m == 60);
  CHECK(r.x_size == 720);
  CHECK(r.y_size == 60);
  CHECK(r.kind == RobustOutcome::Kind::sampled_vc);
  REQUIRE(r.sampled);
  CHECK(r.sampled->frequency >= 0.9);

  CHECK_THROWS_AS(robust_pipeline(rand, Rational(1, 10), 0, rc, 3), InvalidArgument);
}
