#pragma once

// Subset algebra over a finite abelian group: translates, symmetric
// differences, sumsets, almost-period sets, iterated doubling, and subgroup
// extraction from a set containing 0.

#include <cstdint>
#include <vector>

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/rational.hpp"

namespace arreg {

GroupSubset translate(const GroupSubset& a, Rank x);
GroupSubset negate(const GroupSubset& a);

/// |A Δ B|. Throws GroupMismatch.
std::size_t symdiff_size(const GroupSubset& a, const GroupSubset& b);

/// profile[x] = |A Δ (A + x)| for every x, computed through the difference
/// counts of A (or of its complement, whichever is smaller).
std::vector<std::uint32_t> translation_profile(const GroupSubset& a);

struct AlmostPeriodSet {
  GroupSubset base;
  Rational delta;
  GroupSubset members;  // {x : |A Δ (A+x)| <= delta |G|}
};

/// Exact B_delta(A). Requires 0 < delta <= 1.
AlmostPeriodSet almost_periods(const GroupSubset& a, Rational delta);

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b);
GroupSubset difference_set(const GroupSubset& a, const GroupSubset& b);

/// k-fold sumset kA for k >= 1.
GroupSubset multiple_sumset(const GroupSubset& a, std::uint64_t k);

/// Growth bound K for the doubling search.
struct DoublingConfig {
  double growth = 2.0;

  /// K(delta) = exp((ln 1/delta)^{1/5}), floored at 2.
  static DoublingConfig for_delta(Rational delta);
};

struct DoublingTrace {
  double growth = 2.0;              // the K that was tested
  std::uint64_t ell = 1;            // ℓ = 2^i
  std::vector<std::size_t> sizes;   // |B|, |2B|, |4B|, ..., |2ℓB|
  GroupSubset ell_b;                // ℓB
  GroupSubset two_ell_b;            // 2ℓB
};

/// Doubles B until |2^{i+1}B| <= K |2^i B|. Requires B nonempty.
DoublingTrace iterated_doubling(const GroupSubset& b, const DoublingConfig& config);

/// Largest subgroup inside the greedy-closure growth of T in rank order.
Subgroup greedy_subgroup_within(const GroupSubset& t);

/// A maximum-cardinality subgroup contained in T (0 ∈ T required). Exact:
/// branch and bound over subgroups inside T, seeded by the greedy closure.
/// Among equal-size optima the first one found is returned (greedy result
/// first, deterministic search order after that).
Subgroup max_subgroup_within(const GroupSubset& t, const Caps& caps = Caps{});

struct FillReport {
  std::uint64_t t = 1;
  bool generates = false;              // <A> = G
  bool differences_generate = false;   // <A - A> = G (A is in no coset of a proper subgroup)
  bool large_enough = false;           // |A| >= |G| / t
  std::vector<std::size_t> sizes;      // |A|, |2A|, ..., |2tA|
  bool filled = false;                 // 2tA = G
  /// generates && large_enough implies filled.
  bool holds() const noexcept { return !(generates && large_enough) || filled; }
  /// Same implication under the affine hypothesis <A - A> = G.
  bool affine_holds() const noexcept { return !(differences_generate && large_enough) || filled; }
};

/// Checks the implication "|A| >= |G|/t and A generates G => 2tA = G" by
/// direct iterated sumset.
FillReport kneser_fill_check(const GroupSubset& a, std::uint64_t t);

}  // namespace arreg
