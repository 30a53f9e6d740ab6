#pragma once

// VC dimension of translate systems {(A + x) ∩ Y : x ∈ X}: exact shattering
// search, Sauer-Perles-Shelah counts, greedy δ-separated packings, and the
// Monte-Carlo checks behind the sampled (robust) VC hypothesis.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/rational.hpp"
#include "arreg/stats.hpp"

namespace arreg {

struct TranslateSystem {
  GroupSubset base;         // A
  GroupSubset ground;       // Y
  GroupSubset translators;  // X

  /// X = Y = G.
  static TranslateSystem full(const GroupSubset& a);
  bool is_full() const;
};

/// Distinct traces (A + x) ∩ Y over x ∈ X, in first-seen (rank of x) order.
std::vector<GroupSubset> distinct_traces(const TranslateSystem& sys);

struct VcDimension {
  int value = 0;                 // exact, or max_d + 1 when exceeds_limit
  bool exceeds_limit = false;    // true: vcdim > max_d (value is then a lower bound)
  std::vector<Rank> shattered;   // a shattered set of size `value`
};

/// Exact VC dimension. With max_d, stops as soon as a set of size max_d + 1
/// is shattered. Throws CapExceeded when |Y| > caps.vc_ground or the node
/// budget runs out.
VcDimension vc_dimension(const TranslateSystem& sys, std::optional<int> max_d = std::nullopt,
                         const Caps& caps = Caps{});

/// A shattered subset of Y of exactly `size` elements, if any.
std::optional<std::vector<Rank>> find_shattered_set(const TranslateSystem& sys, int size, const Caps& caps = Caps{});

bool is_shattered(const TranslateSystem& sys, std::span<const Rank> set);

struct SauerReport {
  std::size_t trace_count = 0;
  std::size_t ground_size = 0;           // n
  int d = 0;
  bool d_is_lower_bound = false;         // vcdim > max_d; bounds checked at d (monotone in d)
  std::uint64_t binomial_sum = 0;        // sum_{i<=d} C(n, i), saturating
  std::uint64_t polynomial_bound = 0;    // 2 n^d, saturating
  bool binomial_holds = false;
  bool polynomial_applies = false;       // n >= 2 and d >= 1
  bool polynomial_holds = true;
  bool holds() const noexcept { return binomial_holds && polynomial_holds; }
};

SauerReport sauer_check(const TranslateSystem& sys, std::optional<int> max_d = std::nullopt,
                        const Caps& caps = Caps{});

struct PackingResult {
  Rational delta;
  std::vector<Rank> centers;       // W, rank order
  bool certified_separation = false;  // separation and maximality re-verified from bitsets
  VcDimension vc;                  // d used for the Haussler comparison
  bool haussler_holds = false;     // |W| <= (30/delta)^d
};

struct PackingOptions {
  std::optional<int> vc_limit;     // threshold query for d; the bound is monotone in d
  bool verify = true;
};

/// Greedy maximal δ-separated translate family, scanning x in rank order.
PackingResult greedy_packing(const GroupSubset& a, Rational delta, const PackingOptions& options = {},
                             const Caps& caps = Caps{});

struct SampledVcReport {
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  int d = 0;
  std::uint64_t trials = 0;
  std::uint64_t exceed_count = 0;  // trials with restricted vcdim > d
  double frequency = 0.0;
  Interval wilson95;
};

SampledVcReport sampled_vc(const GroupSubset& a, std::size_t x_size, std::size_t y_size, std::uint64_t trials,
                           int d, std::uint64_t seed, const Caps& caps = Caps{});

/// Undirected graph on [0, n): explicit adjacency lists or the Cayley graph
/// x ~ y iff x - y ∈ ±(B \ {0}).
class AdjacencyOracle {
 public:
  static AdjacencyOracle from_edges(std::uint32_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);
  static AdjacencyOracle cayley(const GroupSubset& b);

  std::uint32_t vertex_count() const noexcept { return n_; }
  std::size_t max_degree() const;
  std::vector<std::uint32_t> neighbors(std::uint32_t v) const;
  bool adjacent(std::uint32_t u, std::uint32_t v) const;

 private:
  std::uint32_t n_ = 0;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::optional<Group> group_;
  std::vector<Rank> steps_;        // symmetric generator set without 0
  std::optional<GroupSubset> step_set_;
};

struct RateReport {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
  double bound = 0.0;  // 1 - e^{-k/8}
  Interval wilson3;
  bool holds = false;  // wilson3.hi >= bound
};

/// Monte-Carlo rate at which a uniform random k-subset, read in draw order,
/// yields a greedy independent set of size >= k/4. Requires
/// max_degree * k <= n and 2k <= n.
RateReport random_independent_subset_rate(const AdjacencyOracle& graph, std::uint32_t k, std::uint64_t trials,
                                          std::uint64_t seed);

struct SeparatedSampleReport {
  std::size_t family_size = 0;
  std::uint64_t trials = 0;
  std::uint64_t low_vc_count = 0;  // trials with vcdim(family|M) <= d
  double probability = 0.0;
  double premise_threshold = 0.0;  // 3 m^{2d} (1 - delta)^m
  double size_bound = 0.0;         // 2 m^d
  bool premise = false;
  bool conclusion = false;
  bool holds() const noexcept { return !premise || conclusion; }
};

SeparatedSampleReport separated_sample_bound_check(const GroupSubset& a, Rational delta, std::uint32_t m, int d,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   const Caps& caps = Caps{});

}  // namespace arreg
