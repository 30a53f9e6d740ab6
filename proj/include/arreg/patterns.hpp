#pragma once

// Bipartite patterns and bi-induced copies: φ(u) + φ(v) ∈ A exactly on the
// edges of F. Search, construction from shattered sets, sampling tester,
// exact densities and distances, removal-proof coset diagnostics, split APs.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/rational.hpp"
#include "arreg/stats.hpp"

namespace arreg {

/// Bipartite graph on U = {0..u_count-1}, V = {0..v_count-1}. Indices are
/// 0-based in the API and 1-based in pattern files. v_count <= 64.
class BipartitePattern {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  BipartitePattern(std::uint32_t u_count, std::uint32_t v_count, std::vector<Edge> edges);

  std::uint32_t u_count() const noexcept { return u_count_; }
  std::uint32_t v_count() const noexcept { return v_count_; }
  std::uint32_t vertex_count() const noexcept { return u_count_ + v_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool adjacent(std::uint32_t u, std::uint32_t v) const noexcept { return (nbr_[u] >> v) & 1u; }
  /// Bit v set iff (u, v) is an edge.
  std::uint64_t neighborhood(std::uint32_t u) const noexcept { return nbr_[u]; }
  bool has_duplicate_u_neighborhoods() const;

  friend bool operator==(const BipartitePattern& a, const BipartitePattern& b) noexcept {
    return a.u_count_ == b.u_count_ && a.v_count_ == b.v_count_ && a.edges_ == b.edges_;
  }

 private:
  std::uint32_t u_count_;
  std::uint32_t v_count_;
  std::vector<Edge> edges_;           // sorted, deduplicated
  std::vector<std::uint64_t> nbr_;
};

/// u_i ~ v_j iff i <= j.
BipartitePattern half_graph(std::uint32_t k);
BipartitePattern complete_bipartite(std::uint32_t u, std::uint32_t v);

/// F₊: appends ceil(log2 u_count) vertices to V; new vertex b is adjacent to
/// u iff bit b of u's index is set.
BipartitePattern augment_f_plus(const BipartitePattern& f);

std::uint32_t ceil_log2(std::uint64_t n) noexcept;

struct BiInducedWitness {
  std::vector<Rank> phi_u;
  std::vector<Rank> phi_v;
  bool injective_u = false;
  bool injective_v = false;
};

/// The iff-condition on all |U||V| pairs, plus per-side injectivity when
/// require_injective.
bool check_witness(const GroupSubset& a, const BipartitePattern& f, const BiInducedWitness& w,
                   bool require_injective = false);

/// Backtracking over V with per-element trace masks, then U by first fit.
/// φ(v_0) = 0 is fixed (the witness set is translation invariant). Throws
/// CapExceeded past caps.search_nodes.
std::optional<BiInducedWitness> find_bi_induced(const GroupSubset& a, const BipartitePattern& f,
                                                bool require_injective, const Caps& caps = Caps{});

struct ShatteringConstruction {
  std::uint32_t required = 0;         // v_count(F₊)
  std::vector<Rank> shattered;        // image of V(F₊), empty when insufficient
  std::optional<BiInducedWitness> witness;
};

/// Maps V(F₊) onto a shattered set and each u to the first y with
/// (A - y) ∩ φ(V₊) = φ(N₊(u)); the witness is restricted to F.
ShatteringConstruction witness_from_shattering(const GroupSubset& a, const BipartitePattern& f,
                                               const Caps& caps = Caps{});

struct TesterReport {
  std::uint64_t samples = 0;
  std::uint64_t bi_inducing = 0;
  std::uint64_t injective_bi_inducing = 0;
  double fraction = 0.0;
  double injective_fraction = 0.0;
  Interval wilson3;                   // around fraction
  bool decision = false;              // YES iff some sample is injective and bi-inducing
};

TesterReport sample_tester(const GroupSubset& a, const BipartitePattern& f, std::uint64_t samples,
                           std::uint64_t seed);

/// Fraction of all maps V(F) -> G that bi-induce F. Throws CapExceeded when
/// |G|^{|V(F)|} > caps.density_maps.
Rational exhaustive_density(const GroupSubset& a, const BipartitePattern& f, const Caps& caps = Caps{});

/// Memoized F-freeness (no injective bi-induced copy) over all subsets of one
/// group of order <= caps.distance_order, keyed by the subset bitset.
class FreenessCache {
 public:
  FreenessCache(Group g, BipartitePattern f, Caps caps = Caps{});
  bool is_free(std::uint64_t bits);
  const Group& group() const noexcept { return group_; }
  const BipartitePattern& pattern() const noexcept { return pattern_; }

 private:
  Group group_;
  BipartitePattern pattern_;
  Caps caps_;
  std::vector<std::int8_t> memo_;     // -1 unknown, 0 contains a copy, 1 free
};

/// min |A Δ A'| over F-free A', by increasing symmetric difference; nullopt
/// when no subset is F-free.
std::optional<std::uint32_t> distance_to_free(const GroupSubset& a, const BipartitePattern& f,
                                              const Caps& caps = Caps{});
std::optional<std::uint32_t> distance_to_free(const GroupSubset& a, FreenessCache& cache);

/// Distances for every subset of G at once (multi-source search over the
/// cube from the F-free sets); entry -1 when no subset is F-free.
std::vector<int> distance_to_free_all(FreenessCache& cache);

struct CosetGoodness {
  Subgroup subgroup;
  Rational eta;                        // 1 / (2 |U| |V|)
  std::vector<GroupSubset> cosets;     // cosets(subgroup) order
  std::vector<bool> good;              // density in [0, η] ∪ [1 - η, 1]
  Rational bad_fraction;
};

CosetGoodness coset_goodness(const GroupSubset& a, const Subgroup& h, const BipartitePattern& f);

struct DensifyReport {
  Rational eta;
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double fraction = 0.0;
  Interval wilson3;
  bool holds = false;                  // wilson3.hi >= 1/2
};

/// Resamples φ(u) in φ(u) + H and φ(v) in φ(v) + H. Requires every coset
/// φ(u) + φ(v) + H to be good and w to bi-induce F in coset_round(A, H);
/// throws PreconditionViolated otherwise.
DensifyReport densify(const GroupSubset& a, const Subgroup& h, const BiInducedWitness& w, const BipartitePattern& f,
                      std::uint64_t samples, std::uint64_t seed);

struct ApWitness {
  Rank start = 0;                      // x
  Rank step = 0;                       // d
  std::uint32_t k = 0;
};

/// First (x, d), d != 0, in rank order with x + s d ∈ A for s < k and
/// x + s d ∉ A for k <= s < 2k. Requires 2k <= |G|.
std::optional<ApWitness> ap_search(const GroupSubset& a, std::uint32_t k);

/// φ(u_i) = x + (k - 1 + i) d, φ(v_j) = -j d for 1-based i, j: the sum is
/// the term of index k - 1 + i - j, inside A iff i <= j.
BiInducedWitness half_graph_from_ap(const Group& g, const ApWitness& ap);

}  // namespace arreg
