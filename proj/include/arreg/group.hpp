#pragma once

// Finite abelian groups as products of cyclic groups, bitset subsets, and
// subgroup machinery (closure, enumeration, cosets, complements).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arreg/caps.hpp"

namespace arreg {

/// Element rank: little-endian mixed radix,
/// rank = sum_i coord_i * prod_{j<i} moduli_j.
using Rank = std::uint32_t;

/// Immutable descriptor of Z_{m_0} x ... x Z_{m_{k-1}}. Cheap to copy
/// (shared immutable state); safe to share across threads.
class Group {
 public:
  explicit Group(std::vector<std::uint32_t> moduli, const Caps& caps = Caps{});

  std::span<const std::uint32_t> moduli() const noexcept;
  std::uint32_t order() const noexcept;
  std::uint64_t exponent() const noexcept;
  std::size_t rank_count() const noexcept { return moduli().size(); }

  Rank add(Rank a, Rank b) const;
  Rank neg(Rank a) const;
  Rank sub(Rank a, Rank b) const { return add(a, neg(b)); }
  Rank multiple(Rank a, std::uint64_t k) const;

  /// Throws InvalidArgument if r >= order().
  void check_rank(Rank r) const;

  std::vector<std::uint32_t> coordinates(Rank r) const;
  Rank from_coordinates(std::span<const std::uint32_t> coords) const;

  /// Comma-joined coordinates, e.g. "1,0,2".
  std::string element_text(Rank r) const;
  Rank parse_element(const std::string& text) const;

  /// "Z2xZ2xZ4".
  std::string name() const;

  friend bool operator==(const Group& a, const Group& b) noexcept;

  // Fast paths used by the bitset kernels.
  bool is_elementary_two() const noexcept;
  bool is_cyclic() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Every abelian group of order n up to isomorphism, in invariant-factor
/// form (m_0 | m_1 | ...), listed with moduli ascending.
std::vector<std::vector<std::uint32_t>> abelian_group_moduli(std::uint32_t n);

/// Subset of G as a bitset of length |G| (bit i = rank i).
class GroupSubset {
 public:
  explicit GroupSubset(Group group);
  static GroupSubset full(Group group);
  static GroupSubset from_ranks(Group group, std::span<const Rank> ranks);
  static GroupSubset from_words(Group group, std::vector<std::uint64_t> words);

  const Group& group() const noexcept { return group_; }
  std::uint32_t universe() const noexcept { return group_.order(); }

  bool contains(Rank r) const noexcept { return (words_[r >> 6] >> (r & 63)) & 1u; }
  void insert(Rank r) noexcept { words_[r >> 6] |= std::uint64_t{1} << (r & 63); }
  void erase(Rank r) noexcept { words_[r >> 6] &= ~(std::uint64_t{1} << (r & 63)); }
  void flip(Rank r) noexcept { words_[r >> 6] ^= std::uint64_t{1} << (r & 63); }

  std::size_t size() const noexcept;
  bool empty() const noexcept;
  bool is_full() const noexcept { return size() == universe(); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::vector<Rank> elements() const;
  std::optional<Rank> min_element() const noexcept;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(static_cast<Rank>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  bool is_subset_of(const GroupSubset& other) const;
  bool intersects(const GroupSubset& other) const;

  GroupSubset& operator|=(const GroupSubset& o);
  GroupSubset& operator&=(const GroupSubset& o);
  GroupSubset& operator^=(const GroupSubset& o);
  GroupSubset& subtract(const GroupSubset& o);
  GroupSubset complement() const;

  friend GroupSubset operator|(GroupSubset a, const GroupSubset& b) { return a |= b; }
  friend GroupSubset operator&(GroupSubset a, const GroupSubset& b) { return a &= b; }
  friend GroupSubset operator^(GroupSubset a, const GroupSubset& b) { return a ^= b; }
  friend bool operator==(const GroupSubset& a, const GroupSubset& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  void require_same_group(const GroupSubset& o) const;

  Group group_;
  std::vector<std::uint64_t> words_;
};

/// Lexicographic order on sorted element lists: at the first rank where the
/// two sets differ, the set containing that rank is smaller.
bool lex_less(const GroupSubset& a, const GroupSubset& b);

struct GroupSubsetHash {
  std::size_t operator()(const GroupSubset& s) const noexcept { return s.hash(); }
};

class Subgroup;
namespace detail {
struct SubgroupAccess;
}

/// A subset verified to be a subgroup, with a generating list.
class Subgroup {
 public:
  /// Verifies closure; throws InvalidArgument otherwise. Generators are
  /// picked greedily in rank order.
  static Subgroup from_members(GroupSubset members);

  const Group& group() const noexcept { return members_.group(); }
  const GroupSubset& members() const noexcept { return members_; }
  std::span<const Rank> generators() const noexcept { return generators_; }
  std::size_t size() const noexcept { return size_; }
  std::uint64_t index() const noexcept { return members_.universe() / size_; }
  bool contains(Rank r) const noexcept { return members_.contains(r); }

  friend bool operator==(const Subgroup& a, const Subgroup& b) noexcept {
    return a.members_ == b.members_;
  }

 private:
  friend struct detail::SubgroupAccess;
  Subgroup(GroupSubset members, std::vector<Rank> generators);

  GroupSubset members_;
  std::vector<Rank> generators_;
  std::size_t size_;
};

/// x + y stays inside for every pair and 0 is present. Checked pairwise.
bool is_subgroup(const GroupSubset& s);

/// Smallest subgroup containing gens. generators() returns gens verbatim.
Subgroup generated_subgroup(const Group& g, std::span<const Rank> gens);

/// trivial subgroup {0} and G itself.
Subgroup trivial_subgroup(const Group& g);
Subgroup whole_group(const Group& g);

/// <H, x>: the subgroup generated by H and one more element.
Subgroup extend_subgroup(const Subgroup& h, Rank x);

/// H1 ∩ H2.
Subgroup intersect(const Subgroup& a, const Subgroup& b);

/// All subgroups (optionally of index <= max_index), deduplicated, sorted by
/// size descending then lex_less. Throws CapExceeded if |G| exceeds
/// caps.enumeration_order or more than caps.max_subgroups are discovered.
std::vector<Subgroup> enumerate_subgroups(const Group& g, std::optional<std::uint64_t> max_index,
                                          const Caps& caps = Caps{});

/// Cosets of h ordered by their minimum rank.
std::vector<GroupSubset> cosets(const Subgroup& h);

/// coset_ids[r] = position of r's coset in cosets(h) order.
std::vector<std::uint32_t> coset_ids(const Subgroup& h);

/// A subgroup K with K ∩ H = {0} and |K||H| = |G| (first in
/// enumerate_subgroups order), or nullopt when none exists.
std::optional<Subgroup> find_complement(const Group& g, const Subgroup& h, const Caps& caps = Caps{});

namespace detail {
struct SubgroupAccess {
  static Subgroup make(GroupSubset members, std::vector<Rank> generators) {
    return Subgroup(std::move(members), std::move(generators));
  }
};
}  // namespace detail

}  // namespace arreg
