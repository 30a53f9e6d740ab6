#pragma once

#include <initializer_list>
#include <vector>

#include "arreg/group.hpp"
#include "arreg/rng.hpp"

namespace testing_support {

inline arreg::Group gr(std::initializer_list<std::uint32_t> moduli) { return arreg::Group(std::vector<std::uint32_t>(moduli)); }

inline arreg::GroupSubset set_of(const arreg::Group& g, std::initializer_list<arreg::Rank> ranks) {
  return arreg::GroupSubset::from_ranks(g, std::vector<arreg::Rank>(ranks));
}

inline arreg::GroupSubset from_mask(const arreg::Group& g, std::uint64_t mask) {
  arreg::GroupSubset s(g);
  for (arreg::Rank r = 0; r < g.order(); ++r) {
    if ((mask >> r) & 1u) s.insert(r);
  }
  return s;
}

/// Each element kept with probability num/den.
inline arreg::GroupSubset random_subset(const arreg::Group& g, arreg::Rng& rng, std::uint64_t num = 1,
                                        std::uint64_t den = 2) {
  arreg::GroupSubset s(g);
  for (arreg::Rank r = 0; r < g.order(); ++r) {
    if (rng.below(den) < num) s.insert(r);
  }
  return s;
}

/// All groups of order 2..max_order up to isomorphism.
inline std::vector<arreg::Group> small_groups(std::uint32_t max_order) {
  std::vector<arreg::Group> out;
  for (std::uint32_t n = 2; n <= max_order; ++n) {
    for (auto& m : arreg::abelian_group_moduli(n)) out.emplace_back(m);
  }
  return out;
}

}  // namespace testing_support
