#pragma once

#include <cstddef>
#include <cstdint>

namespace arreg {

/// Resource limits shared by every search. Exceeding one raises CapExceeded.
struct Caps {
  unsigned rank_bits = 20;                     // |G| <= 2^rank_bits
  std::size_t enumeration_order = 4096;        // |G| cap for subgroup enumeration
  std::size_t max_subgroups = 1u << 20;        // distinct subgroups kept by one enumeration
  std::size_t vc_ground = 16384;               // |ground| cap for shattering search
  std::uint64_t search_nodes = 1'000'000'000;  // backtracking node visits
  std::size_t distance_order = 16;             // |G| cap for exact distance_to_free
  std::uint64_t density_maps = 10'000'000'000; // |G|^{|V(F)|} cap for exhaustive_density
};

}  // namespace arreg
