#pragma once

// Coset-majority rounding and the constructive regularity pipeline:
// almost-periods, iterated doubling, subgroup extraction from 2ℓB - 2ℓB,
// rounding. Certificates are re-verified from raw bitsets.

#include <cstdint>
#include <optional>
#include <vector>

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/rational.hpp"
#include "arreg/setops.hpp"
#include "arreg/vc.hpp"

namespace arreg {

/// Union of the cosets y + H with |A ∩ (y + H)| >= |H|/2.
GroupSubset coset_round(const GroupSubset& a, const Subgroup& h);

/// Exact |A Δ S| / |G|.
Rational relative_error(const GroupSubset& a, const GroupSubset& s);

struct RoundingReport {
  std::size_t symdiff = 0;            // |A Δ coset_round(A, H)|
  std::uint64_t profile_sum = 0;      // sum_{x ∈ H} |A Δ (A + x)|
  std::size_t subgroup_size = 0;
  bool holds = false;                 // symdiff * |H| <= profile_sum
};

RoundingReport rounding_error_bound_check(const GroupSubset& a, const Subgroup& h);

struct PipelineConfig {
  /// Explicit δ values, tried in order. Empty: ε/2, ε/4, ... while δ|G| >= 1,
  /// then one final δ < 1/|G| (where B_δ is the stabilizer of A).
  std::vector<Rational> delta_schedule;
  std::size_t max_sweeps = 64;
  std::optional<double> growth;       // overrides K(δ)
  Caps caps;
};

struct SweepRecord {
  Rational delta;
  std::size_t ball_size = 0;
  std::uint64_t ell = 1;
  std::uint64_t index = 0;
  Rational error;
  bool success = false;
};

struct RegularityCertificate {
  GroupSubset input;
  Rational epsilon;
  Rational delta_used;
  DoublingTrace trace;
  Subgroup subgroup;
  GroupSubset rounded;
  Rational achieved_error;
  std::uint64_t index = 1;
  bool degenerate = false;            // fallback H = {0}, S = A
  std::size_t ball_size = 0;          // |B_δ|
  double subgroup_ratio = 0.0;        // |H| / |ℓB|
  std::vector<SweepRecord> sweeps;
};

struct CertificateCheck {
  bool closure = false;
  bool union_of_cosets = false;
  bool error_matches = false;
  bool period_bound = false;          // |A Δ (A+x)| <= 4ℓδ|G| on H
  bool within_epsilon = false;
  bool ok() const noexcept { return closure && union_of_cosets && error_matches && period_bound && within_epsilon; }
};

/// Independent re-verification. The period bound is vacuous for degenerate
/// certificates.
CertificateCheck verify_certificate(const RegularityCertificate& cert);

/// Requires 0 < ε < 1. Returns the successful sweep of smallest index (ties:
/// lex-smallest subgroup, then earliest sweep), or the degenerate
/// certificate when no sweep reaches ε.
RegularityCertificate regularize(const GroupSubset& a, Rational epsilon, const PipelineConfig& config = {});

struct FrontierPoint {
  std::uint64_t index = 1;
  Rational best_error;                // over subgroups of exactly this index
  Rational cumulative_error;          // over subgroups of index <= this one
};

struct OracleReport {
  Rational epsilon;
  std::uint64_t max_index = 0;
  std::size_t subgroups_scanned = 0;
  std::optional<std::uint64_t> min_index;  // smallest index with error <= ε
  std::optional<Subgroup> best;            // lex-smallest subgroup at min_index
  std::optional<Rational> best_error;
  std::vector<FrontierPoint> frontier;     // index ascending
};

OracleReport oracle_best_subgroup(const GroupSubset& a, Rational epsilon, std::uint64_t max_index,
                                  const Caps& caps = Caps{});

/// Same scan over a precomputed enumerate_subgroups() list.
OracleReport oracle_best_subgroup(const GroupSubset& a, Rational epsilon, std::uint64_t max_index,
                                  const std::vector<Subgroup>& subgroups);

struct RobustConfig {
  double c = 8.0;                     // m = ceil(c δ^{-1} ln(1/δ))
  std::uint64_t trials = 100;
  double sample_floor = 0.9;          // outcome (a) needs this empirical frequency
  std::optional<Rational> delta;      // default ε/2
  PipelineConfig pipeline;
};

struct RobustOutcome {
  enum class Kind { sampled_vc, certificate };
  Kind kind = Kind::certificate;
  Rational delta;
  double c = 8.0;
  std::uint64_t m = 0;
  std::size_t ball_size = 0;
  double threshold = 0.0;             // |G| / (12 m^d)
  bool ball_large = false;            // |B| >= threshold
  bool fell_back = false;             // ball small, but sampling stayed below the floor
  std::size_t x_size = 0;
  std::size_t y_size = 0;
  std::optional<SampledVcReport> sampled;
  std::optional<RegularityCertificate> certificate;
};

/// Requires 0 < ε < 1, d >= 1 and δ < 1/2.
RobustOutcome robust_pipeline(const GroupSubset& a, Rational epsilon, int d, const RobustConfig& config,
                              std::uint64_t seed);

}  // namespace arreg
