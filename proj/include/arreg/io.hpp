#pragma once

// JSON formats: group descriptors, set files (bits_hex canonical), pattern
// files (1-based edges), caps, graph descriptors, and report objects.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/patterns.hpp"
#include "arreg/rational.hpp"
#include "arreg/regularity.hpp"
#include "arreg/setops.hpp"
#include "arreg/vc.hpp"

namespace arreg::io {

using Json = nlohmann::json;

Json read_json_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and a rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json group_to_json(const Group& g);
Group group_from_json(const Json& j, const Caps& caps = Caps{});

/// Hex digit i holds ranks 4i..4i+3, least significant bit first.
std::string to_bits_hex(const GroupSubset& s);
GroupSubset from_bits_hex(const Group& g, const std::string& hex);

/// {"moduli": [...], "bits_hex": "..."}; reading also accepts
/// {"moduli": [...], "elements": [[coords], ...]}.
Json set_to_json(const GroupSubset& s);
GroupSubset set_from_json(const Json& j, const Caps& caps = Caps{});
/// Element lists inside another object (subgroup members, witnesses).
Json elements_to_json(const Group& g, std::span<const Rank> ranks);

/// A set file's subgroup, closure verified.
Subgroup subgroup_from_json(const Json& j, const Caps& caps = Caps{});

/// FNV-1a of the canonical bits_hex, as 16 hex digits.
std::string input_hash(const GroupSubset& s);

/// {"u": 2, "v": 2, "edges": [[1,1],[1,2],[2,2]]}.
Json pattern_to_json(const BipartitePattern& f);
BipartitePattern pattern_from_json(const Json& j);

/// Missing keys keep their defaults.
Caps caps_from_json(const Json& j);

/// {"n": 32, "edges": [[0,1], ...]} (0-based) or {"cayley_of": <set object
/// or path relative to base_dir>}.
AdjacencyOracle graph_from_json(const Json& j, const std::filesystem::path& base_dir, const Caps& caps = Caps{});

Json to_json(const VcDimension& v);
Json to_json(const SauerReport& r);
Json to_json(const PackingResult& r);
Json to_json(const AlmostPeriodSet& b);
Json to_json(const SampledVcReport& r);
Json to_json(const RateReport& r);
Json to_json(const SeparatedSampleReport& r);
Json to_json(const DoublingTrace& t);
Json to_json(const FillReport& r);
Json to_json(const Subgroup& h);
Json to_json(const RegularityCertificate& c);
Json to_json(const CertificateCheck& c);
Json to_json(const OracleReport& r);
Json to_json(const RobustOutcome& r);
Json to_json(const Group& g, const BiInducedWitness& w);
Json to_json(const TesterReport& r);
Json to_json(const CosetGoodness& c);
Json to_json(const DensifyReport& r);
Json to_json(const Group& g, const ApWitness& ap);
Json to_json(const Interval& i);

/// Header line of the scalar keys of each object, one line per object. Nested
/// values are written as compact JSON strings.
std::string flatten_csv(const Json& array_of_objects);

}  // namespace arreg::io
