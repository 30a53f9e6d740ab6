#include "arreg/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "arreg/errors.hpp"
#include "arreg/rng.hpp"

namespace arreg::io {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return Rational::parse(j.dump());
  throw InvalidArgument("expected a rational (\"p/q\", integer, or decimal)");
}

Json group_to_json(const Group& g) {
  return Json{{"moduli", std::vector<std::uint32_t>(g.moduli().begin(), g.moduli().end())}};
}

Group group_from_json(const Json& j, const Caps& caps) {
  if (!j.is_object() || !j.contains("moduli") || !j["moduli"].is_array()) {
    throw InvalidArgument("group: expected {\"moduli\": [...]}");
  }
  return Group(j["moduli"].get<std::vector<std::uint32_t>>(), caps);
}

std::string to_bits_hex(const GroupSubset& s) {
  static const char* digits = "0123456789abcdef";
  const std::uint32_t n = s.universe();
  std::string out((n + 3) / 4, '0');
  for (std::uint32_t i = 0; i < out.size(); ++i) {
    unsigned nib = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint32_t r = 4 * i + b;
      if (r < n && s.contains(r)) nib |= 1u << b;
    }
    out[i] = digits[nib];
  }
  return out;
}

GroupSubset from_bits_hex(const Group& g, const std::string& hex) {
  const std::uint32_t n = g.order();
  if (hex.size() != (n + 3) / 4) throw InvalidArgument("bits_hex: expected " + std::to_string((n + 3) / 4) + " digits");
  GroupSubset s(g);
  for (std::uint32_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw InvalidArgument("bits_hex: invalid digit");
    }
    for (unsigned b = 0; b < 4; ++b) {
      if (!((v >> b) & 1u)) continue;
      const std::uint32_t r = 4 * i + b;
      if (r >= n) throw InvalidArgument("bits_hex: bit set beyond |G|");
      s.insert(r);
    }
  }
  return s;
}

Json set_to_json(const GroupSubset& s) {
  Json j = group_to_json(s.group());
  j["bits_hex"] = to_bits_hex(s);
  return j;
}

Json elements_to_json(const Group& g, std::span<const Rank> ranks) {
  Json arr = Json::array();
  for (const Rank r : ranks) arr.push_back(g.coordinates(r));
  return arr;
}

namespace {
Rank element_from_json(const Group& g, const Json& e) {
  if (e.is_array()) return g.from_coordinates(e.get<std::vector<std::uint32_t>>());
  if (e.is_string()) return g.parse_element(e.get<std::string>());
  throw InvalidArgument("element: expected a coordinate array");
}
}  // namespace

GroupSubset set_from_json(const Json& j, const Caps& caps) {
  const Group g = group_from_json(j, caps);
  if (j.contains("bits_hex")) return from_bits_hex(g, j["bits_hex"].get<std::string>());
  if (j.contains("elements")) {
    GroupSubset s(g);
    for (const auto& e : j["elements"]) s.insert(element_from_json(g, e));
    return s;
  }
  throw InvalidArgument("set: expected \"bits_hex\" or \"elements\"");
}

Subgroup subgroup_from_json(const Json& j, const Caps& caps) { return Subgroup::from_members(set_from_json(j, caps)); }

std::string input_hash(const GroupSubset& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_bits_hex(s))));
  return buf;
}

Json pattern_to_json(const BipartitePattern& f) {
  Json edges = Json::array();
  for (const auto& [u, v] : f.edges()) edges.push_back({u + 1, v + 1});
  return Json{{"u", f.u_count()}, {"v", f.v_count()}, {"edges", edges}};
}

BipartitePattern pattern_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("u") || !j.contains("v")) throw InvalidArgument("pattern: expected u, v, edges");
  std::vector<BipartitePattern::Edge> edges;
  for (const auto& e : j.value("edges", Json::array())) {
    const auto p = e.get<std::vector<std::int64_t>>();
    if (p.size() != 2 || p[0] < 1 || p[1] < 1) throw InvalidArgument("pattern: edges are 1-based [u, v] pairs");
    edges.emplace_back(static_cast<std::uint32_t>(p[0] - 1), static_cast<std::uint32_t>(p[1] - 1));
  }
  return BipartitePattern(j["u"].get<std::uint32_t>(), j["v"].get<std::uint32_t>(), std::move(edges));
}

Caps caps_from_json(const Json& j) {
  Caps c;
  c.rank_bits = j.value("rank_bits", c.rank_bits);
  c.enumeration_order = j.value("enumeration_order", c.enumeration_order);
  c.max_subgroups = j.value("max_subgroups", c.max_subgroups);
  c.vc_ground = j.value("vc_ground", c.vc_ground);
  c.search_nodes = j.value("search_nodes", c.search_nodes);
  c.distance_order = j.value("distance_order", c.distance_order);
  c.density_maps = j.value("density_maps", c.density_maps);
  return c;
}

AdjacencyOracle graph_from_json(const Json& j, const std::filesystem::path& base_dir, const Caps& caps) {
  if (j.contains("cayley_of")) {
    const Json& src = j["cayley_of"];
    if (src.is_string()) return AdjacencyOracle::cayley(set_from_json(read_json_file(base_dir / src.get<std::string>()), caps));
    return AdjacencyOracle::cayley(set_from_json(src, caps));
  }
  if (!j.contains("n")) throw InvalidArgument("graph: expected {\"n\", \"edges\"} or {\"cayley_of\"}");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& e : j.value("edges", Json::array())) {
    edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
  }
  return AdjacencyOracle::from_edges(j["n"].get<std::uint32_t>(), edges);
}

Json to_json(const Interval& i) { return Json{{"lo", i.lo}, {"hi", i.hi}}; }

Json to_json(const VcDimension& v) {
  return Json{{"value", v.value}, {"exceeds_limit", v.exceeds_limit}, {"shattered", v.shattered}};
}

Json to_json(const SauerReport& r) {
  return Json{{"trace_count", r.trace_count},       {"ground_size", r.ground_size},
              {"d", r.d},                           {"d_is_lower_bound", r.d_is_lower_bound},
              {"binomial_sum", r.binomial_sum},     {"polynomial_bound", r.polynomial_bound},
              {"binomial_holds", r.binomial_holds}, {"polynomial_applies", r.polynomial_applies},
              {"polynomial_holds", r.polynomial_holds}, {"holds", r.holds()}};
}

Json to_json(const PackingResult& r) {
  return Json{{"delta", to_json(r.delta)},
              {"centers", r.centers},
              {"center_count", r.centers.size()},
              {"certified_separation", r.certified_separation},
              {"vc", to_json(r.vc)},
              {"haussler_holds", r.haussler_holds}};
}

Json to_json(const AlmostPeriodSet& b) {
  return Json{{"delta", to_json(b.delta)}, {"size", b.members.size()}, {"members", set_to_json(b.members)}};
}

Json to_json(const SampledVcReport& r) {
  return Json{{"x_size", r.x_size},       {"y_size", r.y_size},       {"d", r.d},
              {"trials", r.trials},       {"exceed_count", r.exceed_count},
              {"frequency", r.frequency}, {"wilson95", to_json(r.wilson95)}};
}

Json to_json(const RateReport& r) {
  return Json{{"n", r.n},       {"k", r.k},         {"trials", r.trials}, {"successes", r.successes},
              {"rate", r.rate}, {"bound", r.bound}, {"wilson3", to_json(r.wilson3)}, {"holds", r.holds}};
}

Json to_json(const SeparatedSampleReport& r) {
  return Json{{"family_size", r.family_size},   {"trials", r.trials},
              {"low_vc_count", r.low_vc_count}, {"probability", r.probability},
              {"premise_threshold", r.premise_threshold}, {"size_bound", r.size_bound},
              {"premise", r.premise},           {"conclusion", r.conclusion},
              {"holds", r.holds()}};
}

Json to_json(const DoublingTrace& t) {
  return Json{{"growth", t.growth}, {"ell", t.ell}, {"sizes", t.sizes}};
}

Json to_json(const FillReport& r) {
  return Json{{"t", r.t},
              {"generates", r.generates},
              {"differences_generate", r.differences_generate},
              {"large_enough", r.large_enough},
              {"sizes", r.sizes},
              {"filled", r.filled},
              {"holds", r.holds()},
              {"affine_holds", r.affine_holds()}};
}

Json to_json(const Subgroup& h) {
  const Group& g = h.group();
  return Json{{"size", h.size()},
              {"index", h.index()},
              {"generators", elements_to_json(g, h.generators())},
              {"members", set_to_json(h.members())}};
}

Json to_json(const RegularityCertificate& c) {
  Json sweeps = Json::array();
  for (const auto& s : c.sweeps) {
    sweeps.push_back(Json{{"delta", to_json(s.delta)},
                          {"ball_size", s.ball_size},
                          {"ell", s.ell},
                          {"index", s.index},
                          {"error", to_json(s.error)},
                          {"success", s.success}});
  }
  return Json{{"input", set_to_json(c.input)},
              {"epsilon", to_json(c.epsilon)},
              {"delta_used", to_json(c.delta_used)},
              {"trace", to_json(c.trace)},
              {"subgroup", to_json(c.subgroup)},
              {"rounded", set_to_json(c.rounded)},
              {"achieved_error", to_json(c.achieved_error)},
              {"index", c.index},
              {"degenerate", c.degenerate},
              {"ball_size", c.ball_size},
              {"subgroup_ratio", c.subgroup_ratio},
              {"tie_rule", "coset included when |A ∩ coset| >= |H|/2"},
              {"sweeps", sweeps}};
}

Json to_json(const CertificateCheck& c) {
  return Json{{"closure", c.closure},
              {"union_of_cosets", c.union_of_cosets},
              {"error_matches", c.error_matches},
              {"period_bound", c.period_bound},
              {"within_epsilon", c.within_epsilon},
              {"ok", c.ok()}};
}

Json to_json(const OracleReport& r) {
  Json frontier = Json::array();
  for (const auto& p : r.frontier) {
    frontier.push_back(Json{{"index", p.index},
                            {"best_error", to_json(p.best_error)},
                            {"cumulative_error", to_json(p.cumulative_error)}});
  }
  Json j{{"epsilon", to_json(r.epsilon)},
         {"max_index", r.max_index},
         {"subgroups_scanned", r.subgroups_scanned},
         {"frontier", frontier}};
  j["min_index"] = r.min_index ? Json(*r.min_index) : Json(nullptr);
  j["best_error"] = r.best_error ? to_json(*r.best_error) : Json(nullptr);
  j["best"] = r.best ? to_json(*r.best) : Json(nullptr);
  return j;
}

Json to_json(const RobustOutcome& r) {
  Json j{{"outcome", r.kind == RobustOutcome::Kind::sampled_vc ? "a" : "b"},
         {"delta", to_json(r.delta)},
         {"c", r.c},
         {"m", r.m},
         {"ball_size", r.ball_size},
         {"threshold", r.threshold},
         {"ball_large", r.ball_large},
         {"fell_back", r.fell_back},
         {"x_size", r.x_size},
         {"y_size", r.y_size}};
  j["sampled"] = r.sampled ? to_json(*r.sampled) : Json(nullptr);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  return j;
}

Json to_json(const Group& g, const BiInducedWitness& w) {
  return Json{{"phi_u", elements_to_json(g, w.phi_u)},
              {"phi_v", elements_to_json(g, w.phi_v)},
              {"injective_u", w.injective_u},
              {"injective_v", w.injective_v}};
}

Json to_json(const TesterReport& r) {
  return Json{{"samples", r.samples},
              {"bi_inducing", r.bi_inducing},
              {"injective_bi_inducing", r.injective_bi_inducing},
              {"fraction", r.fraction},
              {"injective_fraction", r.injective_fraction},
              {"wilson3", to_json(r.wilson3)},
              {"decision", r.decision ? "YES" : "NO"}};
}

Json to_json(const CosetGoodness& c) {
  std::vector<int> good(c.good.begin(), c.good.end());
  return Json{{"subgroup", to_json(c.subgroup)},
              {"eta", to_json(c.eta)},
              {"boundary", "inclusive"},
              {"good", good},
              {"bad_fraction", to_json(c.bad_fraction)}};
}

Json to_json(const DensifyReport& r) {
  return Json{{"eta", to_json(r.eta)},  {"samples", r.samples},
              {"successes", r.successes}, {"fraction", r.fraction},
              {"wilson3", to_json(r.wilson3)}, {"holds", r.holds}};
}

Json to_json(const Group& g, const ApWitness& ap) {
  Json terms = Json::array();
  Rank t = ap.start;
  for (std::uint32_t s = 0; s < 2 * ap.k; ++s) {
    terms.push_back(g.coordinates(t));
    t = g.add(t, ap.step);
  }
  return Json{{"start", g.coordinates(ap.start)}, {"step", g.coordinates(ap.step)}, {"k", ap.k}, {"terms", terms}};
}

namespace {
std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}
}  // namespace

std::string flatten_csv(const Json& rows) {
  std::vector<std::string> keys;
  std::set<std::string> seen;
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.items()) {
      if (seen.insert(k).second) keys.push_back(k);
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out << ',';
      if (row.contains(keys[i]) && !row[keys[i]].is_null()) out << csv_cell(row[keys[i]]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace arreg::io
