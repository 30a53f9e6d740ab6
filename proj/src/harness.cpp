#include "arreg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "arreg/errors.hpp"
#include "arreg/patterns.hpp"
#include "arreg/regularity.hpp"
#include "arreg/rng.hpp"
#include "arreg/setops.hpp"
#include "arreg/stats.hpp"
#include "arreg/vc.hpp"

namespace arreg {

using io::Json;

namespace {

const char* family_name(FamilySpec::Kind k) {
  switch (k) {
    case FamilySpec::Kind::planted: return "planted";
    case FamilySpec::Kind::interval: return "interval";
    case FamilySpec::Kind::random: return "random";
    case FamilySpec::Kind::file: return "file";
  }
  return "random";
}

struct OperationName {
  Operation op;
  const char* name;
};

constexpr OperationName kOperations[] = {
    {Operation::regularize, "regularize"}, {Operation::oracle, "oracle"},   {Operation::robust, "robust"},
    {Operation::packing, "packing"},       {Operation::ball, "ball"},       {Operation::tester, "tester"},
    {Operation::density, "density"},       {Operation::kneser, "kneser"},
};

const char* operation_name(Operation op) {
  for (const auto& e : kOperations) {
    if (e.op == op) return e.name;
  }
  return "regularize";
}

Operation operation_from_name(const std::string& s) {
  for (const auto& e : kOperations) {
    if (s == e.name) return e.op;
  }
  throw InvalidArgument("experiment: unknown operation \"" + s + "\"");
}

bool draw(Rng& rng, const Rational& p) {
  return rng.below(static_cast<std::uint64_t>(p.den())) < static_cast<std::uint64_t>(p.num());
}

std::string sweep_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::uint64_t parse_count(const std::string& s) {
  const Rational r = Rational::parse(s);
  if (r.den() != 1 || r.num() < 1) throw InvalidArgument("expected a positive integer, got \"" + s + "\"");
  return static_cast<std::uint64_t>(r.num());
}

}  // namespace

FamilySpec family_from_json(const Json& j, const std::filesystem::path& base_dir) {
  FamilySpec f;
  const std::string kind = j.value("kind", std::string("random"));
  if (kind == "planted") {
    f.kind = FamilySpec::Kind::planted;
    f.subgroup_index = j.value("index", std::uint64_t{2});
    f.coset_count = j.value("cosets", std::uint64_t{1});
    if (j.contains("noise")) f.noise = io::rational_from_json(j["noise"]);
  } else if (kind == "interval") {
    f.kind = FamilySpec::Kind::interval;
    f.interval_start = j.value("start", Rank{1});
    if (j.contains("length")) f.interval_length = j["length"].get<std::uint32_t>();
  } else if (kind == "random") {
    f.kind = FamilySpec::Kind::random;
    if (j.contains("density")) f.density = io::rational_from_json(j["density"]);
  } else if (kind == "file") {
    f.kind = FamilySpec::Kind::file;
    f.path = base_dir / j.at("path").get<std::string>();
  } else {
    throw InvalidArgument("family: unknown kind \"" + kind + "\"");
  }
  if (f.noise < Rational(0) || f.noise > Rational(1) || f.density < Rational(0) || f.density > Rational(1)) {
    throw InvalidArgument("family: probabilities must lie in [0, 1]");
  }
  return f;
}

Json family_to_json(const FamilySpec& f) {
  Json j{{"kind", family_name(f.kind)}};
  switch (f.kind) {
    case FamilySpec::Kind::planted:
      j["index"] = f.subgroup_index;
      j["cosets"] = f.coset_count;
      j["noise"] = io::to_json(f.noise);
      break;
    case FamilySpec::Kind::interval:
      j["start"] = f.interval_start;
      if (f.interval_length) j["length"] = *f.interval_length;
      break;
    case FamilySpec::Kind::random: j["density"] = io::to_json(f.density); break;
    case FamilySpec::Kind::file: j["path"] = f.path.string(); break;
  }
  return j;
}

Subgroup random_subgroup_of_index(const Group& g, std::uint64_t index, std::uint64_t seed) {
  const std::uint32_t n = g.order();
  if (index == 0 || n % index != 0) throw InvalidArgument("planted: subgroup index must divide |G|");
  Rng rng = Rng::derive(seed, "planted-subgroup");
  Subgroup h = trivial_subgroup(g);
  for (int attempt = 0; attempt < 4096 && h.index() > index; ++attempt) {
    Subgroup next = extend_subgroup(h, static_cast<Rank>(rng.below(n)));
    if (next.index() % index == 0) h = std::move(next);
  }
  if (h.index() != index) throw InvalidArgument("planted: no subgroup of index " + std::to_string(index) + " reached");
  return h;
}

GroupSubset generate_family(const Group& g, const FamilySpec& spec, std::uint64_t seed, const Caps& caps) {
  const std::uint32_t n = g.order();
  switch (spec.kind) {
    case FamilySpec::Kind::planted: {
      const Subgroup h = random_subgroup_of_index(g, spec.subgroup_index, seed);
      const auto cs = cosets(h);
      if (spec.coset_count > cs.size()) throw InvalidArgument("planted: more cosets requested than exist");
      Rng pick = Rng::derive(seed, "planted-cosets");
      GroupSubset a(g);
      for (const auto c : pick.sample_without_replacement(static_cast<std::uint32_t>(cs.size()),
                                                          static_cast<std::uint32_t>(spec.coset_count))) {
        a |= cs[c];
      }
      if (spec.noise > Rational(0)) {
        Rng noise = Rng::derive(seed, "planted-noise");
        for (Rank r = 0; r < n; ++r) {
          if (draw(noise, spec.noise)) a.flip(r);
        }
      }
      return a;
    }
    case FamilySpec::Kind::interval: {
      const std::uint32_t len = spec.interval_length.value_or(n / 2);
      if (static_cast<std::uint64_t>(spec.interval_start) + len > n) throw InvalidArgument("interval: runs past |G|");
      GroupSubset a(g);
      for (std::uint32_t i = 0; i < len; ++i) a.insert(spec.interval_start + i);
      return a;
    }
    case FamilySpec::Kind::random: {
      Rng rng = Rng::derive(seed, "random-family");
      GroupSubset a(g);
      for (Rank r = 0; r < n; ++r) {
        if (draw(rng, spec.density)) a.insert(r);
      }
      return a;
    }
    case FamilySpec::Kind::file: {
      GroupSubset a = io::set_from_json(io::read_json_file(spec.path), caps);
      if (!(a.group() == g)) throw GroupMismatch("family file: group differs from the experiment group");
      return a;
    }
  }
  throw InvalidArgument("family: unknown kind");
}

ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  if (j.contains("caps")) c.caps = io::caps_from_json(j["caps"]);
  c.name = j.value("name", c.name);
  c.group = io::group_from_json(j.at("group"), c.caps);
  if (j.contains("family")) c.family = family_from_json(j["family"], base_dir);
  c.operation = operation_from_name(j.value("operation", std::string("regularize")));
  for (const auto& v : j.value("sweep", Json::array())) c.sweep.push_back(sweep_text(v));
  c.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  c.params = j.value("params", Json::object());
  if (j.contains("output")) {
    const Json& o = j["output"];
    if (o.contains("path")) c.output = base_dir / o["path"].get<std::string>();
    c.format = o.value("format", c.format);
  }
  if (c.format != "json" && c.format != "csv") throw InvalidArgument("output.format must be json or csv");
  c.timing = j.value("timing", false);
  return c;
}

Json to_json(const ResultRow& r) {
  Json j{{"run_id", r.run_id},
         {"sweep_index", r.sweep_index},
         {"seed", r.seed},
         {"operation", r.operation},
         {"parameter", r.parameter},
         {"input_hash", r.input_hash},
         {"input", r.input},
         {"measured", r.measured},
         {"status", r.status}};
  if (!r.message.empty()) j["message"] = r.message;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j;
}

namespace {

Json measure(const ExperimentConfig& c, const GroupSubset& a, const std::string& value, std::uint64_t seed) {
  const Json& p = c.params;
  switch (c.operation) {
    case Operation::regularize: {
      PipelineConfig pc;
      pc.caps = c.caps;
      pc.max_sweeps = p.value("max_sweeps", pc.max_sweeps);
      if (p.contains("growth")) pc.growth = p["growth"].get<double>();
      const Rational eps = Rational::parse(value);
      const RegularityCertificate cert = regularize(a, eps, pc);
      Json m{{"index", cert.index},
             {"error", io::to_json(cert.achieved_error)},
             {"error_value", cert.achieved_error.to_double()},
             {"delta_used", io::to_json(cert.delta_used)},
             {"ell", cert.trace.ell},
             {"degenerate", cert.degenerate},
             {"ball_size", cert.ball_size},
             {"subgroup_ratio", cert.subgroup_ratio},
             {"verified", verify_certificate(cert).ok()}};
      if (p.value("with_oracle", false)) {
        const auto rep = oracle_best_subgroup(a, eps, p.value("max_index", std::uint64_t{a.universe()}), c.caps);
        m["oracle_min_index"] = rep.min_index ? Json(*rep.min_index) : Json(nullptr);
      }
      return m;
    }
    case Operation::oracle: {
      const Rational eps = Rational::parse(value);
      const auto rep = oracle_best_subgroup(a, eps, p.value("max_index", std::uint64_t{a.universe()}), c.caps);
      Json m{{"subgroups_scanned", rep.subgroups_scanned}};
      m["index"] = rep.min_index ? Json(*rep.min_index) : Json(nullptr);
      m["error"] = rep.best_error ? io::to_json(*rep.best_error) : Json(nullptr);
      return m;
    }
    case Operation::robust: {
      RobustConfig rc;
      rc.c = p.value("c", rc.c);
      rc.trials = p.value("trials", rc.trials);
      rc.pipeline.caps = c.caps;
      if (p.contains("delta")) rc.delta = io::rational_from_json(p["delta"]);
      const RobustOutcome out = robust_pipeline(a, Rational::parse(value), p.value("d", 1), rc, seed);
      Json m{{"outcome", out.kind == RobustOutcome::Kind::sampled_vc ? "a" : "b"},
             {"m", out.m},
             {"ball_size", out.ball_size},
             {"threshold", out.threshold},
             {"fell_back", out.fell_back}};
      if (out.sampled) m["fraction"] = out.sampled->frequency;
      if (out.certificate) {
        m["index"] = out.certificate->index;
        m["error"] = io::to_json(out.certificate->achieved_error);
      }
      return m;
    }
    case Operation::packing: {
      PackingOptions opts;
      if (p.contains("vc_limit")) opts.vc_limit = p["vc_limit"].get<int>();
      const PackingResult r = greedy_packing(a, Rational::parse(value), opts, c.caps);
      return Json{{"centers", r.centers.size()},
                  {"vcdim", r.vc.value},
                  {"vcdim_is_lower_bound", r.vc.exceeds_limit},
                  {"certified_separation", r.certified_separation},
                  {"haussler_holds", r.haussler_holds}};
    }
    case Operation::ball: {
      const AlmostPeriodSet b = almost_periods(a, Rational::parse(value));
      return Json{{"size", b.members.size()},
                  {"fraction", static_cast<double>(b.members.size()) / static_cast<double>(a.universe())}};
    }
    case Operation::tester:
    case Operation::density: {
      const BipartitePattern f = io::pattern_from_json(p.at("pattern"));
      Json m;
      if (c.operation == Operation::tester) {
        const TesterReport r = sample_tester(a, f, parse_count(value), seed);
        m = Json{{"fraction", r.fraction},
                 {"injective_fraction", r.injective_fraction},
                 {"wilson3", io::to_json(r.wilson3)},
                 {"decision", r.decision ? "YES" : "NO"}};
      }
      const Rational d = exhaustive_density(a, f, c.caps);
      m["density"] = io::to_json(d);
      m["density_value"] = d.to_double();
      return m;
    }
    case Operation::kneser: {
      const FillReport r = kneser_fill_check(a, parse_count(value));
      return io::to_json(r);
    }
  }
  throw InvalidArgument("experiment: unsupported operation");
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < config.sweep.size(); ++i) {
    for (const std::uint64_t seed : config.seeds) {
      ResultRow row;
      row.run_id = config.name + "/" + std::to_string(i) + "/" + std::to_string(seed);
      row.sweep_index = i;
      row.seed = seed;
      row.operation = operation_name(config.operation);
      row.parameter = config.sweep[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const GroupSubset a = generate_family(config.group, config.family, seed, config.caps);
        row.input = io::set_to_json(a);
        row.input_hash = io::input_hash(a);
        row.measured = measure(config, a, config.sweep[i], seed);
      } catch (const CapExceeded& e) {
        row.status = "cap_exceeded";
        row.message = e.what();
      } catch (const InvalidArgument& e) {
        row.status = "invalid_argument";
        row.message = e.what();
      } catch (const PreconditionViolated& e) {
        row.status = "precondition";
        row.message = e.what();
      } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
      }
      if (config.timing) {
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string rows_to_json_text(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  Json doc{{"schema", "arreg.results.v1"},
           {"name", config.name},
           {"operation", operation_name(config.operation)},
           {"family", family_to_json(config.family)},
           {"rows", arr}};
  return doc.dump(2) + "\n";
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "schema,run_id,sweep_index,seed,operation,parameter,input_hash,status,index,error,density,fraction,measured,"
         "wall_ms\n";
  auto cell = [](const Json& m, const char* key) -> std::string {
    if (!m.contains(key) || m[key].is_null()) return "";
    return m[key].is_string() ? m[key].get<std::string>() : m[key].dump();
  };
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (const char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : rows) {
    out << kCsvSchema << ',' << quote(r.run_id) << ',' << r.sweep_index << ',' << r.seed << ',' << r.operation << ','
        << quote(r.parameter) << ',' << r.input_hash << ',' << r.status << ',' << cell(r.measured, "index") << ','
        << cell(r.measured, "error") << ',' << cell(r.measured, "density") << ',' << cell(r.measured, "fraction") << ','
        << quote(r.measured.dump()) << ',';
    if (r.wall_ms) out << *r.wall_ms;
    out << '\n';
  }
  return out.str();
}

void persist_rows(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
  if (!config.output) return;
  io::atomic_write(*config.output, config.format == "csv" ? rows_to_csv(rows) : rows_to_json_text(config, rows));
}

std::string summary_table(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-10s %-16s %-8s %-10s\n", "run", "parameter", "status", "index", "error");
  out << line;
  auto field = [](const Json& m, const char* key) -> std::string {
    if (!m.contains(key) || m[key].is_null()) return "-";
    return m[key].is_string() ? m[key].get<std::string>() : m[key].dump();
  };
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-28s %-10s %-16s %-8s %-10s\n", r.run_id.c_str(), r.parameter.c_str(),
                  r.status.c_str(), field(r.measured, "index").c_str(), field(r.measured, "error").c_str());
    out << line;
  }
  return out.str();
}

std::optional<double> index_epsilon_slope(const std::vector<ResultRow>& rows) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : rows) {
    if (r.operation != "regularize" || r.status != "ok" || r.measured.value("degenerate", true)) continue;
    x.push_back(std::log(1.0 / Rational::parse(r.parameter).to_double()));
    y.push_back(std::log(static_cast<double>(r.measured.at("index").get<std::uint64_t>())));
  }
  if (x.size() < 2 || std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return std::nullopt;
  return ols_slope(x, y);
}

}  // namespace arreg
