// Command-line front end. Every subcommand prints one JSON report (or a CSV
// projection) on stdout.
//
// Exit codes: 0 ok, 1 error, 2 degenerate certificate, 3 robust outcome (a),
// 4 cap exceeded.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "arreg/errors.hpp"
#include "arreg/harness.hpp"
#include "arreg/io.hpp"
#include "arreg/patterns.hpp"
#include "arreg/regularity.hpp"
#include "arreg/setops.hpp"
#include "arreg/vc.hpp"

namespace {

using arreg::io::Json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kDegenerate = 2;
constexpr int kRobustA = 3;
constexpr int kCap = 4;

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string caps_path;
  arreg::Caps caps;
};

void emit(const Globals& g, const Json& report) {
  if (g.format == "csv") {
    Json rows = Json::array();
    Json flat = Json::object();
    for (const auto& [k, v] : report.items()) flat[k] = v;
    rows.push_back(flat);
    std::cout << arreg::io::flatten_csv(rows);
  } else {
    std::cout << report.dump(2) << '\n';
  }
}

arreg::GroupSubset load_set(const Globals& g, const std::string& path) {
  return arreg::io::set_from_json(arreg::io::read_json_file(path), g.caps);
}

arreg::BipartitePattern load_pattern(const std::string& path) {
  return arreg::io::pattern_from_json(arreg::io::read_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic regularity and bi-induced pattern toolkit for finite abelian groups"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed for all random streams");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--caps", g.caps_path, "JSON file overriding resource caps");

  std::string set_path;
  std::string pattern_path;
  std::string delta_text;
  std::string eps_text;
  int int_param = 0;
  std::optional<int> max_d;
  std::optional<std::uint64_t> max_index;
  std::optional<int> robust_d;
  double c_const = 8.0;
  std::uint64_t trials = 100;
  std::uint64_t samples = 10000;
  std::string subgroup_path;
  std::string config_path;
  std::string out_path;
  bool non_injective = false;

  auto add_set = [&](CLI::App* sub) { sub->add_option("--set", set_path, "Set file (JSON)")->required(); };
  auto add_pattern = [&](CLI::App* sub) {
    sub->add_option("--pattern", pattern_path, "Pattern file (JSON, 1-based edges)")->required();
  };

  auto* vcdim = app.add_subcommand("vcdim", "Exact VC dimension of the translates of A");
  add_set(vcdim);
  vcdim->add_option("--max-d", max_d, "Stop once a set of size max-d + 1 is shattered");

  auto* ball = app.add_subcommand("ball", "Almost-period set B_delta(A)");
  add_set(ball);
  ball->add_option("--delta", delta_text, "delta in (0, 1]")->required();

  auto* pack = app.add_subcommand("pack", "Greedy maximal delta-separated translate family");
  add_set(pack);
  pack->add_option("--delta", delta_text, "delta in (0, 1]")->required();
  pack->add_option("--max-d", max_d, "Threshold query for the VC dimension");

  auto* reg = app.add_subcommand("regularize", "Regularity certificate for A at error eps");
  add_set(reg);
  reg->add_option("--eps", eps_text, "epsilon in (0, 1)")->required();
  reg->add_option("--max-index", max_index, "Also run the subgroup oracle up to this index");
  reg->add_option("--robust", robust_d, "Run the robust dichotomy with this d instead");
  reg->add_option("--c", c_const, "Constant C in m = C log(1/delta) / delta");
  reg->add_option("--trials", trials, "Sampling trials for the robust test");

  auto* oracle = app.add_subcommand("oracle-best-subgroup", "Smallest-index subgroup whose rounding meets eps");
  add_set(oracle);
  oracle->add_option("--eps", eps_text, "epsilon")->required();
  oracle->add_option("--max-index", max_index, "Largest index scanned");

  auto* robust = app.add_subcommand("robust", "Robust dichotomy: sampled VC witness or certificate");
  add_set(robust);
  robust->add_option("--eps", eps_text, "epsilon in (0, 1)")->required();
  robust->add_option("--d", int_param, "VC threshold d")->required();
  robust->add_option("--c", c_const, "Constant C in m = C log(1/delta) / delta");
  robust->add_option("--trials", trials, "Sampling trials");
  robust->add_option("--delta", delta_text, "delta (default eps/2)");

  auto* pfind = app.add_subcommand("pattern-find", "Search for a bi-induced copy of F");
  add_set(pfind);
  add_pattern(pfind);
  pfind->add_flag("--non-injective", non_injective, "Allow repeated images on either side");

  auto* ptest = app.add_subcommand("pattern-test", "Sampling tester for bi-induced copies of F");
  add_set(ptest);
  add_pattern(ptest);
  ptest->add_option("--samples", samples, "Number of sampled maps");

  auto* dist = app.add_subcommand("distance", "Exact distance from A to the F-free sets");
  add_set(dist);
  add_pattern(dist);

  auto* dens = app.add_subcommand("densify", "Coset perturbations of a witness found on the rounded set");
  add_set(dens);
  add_pattern(dens);
  dens->add_option("--subgroup", subgroup_path, "Set file holding the subgroup H")->required();
  dens->add_option("--samples", samples, "Number of perturbations");

  auto* ap = app.add_subcommand("ap-search", "First split arithmetic progression of length 2k");
  add_set(ap);
  ap->add_option("--k", int_param, "k")->required();

  auto* kneser = app.add_subcommand("kneser-check", "Check that 2tA = G for large generating A");
  add_set(kneser);
  kneser->add_option("--t", int_param, "t")->required();

  auto* exper = app.add_subcommand("experiment", "Run an experiment config");
  exper->add_option("--config", config_path, "Experiment config (JSON)")->required();
  exper->add_option("--out", out_path, "Override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (!g.caps_path.empty()) g.caps = arreg::io::caps_from_json(arreg::io::read_json_file(g.caps_path));
    using namespace arreg;

    if (*vcdim) {
      const GroupSubset a = load_set(g, set_path);
      const auto sys = TranslateSystem::full(a);
      Json r = io::to_json(vc_dimension(sys, max_d, g.caps));
      r["trace_count"] = distinct_traces(sys).size();
      emit(g, r);
    } else if (*ball) {
      const GroupSubset a = load_set(g, set_path);
      emit(g, io::to_json(almost_periods(a, Rational::parse(delta_text))));
    } else if (*pack) {
      const GroupSubset a = load_set(g, set_path);
      PackingOptions opts;
      opts.vc_limit = max_d;
      emit(g, io::to_json(greedy_packing(a, Rational::parse(delta_text), opts, g.caps)));
    } else if (*reg && !robust_d) {
      const GroupSubset a = load_set(g, set_path);
      PipelineConfig pc;
      pc.caps = g.caps;
      const Rational eps = Rational::parse(eps_text);
      const RegularityCertificate cert = regularize(a, eps, pc);
      Json r{{"certificate", io::to_json(cert)}, {"check", io::to_json(verify_certificate(cert))}};
      if (max_index) r["oracle"] = io::to_json(oracle_best_subgroup(a, eps, *max_index, g.caps));
      emit(g, r);
      return cert.degenerate ? kDegenerate : kOk;
    } else if (*reg || *robust) {
      const GroupSubset a = load_set(g, set_path);
      RobustConfig rc;
      rc.c = c_const;
      rc.trials = trials;
      rc.pipeline.caps = g.caps;
      if (!delta_text.empty()) rc.delta = Rational::parse(delta_text);
      const int d = robust_d ? *robust_d : int_param;
      const RobustOutcome out = robust_pipeline(a, Rational::parse(eps_text), d, rc, g.seed);
      emit(g, io::to_json(out));
      if (out.kind == RobustOutcome::Kind::sampled_vc) return kRobustA;
      return out.certificate->degenerate ? kDegenerate : kOk;
    } else if (*oracle) {
      const GroupSubset a = load_set(g, set_path);
      emit(g, io::to_json(oracle_best_subgroup(a, Rational::parse(eps_text), max_index.value_or(a.universe()), g.caps)));
    } else if (*pfind) {
      const GroupSubset a = load_set(g, set_path);
      const BipartitePattern f = load_pattern(pattern_path);
      const auto w = find_bi_induced(a, f, !non_injective, g.caps);
      Json r{{"found", w.has_value()}};
      r["witness"] = w ? io::to_json(a.group(), *w) : Json(nullptr);
      emit(g, r);
    } else if (*ptest) {
      const GroupSubset a = load_set(g, set_path);
      emit(g, io::to_json(sample_tester(a, load_pattern(pattern_path), samples, g.seed)));
    } else if (*dist) {
      const GroupSubset a = load_set(g, set_path);
      const auto d = distance_to_free(a, load_pattern(pattern_path), g.caps);
      Json r;
      r["distance"] = d ? Json(*d) : Json(nullptr);
      emit(g, r);
    } else if (*dens) {
      const GroupSubset a = load_set(g, set_path);
      const BipartitePattern f = load_pattern(pattern_path);
      const Subgroup h = io::subgroup_from_json(io::read_json_file(subgroup_path), g.caps);
      const auto w = find_bi_induced(coset_round(a, h), f, true, g.caps);
      if (!w) throw PreconditionViolated("densify: the rounded set has no bi-induced copy of F");
      Json r = io::to_json(densify(a, h, *w, f, samples, g.seed));
      r["witness"] = io::to_json(a.group(), *w);
      emit(g, r);
    } else if (*ap) {
      const GroupSubset a = load_set(g, set_path);
      const auto w = ap_search(a, static_cast<std::uint32_t>(int_param));
      Json r{{"found", w.has_value()}};
      r["progression"] = w ? io::to_json(a.group(), *w) : Json(nullptr);
      if (w) r["half_graph_witness"] = io::to_json(a.group(), half_graph_from_ap(a.group(), *w));
      emit(g, r);
    } else if (*kneser) {
      const GroupSubset a = load_set(g, set_path);
      emit(g, io::to_json(kneser_fill_check(a, static_cast<std::uint64_t>(int_param))));
    } else if (*exper) {
      const fs::path cfg_path(config_path);
      ExperimentConfig cfg = experiment_from_json(io::read_json_file(cfg_path), cfg_path.parent_path());
      cfg.caps = g.caps_path.empty() ? cfg.caps : g.caps;
      if (!out_path.empty()) cfg.output = fs::path(out_path);
      const auto rows = run_experiment(cfg);
      persist_rows(cfg, rows);
      std::cerr << summary_table(rows);
      if (!cfg.output) {
        std::cout << (g.format == "csv" ? rows_to_csv(rows) : rows_to_json_text(cfg, rows));
      }
    }
    return kOk;
  } catch (const arreg::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
