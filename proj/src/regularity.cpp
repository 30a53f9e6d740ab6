#include "arreg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "arreg/errors.hpp"

namespace arreg {

GroupSubset coset_round(const GroupSubset& a, const Subgroup& h) {
  if (!(a.group() == h.group())) throw GroupMismatch("coset_round: subgroup of a different group");
  const auto ids = coset_ids(h);
  const std::size_t count = a.universe() / h.size();
  std::vector<std::size_t> hits(count, 0);
  a.for_each([&](Rank r) { ++hits[ids[r]]; });
  GroupSubset s(a.group());
  for (Rank r = 0; r < a.universe(); ++r) {
    if (2 * hits[ids[r]] >= h.size()) s.insert(r);
  }
  return s;
}

Rational relative_error(const GroupSubset& a, const GroupSubset& s) {
  return Rational(static_cast<std::int64_t>(symdiff_size(a, s)), a.universe());
}

RoundingReport rounding_error_bound_check(const GroupSubset& a, const Subgroup& h) {
  RoundingReport r;
  r.subgroup_size = h.size();
  r.symdiff = symdiff_size(a, coset_round(a, h));
  h.members().for_each([&](Rank x) { r.profile_sum += symdiff_size(a, translate(a, x)); });
  r.holds = static_cast<std::uint64_t>(r.symdiff) * h.size() <= r.profile_sum;
  return r;
}

namespace {

std::vector<Rational> default_schedule(Rational epsilon, std::uint32_t order, std::size_t max_sweeps) {
  std::vector<Rational> out;
  Rational delta = epsilon / Rational(2);
  while (out.size() < max_sweeps) {
    out.push_back(delta);
    if (!(delta * Rational(order) >= Rational(1))) break;  // B_δ is now the stabilizer
    delta = delta / Rational(2);
  }
  return out;
}

struct Sweep {
  SweepRecord record;
  std::optional<RegularityCertificate> cert;
};

Sweep run_sweep(const GroupSubset& a, Rational epsilon, Rational delta, const PipelineConfig& config) {
  const GroupSubset ball = almost_periods(a, delta).members;
  DoublingConfig dc = DoublingConfig::for_delta(delta);
  if (config.growth) dc.growth = *config.growth;
  DoublingTrace trace = iterated_doubling(ball, dc);
  const GroupSubset periods = difference_set(trace.two_ell_b, trace.two_ell_b);
  Subgroup h = max_subgroup_within(periods, config.caps);
  GroupSubset rounded = coset_round(a, h);
  const Rational error = relative_error(a, rounded);

  Sweep out;
  out.record.delta = delta;
  out.record.ball_size = ball.size();
  out.record.ell = trace.ell;
  out.record.index = h.index();
  out.record.error = error;
  out.record.success = error <= epsilon;
  const double ratio = static_cast<double>(h.size()) / static_cast<double>(trace.ell_b.size());
  out.cert = RegularityCertificate{a,     epsilon, delta, std::move(trace), std::move(h), std::move(rounded),
                                   error, 0,       false, ball.size(),      ratio,        {}};
  out.cert->index = out.cert->subgroup.index();
  return out;
}

RegularityCertificate degenerate_certificate(const GroupSubset& a, Rational epsilon) {
  const Group& g = a.group();
  GroupSubset zero(g);
  zero.insert(0);
  return RegularityCertificate{a,
                               epsilon,
                               Rational(0),
                               iterated_doubling(zero, DoublingConfig{}),
                               trivial_subgroup(g),
                               a,
                               Rational(0),
                               g.order(),
                               true,
                               0,
                               1.0,
                               {}};
}

}  // namespace

RegularityCertificate regularize(const GroupSubset& a, Rational epsilon, const PipelineConfig& config) {
  if (epsilon <= Rational(0) || epsilon >= Rational(1)) throw InvalidArgument("regularize: epsilon must lie in (0, 1)");
  const std::vector<Rational> schedule = config.delta_schedule.empty()
                                             ? default_schedule(epsilon, a.universe(), config.max_sweeps)
                                             : config.delta_schedule;
  std::vector<SweepRecord> records;
  std::optional<RegularityCertificate> best;
  for (std::size_t i = 0; i < schedule.size() && i < config.max_sweeps; ++i) {
    Sweep s = run_sweep(a, epsilon, schedule[i], config);
    records.push_back(s.record);
    if (!s.record.success) continue;
    const bool better = !best || s.cert->index < best->index ||
                        (s.cert->index == best->index && lex_less(s.cert->subgroup.members(), best->subgroup.members()));
    if (better) best = std::move(s.cert);
  }
  RegularityCertificate out = best ? std::move(*best) : degenerate_certificate(a, epsilon);
  out.sweeps = std::move(records);
  return out;
}

CertificateCheck verify_certificate(const RegularityCertificate& cert) {
  CertificateCheck c;
  const GroupSubset& a = cert.input;
  const Group& g = a.group();
  const GroupSubset& h = cert.subgroup.members();
  const std::uint32_t n = g.order();

  c.closure = h.contains(0);
  const auto hs = h.elements();
  for (std::size_t i = 0; c.closure && i < hs.size(); ++i) {
    for (std::size_t j = i; c.closure && j < hs.size(); ++j) c.closure = h.contains(g.add(hs[i], hs[j]));
  }
  c.closure = c.closure && hs.size() == cert.subgroup.size() && n % hs.size() == 0 && cert.index == n / hs.size();

  c.union_of_cosets = true;
  cert.rounded.for_each([&](Rank r) {
    for (const Rank x : hs) {
      if (!cert.rounded.contains(g.add(r, x))) {
        c.union_of_cosets = false;
        return;
      }
    }
  });

  std::size_t diff = 0;
  for (Rank r = 0; r < n; ++r) diff += a.contains(r) != cert.rounded.contains(r);
  c.error_matches = Rational(static_cast<std::int64_t>(diff), n) == cert.achieved_error;
  c.within_epsilon = cert.achieved_error <= cert.epsilon;

  if (cert.degenerate) {
    c.period_bound = true;
  } else {
    const Rational bound = Rational(static_cast<std::int64_t>(4 * cert.trace.ell)) * cert.delta_used;
    c.period_bound = true;
    for (const Rank x : hs) {
      std::size_t moved = 0;
      for (Rank r = 0; r < n; ++r) moved += a.contains(r) != a.contains(g.sub(r, x));
      if (!bound.bounds_count(moved, n)) {
        c.period_bound = false;
        break;
      }
    }
  }
  return c;
}

OracleReport oracle_best_subgroup(const GroupSubset& a, Rational epsilon, std::uint64_t max_index,
                                  const std::vector<Subgroup>& subgroups) {
  OracleReport rep;
  rep.epsilon = epsilon;
  rep.max_index = max_index;
  std::map<std::uint64_t, Rational> per_index;
  for (const Subgroup& h : subgroups) {
    if (!(h.group() == a.group())) throw GroupMismatch("oracle_best_subgroup: subgroup of a different group");
    if (h.index() > max_index) continue;
    ++rep.subgroups_scanned;
    const Rational err = relative_error(a, coset_round(a, h));
    auto [it, inserted] = per_index.try_emplace(h.index(), err);
    if (!inserted && err < it->second) it->second = err;
    if (err <= epsilon) {
      const bool better = !rep.min_index || h.index() < *rep.min_index ||
                          (h.index() == *rep.min_index && lex_less(h.members(), rep.best->members()));
      if (better) {
        rep.min_index = h.index();
        rep.best = h;
        rep.best_error = err;
      }
    }
  }
  std::optional<Rational> running;
  for (const auto& [index, err] : per_index) {
    running = running ? std::min(*running, err) : err;
    rep.frontier.push_back(FrontierPoint{index, err, *running});
  }
  return rep;
}

OracleReport oracle_best_subgroup(const GroupSubset& a, Rational epsilon, std::uint64_t max_index,
                                  const Caps& caps) {
  return oracle_best_subgroup(a, epsilon, max_index, enumerate_subgroups(a.group(), max_index, caps));
}

RobustOutcome robust_pipeline(const GroupSubset& a, Rational epsilon, int d, const RobustConfig& config,
                              std::uint64_t seed) {
  if (epsilon <= Rational(0) || epsilon >= Rational(1)) throw InvalidArgument("robust: epsilon must lie in (0, 1)");
  if (d < 1) throw InvalidArgument("robust: d must be positive");
  if (!(config.c > 0)) throw InvalidArgument("robust: C must be positive");
  const Rational delta = config.delta ? *config.delta : epsilon / Rational(2);
  if (delta <= Rational(0) || delta >= Rational(1, 2)) throw InvalidArgument("robust: delta must lie in (0, 1/2)");

  const std::uint32_t n = a.universe();
  RobustOutcome out;
  out.delta = delta;
  out.c = config.c;
  const double dd = delta.to_double();
  out.m = static_cast<std::uint64_t>(std::ceil(config.c / dd * std::log(1.0 / dd)));
  out.m = std::max<std::uint64_t>(out.m, 1);
  const double md = std::pow(static_cast<double>(out.m), d);
  out.threshold = static_cast<double>(n) / (12.0 * md);
  out.ball_size = almost_periods(a, delta).members.size();
  out.ball_large = static_cast<double>(out.ball_size) * 12.0 * md >= static_cast<double>(n);
  const double xs = std::min(12.0 * md, static_cast<double>(n));
  out.x_size = static_cast<std::size_t>(xs);
  out.y_size = static_cast<std::size_t>(std::min<std::uint64_t>(out.m, n));

  if (!out.ball_large) {
    SampledVcReport rep = sampled_vc(a, out.x_size, out.y_size, config.trials, d, seed, config.pipeline.caps);
    if (rep.frequency >= config.sample_floor) {
      out.kind = RobustOutcome::Kind::sampled_vc;
      out.sampled = std::move(rep);
      return out;
    }
    out.fell_back = true;
    out.sampled = std::move(rep);
  }
  out.kind = RobustOutcome::Kind::certificate;
  out.certificate = regularize(a, epsilon, config.pipeline);
  return out;
}

}  // namespace arreg
