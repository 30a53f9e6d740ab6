#include "arreg/vc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "arreg/errors.hpp"
#include "arreg/rng.hpp"
#include "arreg/setops.hpp"

namespace arreg {

TranslateSystem TranslateSystem::full(const GroupSubset& a) {
  return TranslateSystem{a, GroupSubset::full(a.group()), GroupSubset::full(a.group())};
}

bool TranslateSystem::is_full() const { return ground.is_full() && translators.is_full(); }

std::vector<GroupSubset> distinct_traces(const TranslateSystem& sys) {
  if (!(sys.base.group() == sys.ground.group()) || !(sys.base.group() == sys.translators.group())) {
    throw GroupMismatch("translate system: components from different groups");
  }
  std::vector<GroupSubset> traces;
  std::unordered_set<GroupSubset, GroupSubsetHash> seen;
  sys.translators.for_each([&](Rank x) {
    GroupSubset t = translate(sys.base, x) & sys.ground;
    if (seen.insert(t).second) traces.push_back(std::move(t));
  });
  return traces;
}

namespace {

// Depth-first search for a shattered set. Traces are indexed 0..T-1; each
// candidate ground element y carries a column bitset over traces (bit t set
// iff y lies in trace t). A partial set U is represented by the 2^|U| groups
// of traces sharing each pattern on U; adding y splits every group in two,
// and each half must still hold at least 2^{remaining} traces.
class ShatterSearch {
 public:
  ShatterSearch(const TranslateSystem& sys, const Caps& caps) : caps_(caps) {
    if (sys.ground.size() > caps.vc_ground) {
      throw CapExceeded("vc_dimension: ground set of size " + std::to_string(sys.ground.size()) + " exceeds cap");
    }
    if (sys.translators.empty()) throw PreconditionViolated("vc_dimension: translator set is empty");
    const std::vector<GroupSubset> traces = distinct_traces(sys);
    trace_count_ = traces.size();
    words_ = (trace_count_ + 63) / 64;
    anchored_ = sys.is_full();

    const std::uint32_t n = sys.base.universe();
    std::vector<std::uint64_t> all_columns(static_cast<std::size_t>(n) * words_, 0);
    for (std::size_t t = 0; t < traces.size(); ++t) {
      traces[t].for_each([&](Rank y) { all_columns[y * words_ + (t >> 6)] |= std::uint64_t{1} << (t & 63); });
    }
    full_mask_.assign(words_, ~std::uint64_t{0});
    if (trace_count_ % 64) full_mask_.back() = (std::uint64_t{1} << (trace_count_ % 64)) - 1;

    sys.ground.for_each([&](Rank y) {
      const std::uint64_t* col = &all_columns[y * words_];
      bool any = false;
      bool all = true;
      for (std::size_t w = 0; w < words_; ++w) {
        any |= col[w] != 0;
        all &= col[w] == full_mask_[w];
      }
      if (!any || all) return;  // constant on every trace: never splits
      candidates_.push_back(y);
      columns_.insert(columns_.end(), col, col + words_);
    });
  }

  std::size_t trace_count() const noexcept { return trace_count_; }

  std::optional<std::vector<Rank>> find(int target) {
    if (target <= 0) return std::vector<Rank>{};
    if (static_cast<std::size_t>(target) > candidates_.size()) return std::nullopt;
    if (target >= 63 || (std::size_t{1} << target) > trace_count_) return std::nullopt;
    levels_.assign(static_cast<std::size_t>(target) + 1, {});
    for (int j = 0; j <= target; ++j) levels_[j].resize((std::size_t{1} << j) * words_);
    std::copy(full_mask_.begin(), full_mask_.end(), levels_[0].begin());
    chosen_.clear();
    if (dfs(0, 0, target)) return chosen_;
    return std::nullopt;
  }

 private:
  bool try_split(int depth, std::size_t cand, std::size_t need) {
    const std::uint64_t* col = &columns_[cand * words_];
    const std::size_t groups = std::size_t{1} << depth;
    const std::uint64_t* src = levels_[depth].data();
    std::uint64_t* dst = levels_[depth + 1].data();
    for (std::size_t g = 0; g < groups; ++g) {
      std::size_t in = 0;
      std::size_t out = 0;
      const std::uint64_t* grp = src + g * words_;
      std::uint64_t* lo = dst + (2 * g) * words_;
      std::uint64_t* hi = dst + (2 * g + 1) * words_;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t a = grp[w] & ~col[w];
        const std::uint64_t b = grp[w] & col[w];
        lo[w] = a;
        hi[w] = b;
        out += static_cast<std::size_t>(std::popcount(a));
        in += static_cast<std::size_t>(std::popcount(b));
      }
      if (in < need || out < need) return false;
    }
    return true;
  }

  bool dfs(int depth, std::size_t start, int target) {
    if (depth == target) return true;
    const std::size_t need = std::size_t{1} << (target - depth - 1);
    const std::size_t remaining = static_cast<std::size_t>(target - depth);
    std::size_t first = start;
    std::size_t last = candidates_.size() - remaining;  // inclusive
    if (anchored_ && depth == 0) {
      // The family is translation invariant, so some shattered set of each
      // size contains 0 whenever any does.
      if (candidates_.empty() || candidates_.front() != 0) return false;
      last = 0;
    }
    for (std::size_t i = first; i <= last; ++i) {
      if (++nodes_ > caps_.search_nodes) throw CapExceeded("vc_dimension: search node cap exceeded");
      if (!try_split(depth, i, need)) continue;
      chosen_.push_back(candidates_[i]);
      if (dfs(depth + 1, i + 1, target)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const Caps& caps_;
  std::size_t trace_count_ = 0;
  std::size_t words_ = 0;
  bool anchored_ = false;
  std::vector<std::uint64_t> full_mask_;
  std::vector<Rank> candidates_;
  std::vector<std::uint64_t> columns_;
  std::vector<std::vector<std::uint64_t>> levels_;
  std::vector<Rank> chosen_;
  std::uint64_t nodes_ = 0;
};

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(p);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? ~std::uint64_t{0} : s;
}

std::uint64_t sat_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace

VcDimension vc_dimension(const TranslateSystem& sys, std::optional<int> max_d, const Caps& caps) {
  if (max_d && *max_d < 0) throw InvalidArgument("vc_dimension: max_d must be >= 0");
  ShatterSearch search(sys, caps);
  VcDimension result;
  for (int d = 1;; ++d) {
    if (max_d && d > *max_d + 1) break;
    auto found = search.find(d);
    if (!found) break;
    result.value = d;
    result.shattered = std::move(*found);
    if (max_d && d == *max_d + 1) {
      result.exceeds_limit = true;
      break;
    }
  }
  return result;
}

std::optional<std::vector<Rank>> find_shattered_set(const TranslateSystem& sys, int size, const Caps& caps) {
  ShatterSearch search(sys, caps);
  return search.find(size);
}

bool is_shattered(const TranslateSystem& sys, std::span<const Rank> set) {
  if (set.size() >= 32) return false;
  std::unordered_set<std::uint32_t> patterns;
  sys.translators.for_each([&](Rank x) {
    std::uint32_t p = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const Rank y = set[i];
      if (sys.ground.contains(y) && sys.base.contains(sys.base.group().sub(y, x))) p |= 1u << i;
    }
    patterns.insert(p);
  });
  for (const Rank y : set) {
    if (!sys.ground.contains(y)) return false;
  }
  return patterns.size() == (std::size_t{1} << set.size());
}

SauerReport sauer_check(const TranslateSystem& sys, std::optional<int> max_d, const Caps& caps) {
  SauerReport r;
  r.trace_count = distinct_traces(sys).size();
  r.ground_size = sys.ground.size();
  const VcDimension vc = vc_dimension(sys, max_d, caps);
  r.d = vc.value;
  r.d_is_lower_bound = vc.exceeds_limit;
  const std::uint64_t n = r.ground_size;
  std::uint64_t binom = 1;  // C(n, 0)
  r.binomial_sum = 1;
  for (int i = 1; i <= r.d; ++i) {
    // C(n, i) = C(n, i-1) * (n - i + 1) / i, exact while unsaturated
    if (static_cast<std::uint64_t>(i) > n) {
      binom = 0;
    } else if (binom != ~std::uint64_t{0}) {
      const unsigned __int128 next = static_cast<unsigned __int128>(binom) * (n - i + 1) / i;
      binom = next > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(next);
    }
    r.binomial_sum = sat_add(r.binomial_sum, binom);
  }
  r.binomial_holds = r.trace_count <= r.binomial_sum;
  r.polynomial_applies = n >= 2 && r.d >= 1;
  r.polynomial_bound = sat_mul(2, sat_pow(n, r.d));
  r.polynomial_holds = !r.polynomial_applies || r.trace_count <= r.polynomial_bound;
  return r;
}

PackingResult greedy_packing(const GroupSubset& a, Rational delta, const PackingOptions& options, const Caps& caps) {
  if (delta <= Rational(0) || delta > Rational(1)) throw InvalidArgument("greedy_packing: delta must lie in (0, 1]");
  const Group& g = a.group();
  const std::uint32_t n = g.order();
  const auto profile = translation_profile(a);
  auto separated = [&](std::uint32_t symdiff) { return !delta.bounds_count(symdiff, n); };

  PackingResult result;
  result.delta = delta;
  for (Rank x = 0; x < n; ++x) {
    bool keep = true;
    for (const Rank w : result.centers) {
      if (!separated(profile[g.sub(x, w)])) {
        keep = false;
        break;
      }
    }
    if (keep) result.centers.push_back(x);
  }

  if (options.verify) {
    std::vector<GroupSubset> shifted;
    shifted.reserve(n);
    for (Rank x = 0; x < n; ++x) shifted.push_back(translate(a, x));
    bool ok = true;
    for (std::size_t i = 0; ok && i < result.centers.size(); ++i) {
      for (std::size_t j = i + 1; ok && j < result.centers.size(); ++j) {
        ok = separated(static_cast<std::uint32_t>(symdiff_size(shifted[result.centers[i]], shifted[result.centers[j]])));
      }
    }
    for (Rank x = 0; ok && x < n; ++x) {
      ok = std::any_of(result.centers.begin(), result.centers.end(), [&](Rank w) {
        return !separated(static_cast<std::uint32_t>(symdiff_size(shifted[x], shifted[w])));
      });
    }
    result.certified_separation = ok;
  }

  result.vc = vc_dimension(TranslateSystem::full(a), options.vc_limit, caps);
  // |W| <= (30/delta)^d  <=>  |W| * num^d <= (30 den)^d
  const std::uint64_t lhs = sat_mul(result.centers.size(), sat_pow(static_cast<std::uint64_t>(delta.num()), result.vc.value));
  const std::uint64_t rhs = sat_pow(30 * static_cast<std::uint64_t>(delta.den()), result.vc.value);
  result.haussler_holds = rhs == ~std::uint64_t{0} || lhs <= rhs;
  return result;
}

SampledVcReport sampled_vc(const GroupSubset& a, std::size_t x_size, std::size_t y_size, std::uint64_t trials, int d,
                           std::uint64_t seed, const Caps& caps) {
  const Group& g = a.group();
  if (x_size > g.order() || y_size > g.order()) throw InvalidArgument("sampled_vc: sample size exceeds |G|");
  if (x_size == 0) throw InvalidArgument("sampled_vc: x_size must be positive");
  SampledVcReport r;
  r.x_size = x_size;
  r.y_size = y_size;
  r.d = d;
  r.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, "sampled-vc", t);
    const auto xs = rng.sample_without_replacement(g.order(), static_cast<std::uint32_t>(x_size));
    const auto ys = rng.sample_without_replacement(g.order(), static_cast<std::uint32_t>(y_size));
    TranslateSystem sys{a, GroupSubset::from_ranks(g, ys), GroupSubset::from_ranks(g, xs)};
    if (vc_dimension(sys, d, caps).exceeds_limit) ++r.exceed_count;
  }
  r.frequency = trials ? static_cast<double>(r.exceed_count) / static_cast<double>(trials) : 0.0;
  r.wilson95 = wilson_interval(r.exceed_count, trials, 1.96);
  return r;
}

// ---------------------------------------------------------------------------
// Graphs

AdjacencyOracle AdjacencyOracle::from_edges(std::uint32_t n,
                                            std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  AdjacencyOracle g;
  g.n_ = n;
  g.adj_.resize(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidArgument("adjacency: edge endpoint out of range");
    if (u == v) continue;
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& list : g.adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

AdjacencyOracle AdjacencyOracle::cayley(const GroupSubset& b) {
  AdjacencyOracle g;
  const Group& grp = b.group();
  g.n_ = grp.order();
  g.group_ = grp;
  GroupSubset steps = b | negate(b);
  steps.erase(0);
  g.steps_ = steps.elements();
  g.step_set_ = std::move(steps);
  return g;
}

std::size_t AdjacencyOracle::max_degree() const {
  if (group_) return steps_.size();
  std::size_t m = 0;
  for (const auto& l : adj_) m = std::max(m, l.size());
  return m;
}

std::vector<std::uint32_t> AdjacencyOracle::neighbors(std::uint32_t v) const {
  if (v >= n_) throw InvalidArgument("adjacency: vertex out of range");
  if (!group_) return adj_[v];
  std::vector<std::uint32_t> out;
  out.reserve(steps_.size());
  for (const Rank s : steps_) out.push_back(group_->add(v, s));
  std::sort(out.begin(), out.end());
  return out;
}

bool AdjacencyOracle::adjacent(std::uint32_t u, std::uint32_t v) const {
  if (group_) return step_set_->contains(group_->sub(u, v));
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

RateReport random_independent_subset_rate(const AdjacencyOracle& graph, std::uint32_t k, std::uint64_t trials,
                                          std::uint64_t seed) {
  const std::uint32_t n = graph.vertex_count();
  if (k == 0 || 2 * static_cast<std::uint64_t>(k) > n) {
    throw PreconditionViolated("independent-set rate: need 1 <= k <= n/2");
  }
  if (graph.max_degree() * k > n) throw PreconditionViolated("independent-set rate: max degree exceeds n/k");
  RateReport r;
  r.n = n;
  r.k = k;
  r.trials = trials;
  std::vector<std::uint32_t> seq;
  std::vector<std::uint32_t> indep;
  std::unordered_set<std::uint32_t> drawn;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, "independent-set", t);
    seq.clear();
    drawn.clear();
    while (seq.size() < k) {
      const auto v = static_cast<std::uint32_t>(rng.below(n));
      if (drawn.insert(v).second) seq.push_back(v);
    }
    indep.clear();
    for (const auto v : seq) {
      const bool free = std::none_of(indep.begin(), indep.end(), [&](auto u) { return graph.adjacent(u, v); });
      if (free) indep.push_back(v);
    }
    if (4 * indep.size() >= k) ++r.successes;
  }
  r.rate = trials ? static_cast<double>(r.successes) / static_cast<double>(trials) : 0.0;
  r.bound = 1.0 - std::exp(-static_cast<double>(k) / 8.0);
  r.wilson3 = wilson_interval(r.successes, trials, 3.0);
  r.holds = r.wilson3.hi >= r.bound;
  return r;
}

SeparatedSampleReport separated_sample_bound_check(const GroupSubset& a, Rational delta, std::uint32_t m, int d,
                                                   std::uint64_t trials, std::uint64_t seed, const Caps& caps) {
  const Group& g = a.group();
  if (m == 0 || m > g.order()) throw InvalidArgument("separated_sample_bound_check: need 1 <= m <= |G|");
  if (d < 1) throw InvalidArgument("separated_sample_bound_check: d must be positive");
  PackingOptions opts;
  opts.vc_limit = 0;
  opts.verify = false;
  const PackingResult packing = greedy_packing(a, delta, opts, caps);
  const GroupSubset centers = GroupSubset::from_ranks(g, packing.centers);

  SeparatedSampleReport r;
  r.family_size = packing.centers.size();
  r.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, "separated-sample", t);
    const auto ms = rng.sample_without_replacement(g.order(), m);
    TranslateSystem sys{a, GroupSubset::from_ranks(g, ms), centers};
    if (!vc_dimension(sys, d, caps).exceeds_limit) ++r.low_vc_count;
  }
  r.probability = trials ? static_cast<double>(r.low_vc_count) / static_cast<double>(trials) : 0.0;
  const double md = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  r.premise_threshold = 3.0 * std::pow(md, 2 * dd) * std::pow(1.0 - delta.to_double(), md);
  r.size_bound = 2.0 * std::pow(md, dd);
  r.premise = r.probability >= r.premise_threshold;
  r.conclusion = static_cast<double>(r.family_size) <= r.size_bound;
  return r;
}

}  // namespace arreg
