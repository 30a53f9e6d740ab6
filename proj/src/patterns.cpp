#include "arreg/patterns.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <unordered_map>

#include "arreg/errors.hpp"
#include "arreg/regularity.hpp"
#include "arreg/rng.hpp"
#include "arreg/setops.hpp"
#include "arreg/vc.hpp"

namespace arreg {

std::uint32_t ceil_log2(std::uint64_t n) noexcept {
  return n <= 1 ? 0u : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

BipartitePattern::BipartitePattern(std::uint32_t u_count, std::uint32_t v_count, std::vector<Edge> edges)
    : u_count_(u_count), v_count_(v_count), edges_(std::move(edges)) {
  if (u_count_ == 0 || v_count_ == 0) throw InvalidArgument("pattern: both sides need at least one vertex");
  if (v_count_ > 64) throw InvalidArgument("pattern: at most 64 vertices in V");
  nbr_.assign(u_count_, 0);
  for (const auto& [u, v] : edges_) {
    if (u >= u_count_ || v >= v_count_) throw InvalidArgument("pattern: edge index out of range");
    nbr_[u] |= std::uint64_t{1} << v;
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool BipartitePattern::has_duplicate_u_neighborhoods() const {
  std::vector<std::uint64_t> n = nbr_;
  std::sort(n.begin(), n.end());
  return std::adjacent_find(n.begin(), n.end()) != n.end();
}

BipartitePattern half_graph(std::uint32_t k) {
  if (k == 0) throw InvalidArgument("half_graph: k must be positive");
  std::vector<BipartitePattern::Edge> e;
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = i; j < k; ++j) e.emplace_back(i, j);
  }
  return BipartitePattern(k, k, std::move(e));
}

BipartitePattern complete_bipartite(std::uint32_t u, std::uint32_t v) {
  std::vector<BipartitePattern::Edge> e;
  for (std::uint32_t i = 0; i < u; ++i) {
    for (std::uint32_t j = 0; j < v; ++j) e.emplace_back(i, j);
  }
  return BipartitePattern(u, v, std::move(e));
}

BipartitePattern augment_f_plus(const BipartitePattern& f) {
  const std::uint32_t extra = ceil_log2(f.u_count());
  std::vector<BipartitePattern::Edge> e = f.edges();
  for (std::uint32_t u = 0; u < f.u_count(); ++u) {
    for (std::uint32_t b = 0; b < extra; ++b) {
      if ((u >> b) & 1u) e.emplace_back(u, f.v_count() + b);
    }
  }
  return BipartitePattern(f.u_count(), f.v_count() + extra, std::move(e));
}

namespace {

bool all_distinct(std::vector<Rank> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

void set_injectivity(BiInducedWitness& w) {
  w.injective_u = all_distinct(w.phi_u);
  w.injective_v = all_distinct(w.phi_v);
}

bool bi_induces(const GroupSubset& a, const BipartitePattern& f, std::span<const Rank> pu, std::span<const Rank> pv) {
  const Group& g = a.group();
  for (std::uint32_t u = 0; u < f.u_count(); ++u) {
    for (std::uint32_t v = 0; v < f.v_count(); ++v) {
      if (a.contains(g.add(pu[u], pv[v])) != f.adjacent(u, v)) return false;
    }
  }
  return true;
}

// Distinct U-neighborhoods with multiplicities, in first-appearance order.
struct NeighborhoodClass {
  std::uint64_t mask;
  std::vector<std::uint32_t> members;
};

std::vector<NeighborhoodClass> neighborhood_classes(const BipartitePattern& f) {
  std::vector<NeighborhoodClass> out;
  for (std::uint32_t u = 0; u < f.u_count(); ++u) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.mask == f.neighborhood(u); });
    if (it == out.end()) {
      out.push_back({f.neighborhood(u), {u}});
    } else {
      it->members.push_back(u);
    }
  }
  return out;
}

inline std::uint64_t low_bits(std::uint32_t count) {
  return count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
}

// masks[x] bit j = [x + φ(v_j) ∈ A]; φ(V) is assigned depth-first and every
// U-class must keep enough elements whose partial mask matches its prefix.
class BiInducedSearch {
 public:
  BiInducedSearch(const GroupSubset& a, const BipartitePattern& f, bool injective, const Caps& caps)
      : a_(a), g_(a.group()), f_(f), injective_(injective), caps_(caps), classes_(neighborhood_classes(f)) {
    n_ = g_.order();
    masks_.assign(n_, 0);
    phi_v_.assign(f.v_count(), 0);
    used_.assign(n_, false);
  }

  std::optional<BiInducedWitness> run() {
    if (injective_ && (f_.u_count() > n_ || f_.v_count() > n_)) return std::nullopt;
    if (!dfs(0)) return std::nullopt;
    return result_;
  }

 private:
  bool feasible(std::uint32_t depth) const {
    const std::uint64_t low = low_bits(depth);
    // prefix -> (elements matching, elements needed)
    std::vector<std::pair<std::uint64_t, std::size_t>> need;
    for (const auto& c : classes_) {
      const std::uint64_t p = c.mask & low;
      const std::size_t k = injective_ ? c.members.size() : 1;
      auto it = std::find_if(need.begin(), need.end(), [&](const auto& e) { return e.first == p; });
      if (it == need.end()) {
        need.emplace_back(p, k);
      } else {
        it->second += k;
      }
    }
    for (const auto& [p, k] : need) {
      std::size_t have = 0;
      for (std::uint32_t x = 0; x < n_ && have < k; ++x) have += (masks_[x] & low) == p;
      if (have < k) return false;
    }
    return true;
  }

  void assign_u() {
    BiInducedWitness w;
    w.phi_v = phi_v_;
    w.phi_u.assign(f_.u_count(), 0);
    for (const auto& c : classes_) {
      std::size_t next = 0;
      for (std::uint32_t x = 0; x < n_ && next < c.members.size(); ++x) {
        if (masks_[x] != c.mask) continue;
        if (injective_) {
          w.phi_u[c.members[next++]] = x;
        } else {
          for (const auto u : c.members) w.phi_u[u] = x;
          next = c.members.size();
        }
      }
    }
    set_injectivity(w);
    result_ = std::move(w);
  }

  bool dfs(std::uint32_t depth) {
    if (depth == f_.v_count()) {
      assign_u();
      return true;
    }
    const std::uint32_t last = depth == 0 ? 1 : n_;
    for (Rank y = 0; y < last; ++y) {
      if (injective_ && used_[y]) continue;
      if (++nodes_ > caps_.search_nodes) throw CapExceeded("find_bi_induced: search node cap exceeded");
      const std::uint64_t keep = low_bits(depth);
      for (Rank x = 0; x < n_; ++x) {
        masks_[x] = (masks_[x] & keep) | (static_cast<std::uint64_t>(a_.contains(g_.add(x, y))) << depth);
      }
      if (!feasible(depth + 1)) continue;
      phi_v_[depth] = y;
      used_[y] = true;
      const bool found = dfs(depth + 1);
      used_[y] = false;
      if (found) return true;
    }
    return false;
  }

  const GroupSubset& a_;
  const Group& g_;
  const BipartitePattern& f_;
  bool injective_;
  const Caps& caps_;
  std::vector<NeighborhoodClass> classes_;
  std::uint32_t n_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<Rank> phi_v_;
  std::vector<bool> used_;
  std::uint64_t nodes_ = 0;
  BiInducedWitness result_;
};

}  // namespace

bool check_witness(const GroupSubset& a, const BipartitePattern& f, const BiInducedWitness& w,
                   bool require_injective) {
  if (w.phi_u.size() != f.u_count() || w.phi_v.size() != f.v_count()) return false;
  for (const Rank r : w.phi_u) a.group().check_rank(r);
  for (const Rank r : w.phi_v) a.group().check_rank(r);
  if (require_injective && !(all_distinct(w.phi_u) && all_distinct(w.phi_v))) return false;
  return bi_induces(a, f, w.phi_u, w.phi_v);
}

std::optional<BiInducedWitness> find_bi_induced(const GroupSubset& a, const BipartitePattern& f,
                                                bool require_injective, const Caps& caps) {
  return BiInducedSearch(a, f, require_injective, caps).run();
}

ShatteringConstruction witness_from_shattering(const GroupSubset& a, const BipartitePattern& f, const Caps& caps) {
  const BipartitePattern plus = augment_f_plus(f);
  ShatteringConstruction out;
  out.required = plus.v_count();
  auto set = find_shattered_set(TranslateSystem::full(a), static_cast<int>(out.required), caps);
  if (!set) return out;
  out.shattered = *set;

  const Group& g = a.group();
  const std::uint32_t n = g.order();
  std::vector<std::uint64_t> masks(n, 0);
  for (Rank y = 0; y < n; ++y) {
    for (std::uint32_t j = 0; j < out.required; ++j) {
      masks[y] |= static_cast<std::uint64_t>(a.contains(g.add(y, out.shattered[j]))) << j;
    }
  }
  BiInducedWitness w;
  w.phi_v.assign(out.shattered.begin(), out.shattered.begin() + f.v_count());
  for (std::uint32_t u = 0; u < f.u_count(); ++u) {
    const auto it = std::find(masks.begin(), masks.end(), plus.neighborhood(u));
    if (it == masks.end()) throw Error("witness_from_shattering: shattered set missing a pattern");
    w.phi_u.push_back(static_cast<Rank>(it - masks.begin()));
  }
  set_injectivity(w);
  out.witness = std::move(w);
  return out;
}

TesterReport sample_tester(const GroupSubset& a, const BipartitePattern& f, std::uint64_t samples,
                           std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("sample_tester: samples must be positive");
  const std::uint32_t n = a.universe();
  Rng rng = Rng::derive(seed, "sample-tester");
  TesterReport r;
  r.samples = samples;
  std::vector<Rank> pu(f.u_count());
  std::vector<Rank> pv(f.v_count());
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& x : pu) x = static_cast<Rank>(rng.below(n));
    for (auto& y : pv) y = static_cast<Rank>(rng.below(n));
    if (!bi_induces(a, f, pu, pv)) continue;
    ++r.bi_inducing;
    if (all_distinct(pu) && all_distinct(pv)) ++r.injective_bi_inducing;
  }
  r.fraction = static_cast<double>(r.bi_inducing) / static_cast<double>(samples);
  r.injective_fraction = static_cast<double>(r.injective_bi_inducing) / static_cast<double>(samples);
  r.wilson3 = wilson_interval(r.bi_inducing, samples, 3.0);
  r.decision = r.injective_bi_inducing > 0;
  return r;
}

Rational exhaustive_density(const GroupSubset& a, const BipartitePattern& f, const Caps& caps) {
  const Group& g = a.group();
  const std::uint64_t n = g.order();
  unsigned __int128 maps = 1;
  for (std::uint32_t i = 0; i < f.vertex_count(); ++i) {
    maps *= n;
    if (maps > caps.density_maps) throw CapExceeded("exhaustive_density: |G|^|V(F)| exceeds cap");
  }
  const auto classes = neighborhood_classes(f);
  const std::uint32_t vc = f.v_count();
  std::vector<std::uint64_t> masks(n, 0);
  std::unordered_map<std::uint64_t, std::uint64_t> hist;
  std::vector<Rank> pv(vc, 0);
  unsigned __int128 total = 0;

  // φ(v_0) = 0; every count is then scaled by |G| through the denominator.
  auto rec = [&](auto&& self, std::uint32_t depth) -> void {
    if (depth == vc) {
      hist.clear();
      for (const auto m : masks) ++hist[m];
      unsigned __int128 prod = 1;
      for (const auto& c : classes) {
        const auto it = hist.find(c.mask);
        const std::uint64_t h = it == hist.end() ? 0 : it->second;
        for (std::size_t i = 0; i < c.members.size(); ++i) prod *= h;
        if (prod == 0) return;
      }
      total += prod;
      return;
    }
    const Rank last = depth == 0 ? 1 : static_cast<Rank>(n);
    const std::uint64_t keep = low_bits(depth);
    for (Rank y = 0; y < last; ++y) {
      for (Rank x = 0; x < n; ++x) {
        masks[x] = (masks[x] & keep) | (static_cast<std::uint64_t>(a.contains(g.add(x, y))) << depth);
      }
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  const unsigned __int128 denom = maps / n;
  return Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(denom));
}

FreenessCache::FreenessCache(Group g, BipartitePattern f, Caps caps)
    : group_(std::move(g)), pattern_(std::move(f)), caps_(caps) {
  if (group_.order() > caps_.distance_order || group_.order() > 24) {
    throw CapExceeded("distance_to_free: |G| exceeds the brute-force cap");
  }
  memo_.assign(std::size_t{1} << group_.order(), -1);
}

bool FreenessCache::is_free(std::uint64_t bits) {
  std::int8_t& m = memo_[bits];
  if (m < 0) {
    const GroupSubset s = GroupSubset::from_words(group_, {bits});
    m = find_bi_induced(s, pattern_, true, caps_) ? 0 : 1;
  }
  return m == 1;
}

std::optional<std::uint32_t> distance_to_free(const GroupSubset& a, FreenessCache& cache) {
  if (!(a.group() == cache.group())) throw GroupMismatch("distance_to_free: cache built for another group");
  const std::uint32_t n = a.universe();
  const std::uint64_t bits = a.words()[0];
  const std::uint64_t limit = std::uint64_t{1} << n;
  if (cache.is_free(bits)) return 0u;
  for (std::uint32_t r = 1; r <= n; ++r) {
    // r-subsets D in increasing numeric order (Gosper)
    for (std::uint64_t d = (std::uint64_t{1} << r) - 1; d < limit;) {
      if (cache.is_free(bits ^ d)) return r;
      const std::uint64_t c = d & (~d + 1);
      const std::uint64_t s = d + c;
      d = (((s ^ d) >> 2) / c) | s;
    }
  }
  return std::nullopt;
}

std::optional<std::uint32_t> distance_to_free(const GroupSubset& a, const BipartitePattern& f, const Caps& caps) {
  FreenessCache cache(a.group(), f, caps);
  return distance_to_free(a, cache);
}

std::vector<int> distance_to_free_all(FreenessCache& cache) {
  const std::uint32_t n = cache.group().order();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<int> dist(total, -1);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (cache.is_free(s)) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::uint64_t s = queue.front();
    queue.pop_front();
    for (std::uint32_t b = 0; b < n; ++b) {
      const std::uint64_t t = s ^ (std::uint64_t{1} << b);
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

CosetGoodness coset_goodness(const GroupSubset& a, const Subgroup& h, const BipartitePattern& f) {
  const std::uint64_t uv2 = 2ull * f.u_count() * f.v_count();
  CosetGoodness out{h, Rational(1, static_cast<std::int64_t>(uv2)), cosets(h), {}, Rational(0)};
  std::size_t bad = 0;
  for (const auto& c : out.cosets) {
    const std::uint64_t in = (c & a).size();
    const std::uint64_t size = h.size();
    const bool good = uv2 * in <= size || uv2 * (size - in) <= size;
    out.good.push_back(good);
    bad += !good;
  }
  out.bad_fraction = Rational(static_cast<std::int64_t>(bad), static_cast<std::int64_t>(out.cosets.size()));
  return out;
}

DensifyReport densify(const GroupSubset& a, const Subgroup& h, const BiInducedWitness& w, const BipartitePattern& f,
                      std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("densify: samples must be positive");
  if (!check_witness(coset_round(a, h), f, w)) {
    throw PreconditionViolated("densify: witness does not bi-induce F in the rounded set");
  }
  const Group& g = a.group();
  const CosetGoodness cg = coset_goodness(a, h, f);
  const auto ids = coset_ids(h);
  for (const Rank x : w.phi_u) {
    for (const Rank y : w.phi_v) {
      if (!cg.good[ids[g.add(x, y)]]) throw PreconditionViolated("densify: a witness coset is bad");
    }
  }
  const std::vector<Rank> hs = h.members().elements();
  Rng rng = Rng::derive(seed, "densify");
  DensifyReport r;
  r.eta = cg.eta;
  r.samples = samples;
  std::vector<Rank> pu(w.phi_u.size());
  std::vector<Rank> pv(w.phi_v.size());
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < pu.size(); ++i) pu[i] = g.add(w.phi_u[i], hs[rng.below(hs.size())]);
    for (std::size_t j = 0; j < pv.size(); ++j) pv[j] = g.add(w.phi_v[j], hs[rng.below(hs.size())]);
    if (bi_induces(a, f, pu, pv)) ++r.successes;
  }
  r.fraction = static_cast<double>(r.successes) / static_cast<double>(samples);
  r.wilson3 = wilson_interval(r.successes, samples, 3.0);
  r.holds = r.wilson3.hi >= 0.5;
  return r;
}

std::optional<ApWitness> ap_search(const GroupSubset& a, std::uint32_t k) {
  const Group& g = a.group();
  const std::uint32_t n = g.order();
  if (k == 0 || 2ull * k > n) throw InvalidArgument("ap_search: need 1 <= k and 2k <= |G|");
  for (Rank x = 0; x < n; ++x) {
    for (Rank d = 1; d < n; ++d) {
      Rank t = x;
      bool ok = true;
      for (std::uint32_t s = 0; ok && s < 2 * k; ++s) {
        ok = a.contains(t) == (s < k);
        t = g.add(t, d);
      }
      if (ok) return ApWitness{x, d, k};
    }
  }
  return std::nullopt;
}

BiInducedWitness half_graph_from_ap(const Group& g, const ApWitness& ap) {
  BiInducedWitness w;
  for (std::uint32_t i = 1; i <= ap.k; ++i) {
    w.phi_u.push_back(g.add(ap.start, g.multiple(ap.step, ap.k - 1 + i)));
    w.phi_v.push_back(g.neg(g.multiple(ap.step, i)));
  }
  set_injectivity(w);
  return w;
}

}  // namespace arreg
