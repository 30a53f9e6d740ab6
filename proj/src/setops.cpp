#include "arreg/setops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "arreg/errors.hpp"

namespace arreg {

namespace {

void require_same_group(const GroupSubset& a, const GroupSubset& b, const char* what) {
  if (!(a.group() == b.group())) throw GroupMismatch(std::string(what) + ": operands from different groups");
}

// Permutes bit i of a word to bit i ^ x for x < 64.
std::uint64_t xor_permute_word(std::uint64_t w, unsigned x) {
  static constexpr std::uint64_t kMasks[6] = {0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
                                              0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull};
  for (unsigned k = 0; k < 6; ++k) {
    if (x & (1u << k)) {
      const unsigned s = 1u << k;
      w = ((w & kMasks[k]) << s) | ((w >> s) & kMasks[k]);
    }
  }
  return w;
}

std::vector<std::uint64_t> translate_xor(std::span<const std::uint64_t> in, Rank x) {
  std::vector<std::uint64_t> out(in.size());
  const std::size_t word_shift = x >> 6;
  const unsigned bit_shift = x & 63;
  for (std::size_t w = 0; w < in.size(); ++w) out[w ^ word_shift] = xor_permute_word(in[w], bit_shift);
  return out;
}

// Cyclic rotation of an n-bit vector by x positions toward higher ranks.
std::vector<std::uint64_t> translate_rotate(std::span<const std::uint64_t> in, std::uint32_t n, Rank x) {
  std::vector<std::uint64_t> out(in.size(), 0);
  if (x == 0) {
    std::copy(in.begin(), in.end(), out.begin());
    return out;
  }
  if (n <= 64) {
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    const std::uint64_t w = in[0];
    out[0] = ((w << x) | (w >> (n - x))) & mask;
    return out;
  }
  // out = (in << x) | (in >> (n - x)), both truncated to n bits.
  auto shl_or = [&](unsigned s) {
    const std::size_t ws = s >> 6;
    const unsigned bs = s & 63;
    for (std::size_t i = in.size(); i-- > ws;) {
      std::uint64_t v = in[i - ws] << bs;
      if (bs && i - ws >= 1) v |= in[i - ws - 1] >> (64 - bs);
      out[i] |= v;
    }
  };
  auto shr_or = [&](unsigned s) {
    const std::size_t ws = s >> 6;
    const unsigned bs = s & 63;
    for (std::size_t i = 0; i + ws < in.size(); ++i) {
      std::uint64_t v = in[i + ws] >> bs;
      if (bs && i + ws + 1 < in.size()) v |= in[i + ws + 1] << (64 - bs);
      out[i] |= v;
    }
  };
  shl_or(x);
  shr_or(n - x);
  if (n % 64) out.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  return out;
}

}  // namespace

GroupSubset translate(const GroupSubset& a, Rank x) {
  const Group& g = a.group();
  g.check_rank(x);
  if (x == 0) return a;
  if (g.is_elementary_two()) return GroupSubset::from_words(g, translate_xor(a.words(), x));
  if (g.is_cyclic()) return GroupSubset::from_words(g, translate_rotate(a.words(), g.order(), x));
  GroupSubset out(g);
  a.for_each([&](Rank r) { out.insert(g.add(r, x)); });
  return out;
}

GroupSubset negate(const GroupSubset& a) {
  const Group& g = a.group();
  if (g.is_elementary_two()) return a;
  GroupSubset out(g);
  a.for_each([&](Rank r) { out.insert(g.neg(r)); });
  return out;
}

std::size_t symdiff_size(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a, b, "symdiff_size");
  std::size_t c = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) c += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return c;
}

std::vector<std::uint32_t> translation_profile(const GroupSubset& a) {
  const Group& g = a.group();
  const std::uint32_t n = g.order();
  std::vector<std::uint32_t> profile(n, 0);
  if (g.is_elementary_two() || g.is_cyclic()) {
    for (Rank x = 0; x < n; ++x) profile[x] = static_cast<std::uint32_t>(symdiff_size(a, translate(a, x)));
    return profile;
  }
  const bool use_complement = a.size() * 2 > n;
  const GroupSubset s = use_complement ? a.complement() : a;
  const std::vector<Rank> elems = s.elements();
  std::vector<std::uint32_t> overlap(n, 0);  // overlap[x] = |S ∩ (S + x)|
  for (const Rank p : elems) {
    const Rank np = g.neg(p);
    for (const Rank q : elems) ++overlap[g.add(q, np)];
  }
  const auto sz = static_cast<std::uint32_t>(elems.size());
  for (Rank x = 0; x < n; ++x) profile[x] = 2 * (sz - overlap[x]);
  return profile;
}

AlmostPeriodSet almost_periods(const GroupSubset& a, Rational delta) {
  if (delta <= Rational(0) || delta > Rational(1)) throw InvalidArgument("almost_periods: delta must lie in (0, 1]");
  const auto profile = translation_profile(a);
  GroupSubset members(a.group());
  const std::uint32_t n = a.universe();
  for (Rank x = 0; x < n; ++x) {
    if (delta.bounds_count(profile[x], n)) members.insert(x);
  }
  return AlmostPeriodSet{a, delta, std::move(members)};
}

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b) {
  require_same_group(a, b, "sumset");
  const bool a_small = a.size() <= b.size();
  const GroupSubset& small = a_small ? a : b;
  const GroupSubset& large = a_small ? b : a;
  GroupSubset out(a.group());
  if (small.empty()) return out;
  const Group& g = a.group();
  const bool word_kernel = g.is_elementary_two() || g.is_cyclic();
  const std::vector<Rank> large_elems = word_kernel ? std::vector<Rank>{} : large.elements();
  const std::vector<Rank> small_elems = small.elements();
  for (const Rank s : small_elems) {
    if (word_kernel) {
      out |= translate(large, s);
    } else {
      for (const Rank l : large_elems) out.insert(g.add(l, s));
    }
    if (out.is_full()) break;
  }
  return out;
}

GroupSubset difference_set(const GroupSubset& a, const GroupSubset& b) { return sumset(a, negate(b)); }

GroupSubset multiple_sumset(const GroupSubset& a, std::uint64_t k) {
  if (k == 0) throw InvalidArgument("multiple_sumset: k must be >= 1");
  GroupSubset cur = a;
  for (std::uint64_t i = 1; i < k && !cur.is_full() && !cur.empty(); ++i) cur = sumset(cur, a);
  return cur;
}

DoublingConfig DoublingConfig::for_delta(Rational delta) {
  const double d = delta.to_double();
  const double k = std::exp(std::pow(std::log(1.0 / d), 0.2));
  return DoublingConfig{std::max(2.0, k)};
}

DoublingTrace iterated_doubling(const GroupSubset& b, const DoublingConfig& config) {
  if (b.empty()) throw PreconditionViolated("iterated_doubling: B must be nonempty");
  DoublingTrace trace{config.growth, 1, {b.size()}, b, b};
  GroupSubset cur = b;
  for (;;) {
    GroupSubset next = sumset(cur, cur);
    trace.sizes.push_back(next.size());
    if (static_cast<double>(next.size()) <= config.growth * static_cast<double>(cur.size())) {
      trace.ell_b = std::move(cur);
      trace.two_ell_b = std::move(next);
      return trace;
    }
    cur = std::move(next);
    trace.ell *= 2;
  }
}

// ---------------------------------------------------------------------------
// Subgroup extraction

namespace {

// Members of <H, x> when that subgroup stays inside T; nullopt otherwise.
std::optional<GroupSubset> extend_inside(const GroupSubset& h, const std::vector<Rank>& h_elems, Rank x,
                                         const GroupSubset& t) {
  const Group& g = h.group();
  GroupSubset out = h;
  Rank m = x;
  while (!out.contains(m)) {
    for (const Rank e : h_elems) {
      const Rank y = g.add(e, m);
      if (!t.contains(y)) return std::nullopt;
      out.insert(y);
    }
    m = g.add(m, x);
  }
  return out;
}

class SubgroupSearch {
 public:
  SubgroupSearch(const GroupSubset& t, const Caps& caps) : t_(t), g_(t.group()), caps_(caps) {
    for (std::uint32_t d = 1; d <= g_.order(); ++d) {
      if (g_.order() % d == 0) divisors_.push_back(d);
    }
  }

  void seed(const Subgroup& s) {
    best_ = s.members();
    best_gens_.assign(s.generators().begin(), s.generators().end());
  }

  void run() {
    GroupSubset zero(g_);
    zero.insert(0);
    dfs(zero, {});
  }

  Subgroup result() const { return detail::SubgroupAccess::make(*best_, best_gens_); }

 private:
  std::size_t bound_for(std::size_t h_size, std::size_t reachable) const {
    std::size_t b = h_size;
    for (const auto d : divisors_) {
      if (d > reachable) break;
      if (d % h_size == 0) b = d;
    }
    return b;
  }

  void dfs(const GroupSubset& h, const std::vector<Rank>& gens) {
    if (++nodes_ > caps_.search_nodes) throw CapExceeded("max_subgroup_within: search node cap exceeded");
    visited_.insert(h);
    const std::size_t h_size = h.size();
    if (!best_ || h_size > best_->size()) {
      best_ = h;
      best_gens_ = gens;
    }
    const std::vector<Rank> h_elems = h.elements();
    GroupSubset covered = h;
    std::vector<std::pair<Rank, GroupSubset>> children;
    std::size_t reachable = h_size;
    t_.for_each([&](Rank x) {
      if (covered.contains(x)) return;
      for (const Rank e : h_elems) covered.insert(g_.add(e, x));
      auto k = extend_inside(h, h_elems, x, t_);
      if (!k) return;
      reachable += h_size;
      children.emplace_back(x, std::move(*k));
    });
    if (bound_for(h_size, reachable) <= best_->size()) return;
    for (auto& [x, k] : children) {
      if (visited_.contains(k)) continue;
      if (bound_for(k.size(), reachable) <= best_->size()) continue;
      std::vector<Rank> child_gens = gens;
      child_gens.push_back(x);
      dfs(k, child_gens);
    }
  }

  const GroupSubset& t_;
  const Group& g_;
  const Caps& caps_;
  std::vector<std::uint32_t> divisors_;
  std::optional<GroupSubset> best_;
  std::vector<Rank> best_gens_;
  std::unordered_set<GroupSubset, GroupSubsetHash> visited_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

Subgroup greedy_subgroup_within(const GroupSubset& t) {
  if (!t.contains(0)) throw PreconditionViolated("greedy_subgroup_within: 0 must belong to T");
  const Group& g = t.group();
  GroupSubset h(g);
  h.insert(0);
  std::vector<Rank> h_elems{0};
  std::vector<Rank> gens;
  t.for_each([&](Rank x) {
    if (h.contains(x)) return;
    if (auto k = extend_inside(h, h_elems, x, t)) {
      h = std::move(*k);
      h_elems = h.elements();
      gens.push_back(x);
    }
  });
  return detail::SubgroupAccess::make(std::move(h), std::move(gens));
}

Subgroup max_subgroup_within(const GroupSubset& t, const Caps& caps) {
  if (!t.contains(0)) throw PreconditionViolated("max_subgroup_within: 0 must belong to T");
  const Group& g = t.group();
  if (g.order() > caps.enumeration_order) {
    throw CapExceeded("max_subgroup_within: |G| = " + std::to_string(g.order()) + " exceeds cap");
  }
  if (t.is_full()) return whole_group(g);
  Subgroup greedy = greedy_subgroup_within(t);
  if (greedy.members() == t) return greedy;
  SubgroupSearch search(t, caps);
  search.seed(greedy);
  search.run();
  return search.result();
}

FillReport kneser_fill_check(const GroupSubset& a, std::uint64_t t) {
  if (a.empty()) throw PreconditionViolated("kneser_fill_check: A must be nonempty");
  if (t == 0) throw InvalidArgument("kneser_fill_check: t must be >= 1");
  const Group& g = a.group();
  FillReport report;
  report.t = t;
  const std::vector<Rank> elems = a.elements();
  report.generates = generated_subgroup(g, elems).size() == g.order();
  std::vector<Rank> diffs;
  diffs.reserve(elems.size());
  for (const Rank x : elems) diffs.push_back(g.sub(x, elems.front()));
  report.differences_generate = generated_subgroup(g, diffs).size() == g.order();
  report.large_enough = static_cast<std::uint64_t>(a.size()) * t >= g.order();
  GroupSubset cur = a;
  report.sizes.push_back(cur.size());
  for (std::uint64_t i = 2; i <= 2 * t; ++i) {
    if (!cur.is_full()) cur = sumset(cur, a);
    report.sizes.push_back(cur.size());
  }
  report.filled = cur.is_full();
  return report;
}

}  // namespace arreg
