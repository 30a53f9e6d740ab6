#include "arreg/group.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "arreg/errors.hpp"

namespace arreg {

namespace {
constexpr std::uint32_t kTableOrder = 1024;  // full Cayley table up to this order
}

struct Group::Impl {
  std::vector<std::uint32_t> moduli;
  std::vector<std::uint32_t> strides;
  std::uint32_t order = 1;
  std::uint64_t exponent = 1;
  bool elementary_two = false;
  bool cyclic = false;
  std::vector<Rank> negation;

  mutable std::once_flag table_once;
  mutable std::vector<std::uint16_t> table;

  Rank add_digits(Rank a, Rank b) const {
    Rank r = 0;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      const std::uint32_t m = moduli[i];
      const std::uint32_t s = strides[i];
      std::uint32_t d = (a / s) % m + (b / s) % m;
      if (d >= m) d -= m;
      r += d * s;
    }
    return r;
  }

  Rank add(Rank a, Rank b) const {
    if (elementary_two) return a ^ b;
    if (cyclic) {
      const Rank s = a + b;
      return s >= order ? s - order : s;
    }
    if (order <= kTableOrder) {
      std::call_once(table_once, [this] {
        table.resize(static_cast<std::size_t>(order) * order);
        for (Rank x = 0; x < order; ++x) {
          for (Rank y = 0; y < order; ++y) {
            table[static_cast<std::size_t>(x) * order + y] = static_cast<std::uint16_t>(add_digits(x, y));
          }
        }
      });
      return table[static_cast<std::size_t>(a) * order + b];
    }
    return add_digits(a, b);
  }
};

Group::Group(std::vector<std::uint32_t> moduli, const Caps& caps) {
  if (moduli.empty()) throw InvalidArgument("group: moduli list is empty");
  auto impl = std::make_shared<Impl>();
  std::uint64_t order = 1;
  std::uint64_t exponent = 1;
  for (const std::uint32_t m : moduli) {
    if (m < 2) throw InvalidArgument("group: every modulus must be >= 2");
    impl->strides.push_back(static_cast<std::uint32_t>(order));
    order *= m;
    if (order > (std::uint64_t{1} << caps.rank_bits)) {
      throw CapExceeded("group: order exceeds 2^" + std::to_string(caps.rank_bits));
    }
    exponent = std::lcm(exponent, static_cast<std::uint64_t>(m));
  }
  impl->moduli = std::move(moduli);
  impl->order = static_cast<std::uint32_t>(order);
  impl->exponent = exponent;
  impl->elementary_two = std::all_of(impl->moduli.begin(), impl->moduli.end(), [](auto m) { return m == 2; });
  impl->cyclic = impl->moduli.size() == 1;
  impl->negation.resize(order);
  for (Rank r = 0; r < impl->order; ++r) {
    Rank n = 0;
    for (std::size_t i = 0; i < impl->moduli.size(); ++i) {
      const std::uint32_t m = impl->moduli[i];
      const std::uint32_t d = (r / impl->strides[i]) % m;
      n += ((m - d) % m) * impl->strides[i];
    }
    impl->negation[r] = n;
  }
  impl_ = std::move(impl);
}

std::span<const std::uint32_t> Group::moduli() const noexcept { return impl_->moduli; }
std::uint32_t Group::order() const noexcept { return impl_->order; }
std::uint64_t Group::exponent() const noexcept { return impl_->exponent; }
bool Group::is_elementary_two() const noexcept { return impl_->elementary_two; }
bool Group::is_cyclic() const noexcept { return impl_->cyclic; }

void Group::check_rank(Rank r) const {
  if (r >= impl_->order) {
    throw InvalidArgument("group: rank " + std::to_string(r) + " out of range for " + name());
  }
}

Rank Group::add(Rank a, Rank b) const { return impl_->add(a, b); }
Rank Group::neg(Rank a) const { return impl_->negation[a]; }

Rank Group::multiple(Rank a, std::uint64_t k) const {
  k %= impl_->exponent;
  Rank result = 0;
  Rank base = a;
  while (k) {
    if (k & 1) result = add(result, base);
    base = add(base, base);
    k >>= 1;
  }
  return result;
}

std::vector<std::uint32_t> Group::coordinates(Rank r) const {
  check_rank(r);
  std::vector<std::uint32_t> out(impl_->moduli.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (r / impl_->strides[i]) % impl_->moduli[i];
  return out;
}

Rank Group::from_coordinates(std::span<const std::uint32_t> coords) const {
  if (coords.size() != impl_->moduli.size()) {
    throw InvalidArgument("group: expected " + std::to_string(impl_->moduli.size()) + " coordinates");
  }
  Rank r = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= impl_->moduli[i]) throw InvalidArgument("group: coordinate out of range");
    r += coords[i] * impl_->strides[i];
  }
  return r;
}

std::string Group::element_text(Rank r) const {
  std::string out;
  for (const auto c : coordinates(r)) {
    if (!out.empty()) out += ',';
    out += std::to_string(c);
  }
  return out;
}

Rank Group::parse_element(const std::string& text) const {
  std::vector<std::uint32_t> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      coords.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw InvalidArgument("group: bad element text '" + text + "'");
    }
  }
  return from_coordinates(coords);
}

std::string Group::name() const {
  std::string out;
  for (const auto m : impl_->moduli) {
    if (!out.empty()) out += 'x';
    out += "Z" + std::to_string(m);
  }
  return out;
}

bool operator==(const Group& a, const Group& b) noexcept {
  return a.impl_ == b.impl_ || a.impl_->moduli == b.impl_->moduli;
}

std::vector<std::vector<std::uint32_t>> abelian_group_moduli(std::uint32_t n) {
  // Invariant factors m_0 | m_1 | ... with product n.
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  auto rec = [&](auto&& self, std::uint32_t remaining, std::uint32_t prev) -> void {
    if (remaining == 1) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    for (std::uint32_t m = prev; m <= remaining; m += prev) {
      if (remaining % m != 0) continue;
      // the remaining factors are multiples of m, so m^k must divide remaining
      const std::uint32_t rest = remaining / m;
      if (rest != 1 && rest % m != 0) continue;
      cur.push_back(m);
      self(self, rest, m);
      cur.pop_back();
    }
  };
  if (n < 2) return out;
  for (std::uint32_t m = 2; m <= n; ++m) {
    if (n % m != 0) continue;
    const std::uint32_t rest = n / m;
    if (rest != 1 && rest % m != 0) continue;
    cur.push_back(m);
    rec(rec, rest, m);
    cur.pop_back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// GroupSubset

GroupSubset::GroupSubset(Group group)
    : group_(std::move(group)), words_((group_.order() + 63) / 64, 0) {}

GroupSubset GroupSubset::full(Group group) {
  GroupSubset s(std::move(group));
  const std::uint32_t n = s.universe();
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (n % 64) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return s;
}

GroupSubset GroupSubset::from_ranks(Group group, std::span<const Rank> ranks) {
  GroupSubset s(std::move(group));
  for (const Rank r : ranks) {
    s.group_.check_rank(r);
    s.insert(r);
  }
  return s;
}

GroupSubset GroupSubset::from_words(Group group, std::vector<std::uint64_t> words) {
  GroupSubset s(std::move(group));
  if (words.size() != s.words_.size()) throw InvalidArgument("subset: word count does not match |G|");
  const std::uint32_t n = s.universe();
  if (n % 64 && (words.back() >> (n % 64)) != 0) throw InvalidArgument("subset: bits set beyond |G|");
  s.words_ = std::move(words);
  return s;
}

std::size_t GroupSubset::size() const noexcept {
  std::size_t c = 0;
  for (const auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool GroupSubset::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<Rank> GroupSubset::elements() const {
  std::vector<Rank> out;
  out.reserve(size());
  for_each([&](Rank r) { out.push_back(r); });
  return out;
}

std::optional<Rank> GroupSubset::min_element() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return static_cast<Rank>(w * 64 + std::countr_zero(words_[w]));
  }
  return std::nullopt;
}

void GroupSubset::require_same_group(const GroupSubset& o) const {
  if (!(group_ == o.group_)) throw GroupMismatch("subsets of " + group_.name() + " and " + o.group_.name());
}

bool GroupSubset::is_subset_of(const GroupSubset& other) const {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool GroupSubset::intersects(const GroupSubset& other) const {
  require_same_group(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

GroupSubset& GroupSubset::operator|=(const GroupSubset& o) {
  require_same_group(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

GroupSubset& GroupSubset::operator&=(const GroupSubset& o) {
  require_same_group(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

GroupSubset& GroupSubset::operator^=(const GroupSubset& o) {
  require_same_group(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

GroupSubset& GroupSubset::subtract(const GroupSubset& o) {
  require_same_group(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

GroupSubset GroupSubset::complement() const {
  GroupSubset out = full(group_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~words_[i];
  return out;
}

bool operator==(const GroupSubset& a, const GroupSubset& b) noexcept {
  return a.group_ == b.group_ && a.words_ == b.words_;
}

std::size_t GroupSubset::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull ^ universe();
  for (const auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

bool lex_less(const GroupSubset& a, const GroupSubset& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  if (wa.size() != wb.size()) throw GroupMismatch("lex_less: different groups");
  for (std::size_t i = 0; i < wa.size(); ++i) {
    const std::uint64_t diff = wa[i] ^ wb[i];
    if (diff) return (wa[i] >> std::countr_zero(diff)) & 1u;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Subgroups

namespace {

// members of <H, x> given H's member list.
GroupSubset extend_members(const GroupSubset& h, const std::vector<Rank>& h_elems, Rank x) {
  const Group& g = h.group();
  GroupSubset out = h;
  Rank m = x;
  while (!out.contains(m)) {
    for (const Rank e : h_elems) out.insert(g.add(e, m));
    m = g.add(m, x);
  }
  return out;
}

std::vector<Rank> greedy_generators(const GroupSubset& members) {
  const Group& g = members.group();
  GroupSubset cur(g);
  cur.insert(0);
  std::vector<Rank> elems{0};
  std::vector<Rank> gens;
  members.for_each([&](Rank r) {
    if (cur.contains(r)) return;
    cur = extend_members(cur, elems, r);
    elems = cur.elements();
    gens.push_back(r);
  });
  return gens;
}

}  // namespace

Subgroup::Subgroup(GroupSubset members, std::vector<Rank> generators)
    : members_(std::move(members)), generators_(std::move(generators)), size_(members_.size()) {}

bool is_subgroup(const GroupSubset& s) {
  if (!s.contains(0)) return false;
  const Group& g = s.group();
  const std::vector<Rank> elems = s.elements();
  if (g.order() % elems.size() != 0) return false;
  for (const Rank a : elems) {
    if (!s.contains(g.neg(a))) return false;
    for (const Rank b : elems) {
      if (!s.contains(g.add(a, b))) return false;
    }
  }
  return true;
}

Subgroup Subgroup::from_members(GroupSubset members) {
  if (!is_subgroup(members)) throw InvalidArgument("subgroup: set is not closed under addition");
  auto gens = greedy_generators(members);
  return Subgroup(std::move(members), std::move(gens));
}

Subgroup generated_subgroup(const Group& g, std::span<const Rank> gens) {
  GroupSubset cur(g);
  cur.insert(0);
  std::vector<Rank> elems{0};
  for (const Rank x : gens) {
    g.check_rank(x);
    if (cur.contains(x)) continue;
    cur = extend_members(cur, elems, x);
    elems = cur.elements();
  }
  return detail::SubgroupAccess::make(std::move(cur), std::vector<Rank>(gens.begin(), gens.end()));
}

Subgroup trivial_subgroup(const Group& g) { return generated_subgroup(g, {}); }

Subgroup whole_group(const Group& g) {
  std::vector<Rank> gens;
  for (std::size_t i = 0; i < g.rank_count(); ++i) {
    std::vector<std::uint32_t> c(g.rank_count(), 0);
    c[i] = 1;
    gens.push_back(g.from_coordinates(c));
  }
  return detail::SubgroupAccess::make(GroupSubset::full(g), std::move(gens));
}

Subgroup extend_subgroup(const Subgroup& h, Rank x) {
  h.group().check_rank(x);
  std::vector<Rank> gens(h.generators().begin(), h.generators().end());
  if (h.contains(x)) return h;
  gens.push_back(x);
  return detail::SubgroupAccess::make(extend_members(h.members(), h.members().elements(), x), std::move(gens));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  GroupSubset m = a.members() & b.members();
  auto gens = greedy_generators(m);
  return detail::SubgroupAccess::make(std::move(m), std::move(gens));
}

std::vector<Subgroup> enumerate_subgroups(const Group& g, std::optional<std::uint64_t> max_index, const Caps& caps) {
  if (g.order() > caps.enumeration_order) {
    throw CapExceeded("enumerate_subgroups: |G| = " + std::to_string(g.order()) + " exceeds cap " +
                      std::to_string(caps.enumeration_order));
  }
  std::vector<Subgroup> found;
  std::unordered_map<GroupSubset, std::size_t, GroupSubsetHash> seen;
  found.push_back(trivial_subgroup(g));
  seen.emplace(found.front().members(), 0);

  // Breadth-first: every subgroup is <H, x> for a subgroup H one step
  // smaller, so expanding each discovered subgroup by one coset
  // representative per coset reaches them all.
  for (std::size_t head = 0; head < found.size(); ++head) {
    const Subgroup h = found[head];
    const std::vector<Rank> h_elems = h.members().elements();
    GroupSubset covered = h.members();
    for (Rank x = 0; x < g.order(); ++x) {
      if (covered.contains(x)) continue;
      for (const Rank e : h_elems) covered.insert(g.add(e, x));
      GroupSubset k = extend_members(h.members(), h_elems, x);
      if (seen.contains(k)) continue;
      if (found.size() >= caps.max_subgroups) {
        throw CapExceeded("enumerate_subgroups: more than " + std::to_string(caps.max_subgroups) + " subgroups");
      }
      std::vector<Rank> gens(h.generators().begin(), h.generators().end());
      gens.push_back(x);
      seen.emplace(k, found.size());
      found.push_back(detail::SubgroupAccess::make(std::move(k), std::move(gens)));
    }
  }

  if (max_index) {
    std::erase_if(found, [&](const Subgroup& s) { return s.index() > *max_index; });
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return lex_less(a.members(), b.members());
  });
  return found;
}

std::vector<std::uint32_t> coset_ids(const Subgroup& h) {
  const Group& g = h.group();
  const std::vector<Rank> h_elems = h.members().elements();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> ids(g.order(), kUnset);
  std::uint32_t next = 0;
  for (Rank x = 0; x < g.order(); ++x) {
    if (ids[x] != kUnset) continue;
    for (const Rank e : h_elems) ids[g.add(x, e)] = next;
    ++next;
  }
  return ids;
}

std::vector<GroupSubset> cosets(const Subgroup& h) {
  const auto ids = coset_ids(h);
  std::vector<GroupSubset> out(h.index(), GroupSubset(h.group()));
  for (Rank x = 0; x < ids.size(); ++x) out[ids[x]].insert(x);
  return out;
}

std::optional<Subgroup> find_complement(const Group& g, const Subgroup& h, const Caps& caps) {
  if (!(h.group() == g)) throw GroupMismatch("find_complement: subgroup of a different group");
  if (h.size() == 1) return whole_group(g);
  if (h.size() == g.order()) return trivial_subgroup(g);
  const std::size_t want = g.order() / h.size();
  GroupSubset zero(g);
  zero.insert(0);
  for (auto& k : enumerate_subgroups(g, h.size(), caps)) {
    if (k.size() != want) continue;
    if ((k.members() & h.members()) == zero) return std::move(k);
  }
  return std::nullopt;
}

}  // namespace arreg
