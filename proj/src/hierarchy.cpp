#include "fuzzynf/hierarchy.hpp"

#include <algorithm>

namespace fnf {

namespace {

const std::vector<HFSet>& no_children() {
  static const std::vector<HFSet> empty;
  return empty;
}

HFSet parse_set(std::string_view s, std::size_t& i) {
  if (i >= s.size() || s[i] != '{') throw std::invalid_argument("expected '{' in set literal");
  ++i;
  std::vector<HFSet> kids;
  while (i < s.size() && s[i] == ' ') ++i;
  if (i < s.size() && s[i] == '}') {
    ++i;
    return HFSet{};
  }
  while (true) {
    kids.push_back(parse_set(s, i));
    while (i < s.size() && s[i] == ' ') ++i;
    if (i < s.size() && s[i] == ',') {
      ++i;
      while (i < s.size() && s[i] == ' ') ++i;
      continue;
    }
    if (i < s.size() && s[i] == '}') {
      ++i;
      return HFSet::from_children(std::move(kids));
    }
    throw std::invalid_argument("malformed set literal '" + std::string(s) + "'");
  }
}

}  // namespace

HFSet HFSet::from_children(std::vector<HFSet> children) {
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  HFSet s;
  if (!children.empty()) s.children_ = std::make_shared<const std::vector<HFSet>>(std::move(children));
  return s;
}

HFSet HFSet::parse(std::string_view text) {
  std::size_t i = 0;
  HFSet s = parse_set(text, i);
  if (i != text.size()) throw std::invalid_argument("trailing text in set literal '" + std::string(text) + "'");
  return s;
}

const std::vector<HFSet>& HFSet::children() const { return children_ ? *children_ : no_children(); }

bool HFSet::contains(const HFSet& x) const {
  const auto& c = children();
  return std::binary_search(c.begin(), c.end(), x);
}

std::size_t HFSet::rank() const {
  std::size_t r = 0;
  for (const auto& c : children()) r = std::max(r, c.rank() + 1);
  return r;
}

std::optional<std::uint64_t> HFSet::ackermann_code() const {
  std::uint64_t code = 0;
  for (const auto& c : children()) {
    auto k = c.ackermann_code();
    if (!k || *k >= 64) return std::nullopt;
    code |= std::uint64_t{1} << *k;
  }
  return code;
}

std::string HFSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& c : children()) {
    if (!first) out += ',';
    first = false;
    out += c.to_string();
  }
  return out + "}";
}

bool operator==(const HFSet& a, const HFSet& b) {
  if (a.children_ == b.children_) return true;
  return a.children() == b.children();
}

// Ackermann order: the set holding the larger element of the symmetric difference is larger.
std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  const auto& x = a.children();
  const auto& y = b.children();
  auto i = x.rbegin(), j = y.rbegin();
  for (; i != x.rend() && j != y.rend(); ++i, ++j) {
    auto c = *i <=> *j;
    if (c != 0) return c;
  }
  if (i != x.rend()) return std::strong_ordering::greater;
  if (j != y.rend()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

bool crisp_in(const HFSet& a, const HFSet& b) { return b.contains(a); }

std::optional<std::size_t> HFUniverse::index_of(const HFSet& s) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), s);
  if (it == elements_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool HFUniverse::member(std::size_t a, std::size_t b) const {
  const auto& m = members_.at(b);
  return std::binary_search(m.begin(), m.end(), a);
}

HFUniverse build_vn(unsigned n, bool allow_large) {
  if (n > kLargeLevelCap || (n > kDefaultLevelCap && !allow_large)) {
    throw CapExceeded("level " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(allow_large ? kLargeLevelCap : kDefaultLevelCap) +
                      (allow_large ? "" : " (larger levels need the large-level override)"));
  }
  HFUniverse u;
  u.level_ = n;
  // V_{m+1} = P(V_m); with V_m in Ackermann order the subset masks enumerate V_{m+1} in order.
  std::vector<HFSet> prev;
  std::vector<std::vector<std::size_t>> prev_members;
  for (unsigned m = 0; m < n; ++m) {
    std::vector<HFSet> next;
    std::vector<std::vector<std::size_t>> next_members;
    std::uint64_t count = std::uint64_t{1} << prev.size();
    next.reserve(count);
    next_members.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      std::vector<HFSet> kids;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (mask >> i & 1u) {
          kids.push_back(prev[i]);
          idx.push_back(i);
        }
      }
      next.push_back(HFSet::from_children(std::move(kids)));
      next_members.push_back(std::move(idx));
    }
    prev = std::move(next);
    prev_members = std::move(next_members);
  }
  // Every element of V_m is also an element of V_{m+1} at the same index, so the
  // child indices computed against the previous level remain valid.
  u.elements_ = std::move(prev);
  u.members_ = std::move(prev_members);
  return u;
}

bool DegreeGrid::contains(const Degree& d) const {
  return std::binary_search(values_.begin(), values_.end(), d);
}

DegreeGrid build_grid(unsigned k) {
  if (k == 0) throw std::invalid_argument("grid resolution must be at least 1");
  DegreeGrid g;
  g.resolution_ = k;
  for (unsigned i = 0; i <= k; ++i) g.values_.emplace_back(i, k);
  return g;
}

}  // namespace fnf
