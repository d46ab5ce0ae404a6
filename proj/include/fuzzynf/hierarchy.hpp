#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzynf/degree.hpp"

namespace fnf {

/// A hereditarily finite set in sorted-children normal form.
///
/// Children are kept strictly increasing in the Ackermann order (the order of
/// the codes  code(s) = sum of 2^code(c) over children c), so two sets are equal
/// exactly when their child lists are. Copies share storage.
class HFSet {
 public:
  HFSet() = default;  // the empty set

  static HFSet from_children(std::vector<HFSet> children);

  /// Parses the nested-brace rendering, e.g. "{{},{{}}}". Throws std::invalid_argument.
  static HFSet parse(std::string_view text);

  const std::vector<HFSet>& children() const;
  std::size_t size() const { return children().size(); }
  bool empty() const { return size() == 0; }
  bool contains(const HFSet& x) const;

  /// rank(∅) = 0, rank(s) = max over children of rank + 1.
  std::size_t rank() const;

  /// Ackermann code, when it fits in 64 bits.
  std::optional<std::uint64_t> ackermann_code() const;

  std::string to_string() const;

  friend bool operator==(const HFSet& a, const HFSet& b);
  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);

 private:
  std::shared_ptr<const std::vector<HFSet>> children_;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kDefaultLevelCap = 4;
inline constexpr unsigned kLargeLevelCap = 5;

/// V_n: every hereditarily finite set of rank < n, in Ackermann order.
class HFUniverse {
 public:
  unsigned level() const { return level_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<HFSet>& elements() const { return elements_; }
  const HFSet& element(std::size_t i) const { return elements_.at(i); }

  std::optional<std::size_t> index_of(const HFSet& s) const;

  /// Crisp membership between elements given by index.
  bool member(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& members_of(std::size_t b) const { return members_.at(b); }

 private:
  friend HFUniverse build_vn(unsigned n, bool allow_large);

  unsigned level_ = 0;
  std::vector<HFSet> elements_;
  std::vector<std::vector<std::size_t>> members_;  // sorted child indices
};

/// Builds V_n. n above kDefaultLevelCap needs allow_large, and n above
/// kLargeLevelCap is always refused.
HFUniverse build_vn(unsigned n, bool allow_large = false);

/// a ∈ b.
bool crisp_in(const HFSet& a, const HFSet& b);

/// The finite degree set {0, 1/k, ..., 1}.
class DegreeGrid {
 public:
  unsigned resolution() const { return resolution_; }
  const std::vector<Degree>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool contains(const Degree& d) const;

 private:
  friend DegreeGrid build_grid(unsigned k);

  unsigned resolution_ = 1;
  std::vector<Degree> values_;
};

/// Throws std::invalid_argument for k = 0.
DegreeGrid build_grid(unsigned k);

}  // namespace fnf
