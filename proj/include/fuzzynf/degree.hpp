#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fnf {

/// Exact membership degree in Q ∩ [0,1], always stored fully reduced.
class Degree {
 public:
  constexpr Degree() = default;

  /// Throws std::invalid_argument unless 0 <= num/den <= 1 and den != 0.
  Degree(std::int64_t num, std::int64_t den);

  static constexpr Degree zero() { return Degree(); }
  static Degree one() { return Degree(1, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }

  /// "0", "1" or "p/q".
  std::string to_string() const;

  /// Accepts "p", "p/q"; throws std::invalid_argument on malformed or out-of-range text.
  static Degree parse(std::string_view text);

  friend bool operator==(const Degree& a, const Degree& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace fnf
