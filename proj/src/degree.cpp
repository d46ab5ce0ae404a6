#include "fuzzynf/degree.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace fnf {

Degree::Degree(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("degree with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num < 0 || num > den) {
    throw std::invalid_argument("degree " + std::to_string(num) + "/" + std::to_string(den) +
                                " outside [0,1]");
  }
  std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Degree::to_string() const {
  if (num_ == 0) return "0";
  if (num_ == den_) return "1";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

namespace {

std::int64_t parse_nat(std::string_view s, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw std::invalid_argument("malformed degree literal '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Degree Degree::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Degree(parse_nat(text, text), 1);
  return Degree(parse_nat(text.substr(0, slash), text), parse_nat(text.substr(slash + 1), text));
}

std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
  auto lhs = static_cast<__int128>(a.num_) * b.den_;
  auto rhs = static_cast<__int128>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace fnf
