#include "linking/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace linking {
namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("malformed rational: empty string");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = parse_int(trim(s.substr(0, slash)), text);
    const std::int64_t den = parse_int(trim(s.substr(slash + 1)), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15 ||
        frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    }
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative || (!int_part.empty() && int_part.front() == '+')) int_part.remove_prefix(1);
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    if (whole < 0) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t frac = parse_int(frac_part, text);
    if (whole > (std::numeric_limits<std::int64_t>::max() - frac) / scale) {
      throw std::invalid_argument("rational out of range: '" + std::string(text) + "'");
    }
    Rational r(whole * scale + frac, scale);
    return negative ? -r : r;
  }

  return Rational(parse_int(s, text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace linking
