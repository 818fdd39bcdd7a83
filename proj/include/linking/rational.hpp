#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74's mixed rational/integer operator== recurses forever under
// C++20 rewritten comparisons. Exact non-template overloads win resolution.
namespace boost {

#define LINKING_RATIONAL_EQ(Int)                                                     \
  inline bool operator==(const rational<std::int64_t>& a, Int b) {                   \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);     \
  }                                                                                  \
  inline bool operator==(Int b, const rational<std::int64_t>& a) { return a == b; }   \
  inline bool operator!=(const rational<std::int64_t>& a, Int b) { return !(a == b); } \
  inline bool operator!=(Int b, const rational<std::int64_t>& a) { return !(a == b); }

LINKING_RATIONAL_EQ(int)
LINKING_RATIONAL_EQ(long)
LINKING_RATIONAL_EQ(long long)

#undef LINKING_RATIONAL_EQ

}  // namespace boost

namespace linking {

/// Exact probability / distance value. Denominators stay small in practice
/// (they divide K times the prior's common denominator).
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", an integer, or a finite decimal such as "0.25".
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline Rational positive_part(const Rational& r) {
  return r > 0 ? r : Rational(0);
}

}  // namespace linking
