#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

namespace linking::detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// C(n, k), saturated at kSaturated.
inline std::uint64_t saturating_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // r * m / i is exact; dividing out gcd(r, i) first leaves i / g dividing m.
    const auto m = static_cast<std::uint64_t>(n - k + i);
    const auto g = std::gcd(r, static_cast<std::uint64_t>(i));
    r = saturating_mul(r / g, m / (static_cast<std::uint64_t>(i) / g));
    if (r == kSaturated) return kSaturated;
  }
  return r;
}

}  // namespace linking::detail
