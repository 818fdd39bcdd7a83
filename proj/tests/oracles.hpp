#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the library's algorithms beyond its value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "linking/core.hpp"

namespace linking::oracle {

using Vec = std::vector<TypeIndex>;

// Every vector in {0..n-1}^K, in lexicographic order.
inline std::vector<Vec> all_vectors(std::size_t n, std::size_t K) {
  std::vector<Vec> out;
  Vec v(K, 0);
  while (true) {
    out.push_back(v);
    std::size_t pos = K;
    while (pos > 0) {
      --pos;
      if (++v[pos] < n) break;
      v[pos] = 0;
      if (pos == 0) return out;
    }
    if (K == 0) return out;
  }
}

inline std::vector<std::int64_t> counts_of(const Vec& v, std::size_t n) {
  std::vector<std::int64_t> c(n, 0);
  for (auto t : v) ++c[t];
  return c;
}

// Quota-feasible messages by filtering the full cube.
inline std::vector<Vec> feasible_messages(const std::vector<std::int64_t>& quota) {
  std::int64_t K = 0;
  for (auto c : quota) K += c;
  std::vector<Vec> out;
  for (auto& v : all_vectors(quota.size(), static_cast<std::size_t>(K))) {
    if (counts_of(v, quota.size()) == quota) out.push_back(v);
  }
  return out;
}

inline std::size_t hamming(const Vec& a, const Vec& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

inline std::size_t min_hamming(const Vec& u, const std::vector<std::int64_t>& quota) {
  std::size_t best = u.size() + 1;
  for (const auto& m : feasible_messages(quota)) best = std::min(best, hamming(u, m));
  return best;
}

// Every count vector of n nonnegative integers summing to K.
inline std::vector<std::vector<std::int64_t>> compositions(std::size_t n, std::int64_t K) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> c(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == n) {
      c[i] = left;
      out.push_back(c);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      c[i] = x;
      self(self, i + 1, left - x);
    }
  };
  rec(rec, 0, K);
  return out;
}

inline Rational tv_sum_abs_half(const Distribution& p, const Distribution& q) {
  Rational s(0);
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] > q[i] ? p[i] - q[i] : q[i] - p[i];
  return s / 2;
}

// Minimum total-variation distance from `prior` over all count vectors summing to K.
inline Rational best_quota_tv(const Distribution& prior, std::int64_t K) {
  Rational best(2);
  for (const auto& c : compositions(prior.size(), K)) {
    Distribution q;
    for (auto x : c) q.emplace_back(x, K);
    best = std::min(best, tv_sum_abs_half(prior, q));
  }
  return best;
}

// E|X/K - 1/2| for X ~ Binomial(K, 1/2), summed from the pmf.
inline double binomial_abs_deviation(std::int64_t K) {
  double total = 0.0;
  for (std::int64_t x = 0; x <= K; ++x) {
    const double log_pmf = std::lgamma(K + 1.0) - std::lgamma(x + 1.0) - std::lgamma(K - x + 1.0) -
                           static_cast<double>(K) * std::log(2.0);
    total += std::exp(log_pmf) * std::abs(static_cast<double>(x) / static_cast<double>(K) - 0.5);
  }
  return total;
}

// E[#lies] of a minimal-lie strategy, three equally likely types, K = 3, quota (1,1,1).
inline double uniform_three_expected_lies() {
  double total = 0.0;
  const auto vectors = all_vectors(3, 3);
  for (const auto& v : vectors) {
    for (auto c : counts_of(v, 3)) total += static_cast<double>(std::max<std::int64_t>(0, c - 1));
  }
  return total / static_cast<double>(vectors.size());
}

// Σ_k Σ_d f(m^k)(d) u(d|u^k) for point-mass f given as decision per type.
inline double point_mass_payoff(const Problem& p, const std::vector<std::size_t>& decision_of,
                                const Vec& truth, const Vec& report) {
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) total += p.utility(decision_of[report[k]], truth[k]);
  return total;
}

inline Vec random_vector(std::mt19937_64& rng, std::size_t n, std::size_t K) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  Vec v(K);
  for (auto& t : v) t = pick(rng);
  return v;
}

// Counts of K uniform balls in n bins.
inline std::vector<std::int64_t> random_quota(std::mt19937_64& rng, std::size_t n, std::size_t K) {
  return counts_of(random_vector(rng, n, K), n);
}

// Types "A".., decisions "a".., uniform prior, utilities drawn from
// {0, 1/4, ..., max_quarters/4} so every payoff sum is exact in double.
inline Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t num_decisions,
                              int max_quarters = 16) {
  std::uniform_int_distribution<int> quarters(0, max_quarters);
  RawProblem raw;
  for (std::size_t d = 0; d < num_decisions; ++d) raw.decisions.push_back(std::string(1, char('a' + d)));
  for (std::size_t t = 0; t < n; ++t) {
    raw.types.push_back(std::string(1, char('A' + t)));
    raw.prior.push_back("1/" + std::to_string(n));
  }
  for (const auto& t : raw.types)
    for (const auto& d : raw.decisions) raw.utility[t][d] = quarters(rng) / 4.0;
  return validate_problem(raw);
}

// A random permutation of v with the same counts.
inline Vec shuffled(Vec v, std::mt19937_64& rng) {
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

}  // namespace linking::oracle
