#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "linking/core.hpp"
#include "linking/plan.hpp"

namespace linking {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::size_t kNaiveScanMaxK = 12;

/// The closest approximation P_i^K of `prior` whose probabilities are
/// multiples of 1/K, returned as counts. Largest-remainder rounding: floor
/// K*p, then leftover units go to the largest fractional remainders, ties
/// to the lower canonical type index.
Quota compute_quota(const Distribution& prior, std::int64_t K);

/// Minimum number of slots in which any quota-feasible report must differ
/// from `truth`: K * d(marg u, q/K) = sum_t (count_t(u) - q_t)_+ .
std::int64_t min_lie_count(const PreferenceVector& truth, const Quota& quota);

/// The bound of the relaxed criterion: (#U_i - 1) * min_lie_count.
std::int64_t star_bound(const PreferenceVector& truth, const Quota& quota);

/// Size of the minimal-lie message set, saturated at UINT64_MAX.
std::uint64_t count_minimal_lie_messages(const PreferenceVector& truth, const Quota& quota);

/// Every message attaining min_lie_count, sorted in canonical (lexicographic)
/// order. Throws CapExceeded when the set is larger than `cap`; use
/// canonical_min_lie_message or sample_minimal_lie_message instead.
std::vector<Message> minimal_lie_messages(const PreferenceVector& truth, const Quota& quota,
                                          std::uint64_t cap = kDefaultEnumerationCap);

/// The plan of the canonical pure approximately truthful strategy: keep
/// min(count_t, q_t) slots truthful for every type and route surplus types
/// to deficit types in canonical order (northwest corner).
TransportPlan canonical_min_lie_plan(const PreferenceVector& truth, const Quota& quota);

/// realize_plan(canonical_min_lie_plan(...)). Label-free, lies exactly
/// min_lie_count times, never enumerates.
Message canonical_min_lie_message(const PreferenceVector& truth, const Quota& quota);

/// Uniform draw from minimal_lie_messages without enumerating it: a uniform
/// subset of surplus slots per type, then a uniform arrangement of the
/// missing reports over those slots.
Message sample_minimal_lie_message(const PreferenceVector& truth, const Quota& quota,
                                   std::mt19937_64& rng);

/// Seeded sampler realising the uniform mixture over minimal-lie messages
/// for one truth vector. Not thread-safe; give each caller its own.
class MinimalLieSampler {
 public:
  MinimalLieSampler(PreferenceVector truth, Quota quota, std::uint64_t seed)
      : truth_(std::move(truth)), quota_(std::move(quota)), rng_(seed) {}

  Message operator()() { return sample_minimal_lie_message(truth_, quota_, rng_); }

 private:
  PreferenceVector truth_;
  Quota quota_;
  std::mt19937_64 rng_;
};

/// A permutation-truthful report that is generally not approximately
/// truthful: each unit lie t -> r of the canonical plan is stretched into a
/// chain t -> w_1 -> ... -> r through every balanced type w with truthful
/// slots left, visited in canonical order. The lie graph stays acyclic and
/// total lies stay within star_bound.
Message chain_message(const PreferenceVector& truth, const Quota& quota);

/// Lies exactly min_lie_count times.
bool is_approx_truthful(const PreferenceVector& truth, const Message& report);

/// Lies at most (#U_i - 1) * K * d(marg u, quota/K) times.
bool is_approx_truthful_star(const PreferenceVector& truth, const Message& report);

/// Direct scan of every nonempty subset S of slots: if the reports on S are
/// a rearrangement of the truths on S, they must coincide slot by slot.
/// Exponential in K; throws CapExceeded when K > max_k.
bool is_permutation_truthful_naive(const PreferenceVector& truth, const PreferenceVector& report,
                                   std::size_t max_k = kNaiveScanMaxK);

/// Same verdict in O(K + #U_i^2): the lie graph (one edge u^k -> m^k per
/// lying slot) has no directed cycle.
bool is_permutation_truthful(const PreferenceVector& truth, const PreferenceVector& report);

}  // namespace linking
