#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "linking/core.hpp"
#include "linking/optimize.hpp"

namespace linking {

enum class Strategy {
  kCanonicalMinLie,          // "canonical-min-lie"
  kUniformMinLie,            // "uniform-min-lie"
  kBestResponse,             // "best-response"
  kPermutationTruthfulChain  // "custom-permutation-truthful"
};

/// Throws ValidationError on an unknown name.
Strategy parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);

inline constexpr std::int64_t kDefaultMaxK = 10'000'000;

struct SimConfig {
  Problem problem;
  std::vector<std::int64_t> ks;
  std::int64_t replications = 1;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kCanonicalMinLie;
  /// Defaults to SocialChoiceFunction::dictatorial(problem).
  std::optional<SocialChoiceFunction> social_choice;
  unsigned workers = 1;
  std::int64_t max_k = kDefaultMaxK;
};

/// Statistics for one K. Standard errors are NaN when replications == 1.
struct KStats {
  std::int64_t K = 0;
  std::int64_t replications = 0;
  double lie_fraction = 0.0;  // E[#lies] / K
  double lie_fraction_se = 0.0;
  double max_slot_lie_prob = 0.0;  // max_k P(report^k != u^k)
  double mean_tv_to_quota = 0.0;   // E[d(marg u, P^K)]
  double mean_tv_to_quota_se = 0.0;
  double mean_tv_to_prior = 0.0;   // E[d(marg u, P)]
  Rational quota_tv_to_prior;      // d(P, P^K)
  double star_bound = 0.0;         // (#U - 1) (E[d(marg u, P)] + d(P, P^K))
  double efficiency_gap = 0.0;     // max_k P(f(report^k) != f(u^k))
  double pooled_efficiency_gap = 0.0;
  std::int64_t star_violations = 0;  // episodes lying more than (#U-1) K d(marg u, P^K)
  /// lie_fraction <= (#U - 1) * mean_tv_to_quota + 3 * lie_fraction_se.
  bool bound_check_passed = true;
};

struct SimStats {
  Strategy strategy = Strategy::kCanonicalMinLie;
  std::uint64_t seed = 0;
  std::vector<KStats> per_k;
};

/// Seed of the RNG substream for one episode, a SplitMix64 mix of
/// (seed, K, replication). Independent of worker scheduling.
std::uint64_t substream_seed(std::uint64_t seed, std::int64_t K, std::int64_t replication);

/// K i.i.d. draws from `prior`, sampled exactly on the prior's common
/// denominator.
PreferenceVector sample_type_vector(const Distribution& prior, std::int64_t K,
                                    std::mt19937_64& rng);

/// g^K: the lottery f(m^k) for every problem k.
std::vector<Distribution> apply_mechanism(const PreferenceVector& report,
                                          const SocialChoiceFunction& f);

/// The report a built-in strategy sends for `truth`. Only the uniform
/// strategy consumes `rng`.
Message strategy_report(Strategy strategy, const PreferenceVector& truth, const Quota& quota,
                        const SocialChoiceFunction& f, const Problem& problem,
                        std::mt19937_64& rng);

/// Runs `replications` seeded episodes per K and aggregates them in
/// replication order, so the result is bit-identical for any worker count.
/// Throws ValidationError on a bad config and CapExceeded when a K exceeds
/// max_k.
SimStats run_convergence(const SimConfig& config);

/// max_k P(g_k(report) != f(u^k)) for each K, as (K, gap) pairs.
std::vector<std::pair<std::int64_t, double>> efficiency_gap(const SimConfig& config);

struct ExactExpectation {
  double expected_lies = 0.0;
  double expected_tv_to_quota = 0.0;
};

/// Exact E[#lies] and E[d(marg u, P^K)] by enumerating all #U^K type
/// vectors with their prior weights. The uniform strategy has the same lie
/// count as the canonical one. Throws CapExceeded above `cap` vectors.
ExactExpectation exact_expectation(const Problem& problem, std::int64_t K, Strategy strategy,
                                   const SocialChoiceFunction& f,
                                   std::uint64_t cap = kDefaultEnumerationCap);

/// One row per K:
/// K,strategy,reps,lie_fraction,lie_fraction_se,max_slot_lie_prob,mean_tv_to_quota,star_bound,efficiency_gap,seed
void write_csv(std::ostream& out, const SimStats& stats);

/// printf("%.12g"); empty for NaN.
std::string format_number(double x);

}  // namespace linking
