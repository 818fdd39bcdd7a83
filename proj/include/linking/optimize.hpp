#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linking/core.hpp"
#include "linking/plan.hpp"
#include "linking/truthfulness.hpp"

namespace linking {

/// f : U_i -> Δ(D), one lottery over decisions per type.
class SocialChoiceFunction {
 public:
  /// Throws ValidationError unless every lottery is nonnegative, sums to 1
  /// and has one weight per decision.
  SocialChoiceFunction(std::vector<Distribution> lotteries, std::size_t num_decisions);

  /// Each type gets a point mass on its utility-maximising decision (lowest
  /// decision index on ties).
  static SocialChoiceFunction dictatorial(const Problem& problem);
  static SocialChoiceFunction constant(const Problem& problem, std::size_t decision);

  std::size_t num_types() const noexcept { return lotteries_.size(); }
  std::size_t num_decisions() const noexcept { return num_decisions_; }
  const Distribution& operator()(TypeIndex t) const { return lotteries_.at(t); }

  /// Distinct types map to distinct lotteries.
  bool is_injective() const;

 private:
  std::vector<Distribution> lotteries_;
  std::size_t num_decisions_;
};

/// E_{d ~ f(report)}[u(d | truth)].
double expected_utility(const Problem& problem, const SocialChoiceFunction& f, TypeIndex truth,
                        TypeIndex report);

/// Sum over slots of expected_utility(u^k, m^k).
double payoff(const PreferenceVector& truth, const PreferenceVector& report,
              const SocialChoiceFunction& f, const Problem& problem);

/// Multinomial K! / prod_t q_t!, saturated at UINT64_MAX.
std::uint64_t message_space_size(const Quota& quota);

/// Lazily walks M_i^K in lexicographic order.
class MessageEnumerator {
 public:
  /// Throws CapExceeded when the message space is larger than `cap`.
  explicit MessageEnumerator(Quota quota, std::uint64_t cap = kDefaultEnumerationCap);

  std::uint64_t size() const noexcept { return size_; }
  std::optional<Message> next();

 private:
  Quota quota_;
  std::vector<TypeIndex> current_;
  std::uint64_t size_;
  bool done_ = false;
};

std::vector<Message> enumerate_messages(const Quota& quota,
                                        std::uint64_t cap = kDefaultEnumerationCap);

/// Payoffs closer than this (relative to max(1, |best|)) count as ties.
inline constexpr double kPayoffTieTolerance = 1e-9;

struct BestResponseSet {
  std::vector<Message> messages;  // every maximiser, lexicographic order
  double payoff = 0.0;
};

/// Scans all of M_i^K. Throws CapExceeded when that is larger than `cap`.
BestResponseSet best_response_bruteforce(const PreferenceVector& truth,
                                         const SocialChoiceFunction& f, const Problem& problem,
                                         const Quota& quota,
                                         std::uint64_t cap = kDefaultEnumerationCap);

struct TransportBestResponse {
  TransportPlan plan;
  Message message;
  double payoff = 0.0;
};

/// Optimal report from the integral transportation problem
///   max sum_{t,r} plan(t, r) * E_{d~f(r)}[u(d|t)]
/// with rows K*marg(u) and columns the quota, solved as successive shortest
/// paths on the bipartite type network. Among optimal plans, lie cycles of
/// zero payoff gain are folded back onto the diagonal, so the canonical
/// optimum is permutation-truthful whenever no lie cycle is profitable.
TransportBestResponse best_response_transport(const PreferenceVector& truth,
                                              const SocialChoiceFunction& f,
                                              const Problem& problem, const Quota& quota);

}  // namespace linking
