#include "linking/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "combinatorics.hpp"
#include "linking/min_cost_flow.hpp"

namespace linking {
namespace {

using detail::kSaturated;

std::vector<double> value_matrix(const Problem& problem, const SocialChoiceFunction& f) {
  const std::size_t n = problem.num_types();
  std::vector<double> w(n * n);
  for (TypeIndex t = 0; t < n; ++t)
    for (TypeIndex r = 0; r < n; ++r) w[t * n + r] = expected_utility(problem, f, t, r);
  return w;
}

void require_consistent(const PreferenceVector& truth, const SocialChoiceFunction& f,
                        const Problem& problem, const Quota& quota) {
  if (f.num_types() != problem.num_types() || f.num_decisions() != problem.num_decisions()) {
    throw ValidationError("social_choice", "does not match the problem's types and decisions");
  }
  if (truth.num_types() != problem.num_types() || quota.num_types() != problem.num_types()) {
    throw ValidationError("vector", "type set does not match the problem");
  }
  if (static_cast<std::int64_t>(truth.size()) != quota.K()) {
    throw ValidationError("quota", "K does not match the truth vector's length");
  }
}

// Folds lie cycles t_0 -> t_1 -> ... -> t_0 of the plan's off-diagonal
// support back onto the diagonal whenever that does not lower the payoff.
void fold_free_lie_cycles(TransportPlan& plan, const std::vector<double>& w) {
  const std::size_t n = plan.num_types();
  std::vector<TypeIndex> path;
  std::vector<char> on_path(n, 0);

  // Returns true after folding one cycle through `start` using nodes > start.
  auto search = [&](auto&& self, TypeIndex start, TypeIndex v) -> bool {
    for (TypeIndex next = start; next < n; ++next) {
      if (next == v || plan.at(v, next) == 0) continue;
      if (next == start) {
        path.push_back(start);
        double gain = 0.0;
        std::int64_t mass = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          gain += w[path[i] * n + path[i]] - w[path[i] * n + path[i + 1]];
          mass = std::min(mass, plan.at(path[i], path[i + 1]));
        }
        if (gain >= 0.0) {
          for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            plan.at(path[i], path[i + 1]) -= mass;
            plan.at(path[i], path[i]) += mass;
          }
          path.pop_back();
          return true;
        }
        path.pop_back();
        continue;
      }
      if (on_path[next]) continue;
      on_path[next] = 1;
      path.push_back(next);
      const bool folded = self(self, start, next);
      path.pop_back();
      on_path[next] = 0;
      if (folded) return true;
    }
    return false;
  };

  bool folded = true;
  while (folded) {
    folded = false;
    for (TypeIndex s = 0; s < n && !folded; ++s) {
      path.assign(1, s);
      on_path.assign(n, 0);
      on_path[s] = 1;
      folded = search(search, s, s);
    }
  }
}

}  // namespace

SocialChoiceFunction::SocialChoiceFunction(std::vector<Distribution> lotteries,
                                           std::size_t num_decisions)
    : lotteries_(std::move(lotteries)), num_decisions_(num_decisions) {
  if (lotteries_.empty()) throw ValidationError("social_choice", "no types");
  for (std::size_t t = 0; t < lotteries_.size(); ++t) {
    const auto& lottery = lotteries_[t];
    const std::string field = "social_choice[" + std::to_string(t) + "]";
    if (lottery.size() != num_decisions_) throw ValidationError(field, "wrong number of decisions");
    Rational total(0);
    for (const auto& p : lottery) {
      if (p < 0) throw ValidationError(field, "negative probability");
      total += p;
    }
    if (total != 1) throw ValidationError(field, "sums to " + to_string(total) + ", not 1");
  }
}

SocialChoiceFunction SocialChoiceFunction::dictatorial(const Problem& problem) {
  std::vector<Distribution> lotteries;
  for (TypeIndex t = 0; t < problem.num_types(); ++t) {
    std::size_t best = 0;
    for (std::size_t d = 1; d < problem.num_decisions(); ++d) {
      if (problem.utility(d, t) > problem.utility(best, t)) best = d;
    }
    Distribution lottery(problem.num_decisions(), Rational(0));
    lottery[best] = 1;
    lotteries.push_back(std::move(lottery));
  }
  return SocialChoiceFunction(std::move(lotteries), problem.num_decisions());
}

SocialChoiceFunction SocialChoiceFunction::constant(const Problem& problem, std::size_t decision) {
  if (decision >= problem.num_decisions()) throw std::out_of_range("decision out of range");
  Distribution lottery(problem.num_decisions(), Rational(0));
  lottery[decision] = 1;
  return SocialChoiceFunction(std::vector<Distribution>(problem.num_types(), lottery),
                              problem.num_decisions());
}

bool SocialChoiceFunction::is_injective() const {
  for (std::size_t a = 0; a < lotteries_.size(); ++a)
    for (std::size_t b = a + 1; b < lotteries_.size(); ++b)
      if (lotteries_[a] == lotteries_[b]) return false;
  return true;
}

double expected_utility(const Problem& problem, const SocialChoiceFunction& f, TypeIndex truth,
                        TypeIndex report) {
  const Distribution& lottery = f(report);
  double value = 0.0;
  for (std::size_t d = 0; d < lottery.size(); ++d) {
    if (lottery[d] == 0) continue;
    value += to_double(lottery[d]) * problem.utility(d, truth);
  }
  return value;
}

double payoff(const PreferenceVector& truth, const PreferenceVector& report,
              const SocialChoiceFunction& f, const Problem& problem) {
  if (truth.size() != report.size()) throw ValidationError("vector", "length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    total += expected_utility(problem, f, truth[k], report[k]);
  }
  return total;
}

std::uint64_t message_space_size(const Quota& quota) {
  // K! / prod q_t! as a product of binomials C(running total, q_t).
  std::uint64_t size = 1;
  std::int64_t running = 0;
  for (auto c : quota.counts()) {
    running += c;
    size = detail::saturating_mul(size, detail::saturating_binomial(running, c));
  }
  return size;
}

MessageEnumerator::MessageEnumerator(Quota quota, std::uint64_t cap)
    : quota_(std::move(quota)), size_(message_space_size(quota_)) {
  if (size_ > cap) {
    throw CapExceeded("message space has " +
                      (size_ == kSaturated ? std::string("more than 2^64") : std::to_string(size_)) +
                      " elements, above the cap of " + std::to_string(cap));
  }
  for (TypeIndex t = 0; t < quota_.num_types(); ++t) {
    current_.insert(current_.end(), static_cast<std::size_t>(quota_.count(t)), t);
  }
}

std::optional<Message> MessageEnumerator::next() {
  if (done_) return std::nullopt;
  Message m(PreferenceVector(current_, quota_.num_types()), quota_);
  done_ = !std::next_permutation(current_.begin(), current_.end());
  return m;
}

std::vector<Message> enumerate_messages(const Quota& quota, std::uint64_t cap) {
  MessageEnumerator it(quota, cap);
  std::vector<Message> out;
  out.reserve(static_cast<std::size_t>(it.size()));
  while (auto m = it.next()) out.push_back(std::move(*m));
  return out;
}

BestResponseSet best_response_bruteforce(const PreferenceVector& truth,
                                         const SocialChoiceFunction& f, const Problem& problem,
                                         const Quota& quota, std::uint64_t cap) {
  require_consistent(truth, f, problem, quota);
  MessageEnumerator it(quota, cap);
  std::vector<std::pair<double, Message>> scored;
  scored.reserve(static_cast<std::size_t>(it.size()));
  double best = -std::numeric_limits<double>::infinity();
  while (auto m = it.next()) {
    const double value = payoff(truth, m->vector(), f, problem);
    best = std::max(best, value);
    scored.emplace_back(value, std::move(*m));
  }
  BestResponseSet out;
  out.payoff = best;
  const double tolerance = kPayoffTieTolerance * std::max(1.0, std::abs(best));
  for (auto& [value, m] : scored) {
    if (best - value <= tolerance) out.messages.push_back(std::move(m));
  }
  return out;
}

TransportBestResponse best_response_transport(const PreferenceVector& truth,
                                              const SocialChoiceFunction& f,
                                              const Problem& problem, const Quota& quota) {
  require_consistent(truth, f, problem, quota);
  const std::size_t n = problem.num_types();
  const auto w = value_matrix(problem, f);
  const double shift = *std::max_element(w.begin(), w.end());
  const auto have = truth.counts();

  // Nodes: source, truth layer, report layer, sink.
  const std::size_t source = 0;
  const std::size_t sink = 2 * n + 1;
  MinCostFlow network(2 * n + 2);
  for (TypeIndex t = 0; t < n; ++t) {
    if (have[t] > 0) network.add_edge(source, 1 + t, have[t], 0.0);
    if (quota.count(t) > 0) network.add_edge(1 + n + t, sink, quota.count(t), 0.0);
  }
  std::vector<std::size_t> arc(n * n);
  for (TypeIndex t = 0; t < n; ++t) {
    for (TypeIndex r = 0; r < n; ++r) {
      arc[t * n + r] = network.add_edge(1 + t, 1 + n + r, quota.K(), shift - w[t * n + r]);
    }
  }
  const auto solved = network.solve(source, sink, quota.K());
  if (solved.flow != quota.K()) throw InternalError("transport network could not route all K units");

  TransportPlan plan(n);
  for (TypeIndex t = 0; t < n; ++t)
    for (TypeIndex r = 0; r < n; ++r) plan.at(t, r) = network.flow(arc[t * n + r]);
  fold_free_lie_cycles(plan, w);

  if (plan.row_sums() != have || plan.column_sums() != quota.counts()) {
    throw InternalError("transport plan violates its marginal constraints");
  }
  Message message(realize_plan(plan, truth), quota);
  const double value = payoff(truth, message.vector(), f, problem);
  return TransportBestResponse{std::move(plan), std::move(message), value};
}

}  // namespace linking
