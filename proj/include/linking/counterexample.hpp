#pragma once

#include <string>
#include <vector>

#include "linking/core.hpp"
#include "linking/optimize.hpp"

namespace linking {

/// The bundled three-type instance: decisions {a,b,c}, types {A,B,C},
/// uniform prior, u(.|A) = (a:2, b:1, c:0), u(.|B) = (a:0, b:2, c:1.5),
/// u(.|C) = (a:0, b:0, c:2).
Problem counterexample_problem();

struct CounterexampleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Outcome of replaying the three-problem deviation on a problem of the
/// counterexample's shape. With types t0 < t1 < t2 and f(t_i) = d_i, the
/// truth is (t0, t0, t1), the minimal-lie reports are (t0, t2, t1) and
/// (t2, t0, t1), and the deviation is (t0, t1, t2). When the deviation pays,
/// the best responses are (t0, t1, t2) and (t1, t0, t2): the two t0 slots
/// are interchangeable, so the optimum is unique only as a transport plan.
struct CounterexampleReport {
  std::vector<std::string> truth;
  std::vector<std::string> deviation;
  std::int64_t min_lies = 0;
  std::vector<std::vector<std::string>> minimal_lie_messages;
  std::vector<double> minimal_lie_payoffs;
  double deviation_payoff = 0.0;
  /// u(d1|t0) + u(d2|t1) and u(d2|t0) + u(d1|t1).
  double incentive_lhs = 0.0;
  double incentive_rhs = 0.0;
  bool deviation_incentive = false;
  std::vector<std::vector<std::string>> best_responses;
  double best_payoff = 0.0;
  bool deviation_approx_truthful = false;
  bool deviation_approx_truthful_star = false;
  bool deviation_permutation_truthful = false;
  std::vector<CounterexampleCheck> checks;

  bool passed() const;
};

/// Requires 3 types, 3 decisions, a uniform prior and a dictatorial f that
/// assigns the three types distinct decisions; throws ValidationError
/// otherwise. Every claim is re-derived by enumeration.
CounterexampleReport verify_counterexample(const Problem& problem);

}  // namespace linking
