#include "linking/counterexample.hpp"

#include <algorithm>
#include <sstream>

namespace linking {
namespace {

std::string join(const std::vector<std::string>& labels) {
  std::string out = "(";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out + ")";
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

Problem counterexample_problem() {
  RawProblem raw;
  raw.decisions = {"a", "b", "c"};
  raw.types = {"A", "B", "C"};
  raw.prior = {"1/3", "1/3", "1/3"};
  raw.utility = {
      {"A", {{"a", 2.0}, {"b", 1.0}, {"c", 0.0}}},
      {"B", {{"a", 0.0}, {"b", 2.0}, {"c", 1.5}}},
      {"C", {{"a", 0.0}, {"b", 0.0}, {"c", 2.0}}},
  };
  return validate_problem(raw);
}

bool CounterexampleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

CounterexampleReport verify_counterexample(const Problem& problem) {
  if (problem.num_types() != 3 || problem.num_decisions() != 3) {
    throw ValidationError("problem", "counterexample needs exactly 3 types and 3 decisions");
  }
  for (const auto& w : problem.prior()) {
    if (w != Rational(1, 3)) throw ValidationError("prior", "counterexample needs the uniform prior");
  }
  // Each type must strictly prefer its own decision, and the decisions must differ.
  std::vector<std::size_t> favourite(3);
  for (TypeIndex t = 0; t < 3; ++t) {
    std::vector<double> row{problem.utility(0, t), problem.utility(1, t), problem.utility(2, t)};
    favourite[t] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    for (std::size_t d = 0; d < 3; ++d) {
      if (d != favourite[t] && row[d] >= row[favourite[t]]) {
        throw ValidationError("utility." + problem.types()[t],
                              "type has no strictly preferred decision");
      }
    }
  }
  if (favourite[0] == favourite[1] || favourite[1] == favourite[2] || favourite[0] == favourite[2]) {
    throw ValidationError("utility", "types must strictly prefer distinct decisions");
  }

  const auto f = SocialChoiceFunction::dictatorial(problem);
  const Quota quota = compute_quota(problem.prior(), 3);
  const PreferenceVector truth({0, 0, 1}, 3);
  const Message deviation(PreferenceVector({0, 1, 2}, 3), quota);
  const std::vector<Message> expected_minimal{
      Message(PreferenceVector({0, 2, 1}, 3), quota),
      Message(PreferenceVector({2, 0, 1}, 3), quota),
  };

  CounterexampleReport report;
  report.truth = truth.labels(problem);
  report.deviation = deviation.vector().labels(problem);
  report.min_lies = min_lie_count(truth, quota);
  const auto minimal = minimal_lie_messages(truth, quota);
  for (const auto& m : minimal) {
    report.minimal_lie_messages.push_back(m.vector().labels(problem));
    report.minimal_lie_payoffs.push_back(payoff(truth, m.vector(), f, problem));
  }
  report.deviation_payoff = payoff(truth, deviation.vector(), f, problem);

  const std::size_t d1 = favourite[1];
  const std::size_t d2 = favourite[2];
  report.incentive_lhs = problem.utility(d1, 0) + problem.utility(d2, 1);
  report.incentive_rhs = problem.utility(d2, 0) + problem.utility(d1, 1);
  report.deviation_incentive = report.incentive_lhs > report.incentive_rhs;

  const auto best = best_response_bruteforce(truth, f, problem, quota);
  for (const auto& m : best.messages) report.best_responses.push_back(m.vector().labels(problem));
  report.best_payoff = best.payoff;

  report.deviation_approx_truthful = is_approx_truthful(truth, deviation);
  report.deviation_approx_truthful_star = is_approx_truthful_star(truth, deviation);
  report.deviation_permutation_truthful = is_permutation_truthful(truth, deviation.vector());

  auto& checks = report.checks;
  checks.push_back({"min_lies_is_one", report.min_lies == 1,
                    "min lies = " + std::to_string(report.min_lies)});
  checks.push_back({"minimal_lie_set", minimal == expected_minimal,
                    std::to_string(minimal.size()) + " minimal-lie messages"});

  if (report.deviation_incentive) {
    // Swapping the two t0 slots of the deviation gives the same payoff, so
    // the optimum is unique as a plan: the best responses are exactly the
    // messages sharing the deviation's plan.
    const TransportPlan deviation_plan = plan_of(truth, deviation.vector());
    std::vector<Message> same_plan;
    for (const auto& m : enumerate_messages(quota)) {
      if (plan_of(truth, m.vector()) == deviation_plan) same_plan.push_back(m);
    }
    const bool unique = best.messages == same_plan;
    std::string listed;
    for (const auto& m : report.best_responses) listed += join(m) + " ";
    checks.push_back({"unique_best_response_plan_is_deviation", unique,
                      "best responses: " + listed + "payoff " + fmt(best.payoff)});
    checks.push_back({"deviation_fails_minimal_lies", !report.deviation_approx_truthful,
                      "deviation lies " + std::to_string(hamming(truth, deviation.vector())) +
                          " times"});
    checks.push_back({"deviation_within_relaxed_bound", report.deviation_approx_truthful_star,
                      "bound " + std::to_string(star_bound(truth, quota))});
    checks.push_back({"deviation_permutation_truthful", report.deviation_permutation_truthful, ""});
    bool strictly_worse = true;
    for (double v : report.minimal_lie_payoffs) strictly_worse = strictly_worse && v < report.deviation_payoff;
    checks.push_back({"minimal_lie_reports_strictly_worse", strictly_worse,
                      "deviation payoff " + fmt(report.deviation_payoff)});
  } else {
    const double best_minimal =
        *std::max_element(report.minimal_lie_payoffs.begin(), report.minimal_lie_payoffs.end());
    checks.push_back({"no_deviation_incentive", report.deviation_payoff <= best_minimal,
                      "deviation payoff " + fmt(report.deviation_payoff) +
                          " vs best minimal-lie payoff " + fmt(best_minimal)});
  }
  return report;
}

}  // namespace linking
