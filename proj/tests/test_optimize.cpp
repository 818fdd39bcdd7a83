#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "linking/counterexample.hpp"
#include "linking/optimize.hpp"
#include "oracles.hpp"

namespace linking {
namespace {

constexpr TypeIndex A = 0, B = 1, C = 2;

PreferenceVector vec(std::vector<TypeIndex> v, std::size_t n = 3) {
  return PreferenceVector(std::move(v), n);
}

Problem with_table(const std::vector<std::vector<double>>& table) {
  Problem p = counterexample_problem();
  for (TypeIndex t = 0; t < 3; ++t)
    for (std::size_t d = 0; d < 3; ++d) p = p.with_utility(d, t, table[t][d]);
  return p;
}

// Random lotteries over decisions with weights in multiples of 1/4.
SocialChoiceFunction random_lotteries(std::mt19937_64& rng, std::size_t n, std::size_t decisions) {
  std::uniform_int_distribution<std::size_t> pick(0, decisions - 1);
  std::vector<Distribution> lotteries;
  for (std::size_t t = 0; t < n; ++t) {
    Distribution l(decisions, Rational(0));
    for (int unit = 0; unit < 4; ++unit) l[pick(rng)] += Rational(1, 4);
    lotteries.push_back(std::move(l));
  }
  return SocialChoiceFunction(std::move(lotteries), decisions);
}

TEST(SocialChoiceFunction, Validation) {
  EXPECT_THROW(SocialChoiceFunction({{Rational(1, 2), Rational(1, 4)}}, 2), ValidationError);
  EXPECT_THROW(SocialChoiceFunction({{Rational(2), Rational(-1)}}, 2), ValidationError);
  EXPECT_THROW(SocialChoiceFunction({{Rational(1)}}, 2), ValidationError);
  const auto f = SocialChoiceFunction::dictatorial(counterexample_problem());
  EXPECT_EQ(f(A), (Distribution{Rational(1), Rational(0), Rational(0)}));
  EXPECT_EQ(f(C), (Distribution{Rational(0), Rational(0), Rational(1)}));
  EXPECT_TRUE(f.is_injective());
  EXPECT_FALSE(SocialChoiceFunction::constant(counterexample_problem(), 1).is_injective());
}

TEST(Payoff, Examples) {
  const Problem p = counterexample_problem();
  const auto f = SocialChoiceFunction::dictatorial(p);
  // u(a|A) + u(c|A) + u(b|B) = 2 + 0 + 2.
  EXPECT_EQ(payoff(vec({A, A, B}), vec({A, C, B}), f, p), 4.0);
  EXPECT_EQ(payoff(vec({A, A, B}), vec({A, B, C}), f, p), 4.5);
  EXPECT_EQ(payoff(vec({A, B, C}), vec({A, B, C}), f, p), 6.0);
  const Problem zero = with_table({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  for (const auto& m : enumerate_messages(Quota({1, 1, 1})))
    EXPECT_EQ(payoff(vec({A, A, B}), m.vector(), f, zero), 0.0);
}

TEST(Payoff, MatchesPointMassOracle) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const Problem p = oracle::random_problem(rng, n, n);
    const auto f = SocialChoiceFunction::dictatorial(p);
    std::vector<std::size_t> decision_of(n);
    for (TypeIndex t = 0; t < n; ++t)
      decision_of[t] = static_cast<std::size_t>(std::find(f(t).begin(), f(t).end(), Rational(1)) - f(t).begin());
    const auto u = oracle::random_vector(rng, n, 6);
    const auto m = oracle::random_vector(rng, n, 6);
    EXPECT_EQ(payoff(PreferenceVector(u, n), PreferenceVector(m, n), f, p),
              oracle::point_mass_payoff(p, decision_of, u, m));
  }
}

TEST(EnumerateMessages, Examples) {
  const auto six = enumerate_messages(Quota({1, 1, 1}));
  ASSERT_EQ(six.size(), 6u);
  EXPECT_EQ(six.front().vector(), vec({A, B, C}));
  EXPECT_EQ(six.back().vector(), vec({C, B, A}));
  EXPECT_TRUE(std::is_sorted(six.begin(), six.end()));

  const auto one = enumerate_messages(Quota({4, 0, 0}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].vector(), vec({A, A, A, A}));

  EXPECT_EQ(enumerate_messages(Quota({2, 1})).size(), 3u);
  EXPECT_EQ(message_space_size(Quota({2, 1})), 3u);
}

TEST(EnumerateMessages, MatchesCubeFilter) {
  for (const auto& q : oracle::compositions(3, 5)) {
    std::vector<oracle::Vec> got;
    for (const auto& m : enumerate_messages(Quota(q)))
      got.emplace_back(m.vector().entries().begin(), m.vector().entries().end());
    EXPECT_EQ(got, oracle::feasible_messages(q));
    EXPECT_EQ(message_space_size(Quota(q)), got.size());
  }
}

TEST(EnumerateMessages, CapAndLaziness) {
  const Quota big({5, 5, 5, 5});  // 20! / (5!)^4 = 11732745024
  EXPECT_EQ(message_space_size(big), 11732745024ull);
  EXPECT_THROW(MessageEnumerator{big}, CapExceeded);
  EXPECT_THROW(enumerate_messages(Quota({1, 1, 1}), 5), CapExceeded);
  MessageEnumerator it(big, message_space_size(big));
  EXPECT_EQ(it.next()->vector(), PreferenceVector({0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3}, 4));
}

TEST(BestResponse, CounterexampleBruteForce) {
  const Problem p = counterexample_problem();
  const auto f = SocialChoiceFunction::dictatorial(p);
  const auto best = best_response_bruteforce(vec({A, A, B}), f, p, Quota({1, 1, 1}));
  // Oracle by hand over all six messages: ABC and BAC pay 1+2+1.5, ACB and
  // CAB pay 4, BCA and CBA pay 1.
  ASSERT_EQ(best.messages.size(), 2u);
  EXPECT_EQ(best.messages[0].vector(), vec({A, B, C}));
  EXPECT_EQ(best.messages[1].vector(), vec({B, A, C}));
  EXPECT_EQ(plan_of(vec({A, A, B}), best.messages[0].vector()),
            plan_of(vec({A, A, B}), best.messages[1].vector()));
  EXPECT_EQ(best.payoff, 4.5);
}

TEST(BestResponse, CounterexampleTransport) {
  const Problem p = counterexample_problem();
  const auto f = SocialChoiceFunction::dictatorial(p);
  const auto best = best_response_transport(vec({A, A, B}), f, p, Quota({1, 1, 1}));
  TransportPlan expected(3);
  expected.at(A, A) = 1;
  expected.at(A, B) = 1;
  expected.at(B, C) = 1;
  EXPECT_EQ(best.plan, expected);
  EXPECT_EQ(best.message.vector(), vec({A, B, C}));
  EXPECT_EQ(best.payoff, 4.5);
}

TEST(BestResponse, FeasibleTruthWithStrictPreferencesIsUnique) {
  const Problem p = counterexample_problem();
  const auto f = SocialChoiceFunction::dictatorial(p);
  for (const auto& truth : {vec({A, B, C}), vec({C, A, B}), vec({B, C, A})}) {
    const auto best = best_response_bruteforce(truth, f, p, Quota({1, 1, 1}));
    ASSERT_EQ(best.messages.size(), 1u);
    EXPECT_EQ(best.messages[0].vector(), truth);
    const auto transport = best_response_transport(truth, f, p, Quota({1, 1, 1}));
    EXPECT_EQ(transport.plan.lies(), 0);
    EXPECT_EQ(transport.message.vector(), truth);
  }
}

TEST(BestResponse, IdenticalTypesTieEverywhere) {
  const Problem p = with_table({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  const auto f = SocialChoiceFunction::dictatorial(p);
  const auto best = best_response_bruteforce(vec({A, A, B}), f, p, Quota({1, 1, 1}));
  EXPECT_EQ(best.messages.size(), 6u);
  EXPECT_EQ(best.payoff, 3.0);
  // The canonical transport optimum folds costless lies away where it can.
  const auto transport = best_response_transport(vec({A, A, B}), f, p, Quota({1, 1, 1}));
  EXPECT_EQ(transport.payoff, 3.0);
  EXPECT_TRUE(is_permutation_truthful(vec({A, A, B}), transport.message.vector()));
}

TEST(BestResponse, SingleType) {
  RawProblem raw;
  raw.decisions = {"d"};
  raw.types = {"T"};
  raw.prior = {"1"};
  raw.utility["T"]["d"] = 3.0;
  const Problem p = validate_problem(raw);
  const auto f = SocialChoiceFunction::dictatorial(p);
  const auto best = best_response_transport(PreferenceVector({0, 0}, 1), f, p, Quota({2}));
  EXPECT_EQ(best.plan.at(0, 0), 2);
  EXPECT_EQ(best.payoff, 6.0);
}

TEST(BestResponse, SolversAgree) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const std::size_t K = 1 + trial % 7;
    const Problem p = oracle::random_problem(rng, n, 1 + trial % 3);
    const auto f = trial % 2 ? SocialChoiceFunction::dictatorial(p)
                             : random_lotteries(rng, n, p.num_decisions());
    const PreferenceVector u(oracle::random_vector(rng, n, K), n);
    const Quota q(oracle::random_quota(rng, n, K));
    const auto brute = best_response_bruteforce(u, f, p, q);
    const auto transport = best_response_transport(u, f, p, q);
    ASSERT_EQ(transport.payoff, brute.payoff) << "trial " << trial;
    EXPECT_EQ(payoff(u, transport.message.vector(), f, p), transport.payoff);
    EXPECT_TRUE(std::binary_search(brute.messages.begin(), brute.messages.end(), transport.message));
    EXPECT_EQ(plan_of(u, transport.message.vector()), transport.plan);
  }
}

TEST(BestResponse, OptimumInvariantUnderSlotPermutation) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t K = 2 + trial % 5;
    const Problem p = oracle::random_problem(rng, n, n);
    const auto f = SocialChoiceFunction::dictatorial(p);
    const auto u = oracle::random_vector(rng, n, K);
    const Quota q(oracle::random_quota(rng, n, K));
    EXPECT_EQ(best_response_bruteforce(PreferenceVector(u, n), f, p, q).payoff,
              best_response_bruteforce(PreferenceVector(oracle::shuffled(u, rng), n), f, p, q).payoff);
  }
}

TEST(BestResponse, ConstantShiftPerType) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t K = 2 + trial % 4;
    const Problem p = oracle::random_problem(rng, n, n);
    const auto f = random_lotteries(rng, n, n);
    const auto u = oracle::random_vector(rng, n, K);
    const Quota q(oracle::random_quota(rng, n, K));
    const TypeIndex t = trial % n;
    const double c = 1.25;
    Problem shifted = p;
    for (std::size_t d = 0; d < n; ++d) shifted = shifted.with_utility(d, t, p.utility(d, t) + c);
    const auto count_t = static_cast<double>(oracle::counts_of(u, n)[t]);
    const PreferenceVector uv(u, n);
    for (const auto& m : enumerate_messages(q)) {
      EXPECT_EQ(payoff(uv, m.vector(), f, shifted), payoff(uv, m.vector(), f, p) + c * count_t);
    }
    EXPECT_EQ(best_response_bruteforce(uv, f, shifted, q).messages,
              best_response_bruteforce(uv, f, p, q).messages);
  }
}

// With each type's favourite decision, every lie cycle costs its liars, so
// the canonical optimum lies along chains only and stays within the relaxed
// bound of (#types - 1) times the minimum.
TEST(BestResponse, DictatorialOptimumLiesAlongChains) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const std::size_t K = 1 + trial % 12;
    const Problem p = oracle::random_problem(rng, n, n);
    const auto f = SocialChoiceFunction::dictatorial(p);
    const PreferenceVector u(oracle::random_vector(rng, n, K), n);
    const Quota q(oracle::random_quota(rng, n, K));
    const auto best = best_response_transport(u, f, p, q);
    EXPECT_TRUE(is_permutation_truthful(u, best.message.vector()));
    EXPECT_LE(best.plan.lies(), star_bound(u, q));
  }
}

TEST(Counterexample, FixturePasses) {
  const auto report = verify_counterexample(counterexample_problem());
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.deviation_incentive);
  EXPECT_EQ(report.min_lies, 1);
  EXPECT_EQ(report.minimal_lie_messages,
            (std::vector<std::vector<std::string>>{{"A", "C", "B"}, {"C", "A", "B"}}));
  EXPECT_EQ(report.best_responses,
            (std::vector<std::vector<std::string>>{{"A", "B", "C"}, {"B", "A", "C"}}));
  EXPECT_EQ(report.minimal_lie_payoffs, (std::vector<double>{4.0, 4.0}));
  EXPECT_EQ(report.deviation_payoff, 4.5);
  EXPECT_EQ(report.incentive_lhs, 2.5);
  EXPECT_EQ(report.incentive_rhs, 2.0);
  EXPECT_FALSE(report.deviation_approx_truthful);
  EXPECT_TRUE(report.deviation_approx_truthful_star);
  EXPECT_TRUE(report.deviation_permutation_truthful);
  for (const auto& check : report.checks) EXPECT_TRUE(check.passed) << check.name;
}

TEST(Counterexample, LoweredUtilityRemovesIncentive) {
  Problem p = counterexample_problem();
  p = p.with_utility(p.decision_index("c"), p.type_index("B"), 0.5);
  const auto report = verify_counterexample(p);
  EXPECT_FALSE(report.deviation_incentive);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.best_responses,
            (std::vector<std::vector<std::string>>{{"A", "C", "B"}, {"C", "A", "B"}}));
  EXPECT_LT(report.deviation_payoff, report.best_payoff);
}

TEST(Counterexample, SymmetricUtilitiesTie) {
  const auto report = verify_counterexample(with_table({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_FALSE(report.deviation_incentive);
  EXPECT_EQ(report.best_responses,
            (std::vector<std::vector<std::string>>{{"A", "C", "B"}, {"C", "A", "B"}}));
  EXPECT_LT(report.deviation_payoff, report.best_payoff);
}

TEST(Counterexample, RejectsWrongShape) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(verify_counterexample(oracle::random_problem(rng, 2, 2)), ValidationError);
  EXPECT_THROW(verify_counterexample(with_table({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})), ValidationError);
}

TEST(Counterexample, HoldsForRandomSinglePeakedTables) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> draw(0, 40);
  int accepted = 0;
  while (accepted < 100) {
    auto x = [&] { return draw(rng) / 4.0; };
    // Peaks a, b, c on the axis a < b < c.
    const double a_a = x(), a_b = x(), a_c = x();
    const double b_a = x(), b_b = x(), b_c = x();
    const double c_a = x(), c_b = x(), c_c = x();
    const bool single_peaked = a_a > a_b && a_b > a_c && b_b > b_a && b_b > b_c && c_c > c_b &&
                               c_b > c_a;
    if (!single_peaked || !(a_b + b_c > a_c + b_b)) continue;
    ++accepted;
    const auto report = verify_counterexample(with_table({{a_a, a_b, a_c}, {b_a, b_b, b_c}, {c_a, c_b, c_c}}));
    ASSERT_TRUE(report.deviation_incentive);
    ASSERT_TRUE(report.passed()) << a_a << ' ' << a_b << ' ' << a_c << ' ' << b_a << ' ' << b_b << ' ' << b_c;
  }
}

}  // namespace
}  // namespace linking
