#include <gtest/gtest.h>

#include <random>

#include "linking/core.hpp"
#include "linking/counterexample.hpp"
#include "oracles.hpp"

namespace linking {
namespace {

RawProblem three_type_raw() {
  RawProblem raw;
  raw.decisions = {"a", "b", "c"};
  raw.types = {"A", "B", "C"};
  raw.prior = {"1/3", "1/3", "1/3"};
  for (const auto& t : raw.types)
    for (const auto& d : raw.decisions) raw.utility[t][d] = 0.0;
  return raw;
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational(" 2/4 "), Rational(1, 2));
  EXPECT_EQ(parse_rational("1"), Rational(1));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/3x"), std::invalid_argument);
  EXPECT_EQ(to_string(Rational(2, 6)), "1/3");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

TEST(ValidateProblem, AcceptsCounterexampleShape) {
  const Problem p = validate_problem(three_type_raw());
  EXPECT_EQ(p.num_types(), 3u);
  EXPECT_EQ(p.num_decisions(), 3u);
  EXPECT_EQ(p.prior(), (Distribution{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
}

TEST(ValidateProblem, RejectsPriorNotSummingToOne) {
  auto raw = three_type_raw();
  raw.prior = {"1/2", "1/2", "1/2"};
  try {
    validate_problem(raw);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "prior");
    EXPECT_NE(std::string(e.what()).find("3/2"), std::string::npos);
  }
}

TEST(ValidateProblem, AcceptsSingleTypeSingleDecision) {
  RawProblem raw;
  raw.decisions = {"d"};
  raw.types = {"T"};
  raw.prior = {"1"};
  raw.utility["T"]["d"] = 1.0;
  const Problem p = validate_problem(raw);
  EXPECT_EQ(p.num_types(), 1u);
  EXPECT_EQ(p.utility(0, 0), 1.0);
}

TEST(ValidateProblem, ReportsOffendingField) {
  auto expect_field = [](RawProblem raw, const std::string& field) {
    try {
      validate_problem(raw);
      ADD_FAILURE() << "expected failure on " << field;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  auto raw = three_type_raw();
  raw.types.clear();
  raw.prior.clear();
  expect_field(raw, "types");

  raw = three_type_raw();
  raw.prior = {"-1/3", "2/3", "2/3"};
  expect_field(raw, "prior.A");

  raw = three_type_raw();
  raw.utility["B"].erase("c");
  expect_field(raw, "utility.B.c");

  raw = three_type_raw();
  raw.types = {"A", "A", "C"};
  expect_field(raw, "types");

  raw = three_type_raw();
  raw.prior = {"1/3", "1/3"};
  expect_field(raw, "prior");

  raw = three_type_raw();
  raw.utility["Z"]["a"] = 1.0;
  expect_field(raw, "utility.Z");
}

TEST(ValidateProblem, SortsLabelsCanonically) {
  RawProblem raw;
  raw.decisions = {"y", "x"};
  raw.types = {"T2", "T1"};
  raw.prior = {"1/4", "3/4"};
  raw.utility = {{"T1", {{"x", 1}, {"y", 2}}}, {"T2", {{"x", 3}, {"y", 4}}}};
  const Problem p = validate_problem(raw);
  EXPECT_EQ(p.types(), (std::vector<std::string>{"T1", "T2"}));
  EXPECT_EQ(p.decisions(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(p.prior()[0], Rational(3, 4));
  EXPECT_EQ(p.utility(p.decision_index("y"), p.type_index("T2")), 4.0);
  EXPECT_THROW(p.type_index("T3"), ValidationError);
}

TEST(Marginal, CountsAndDivides) {
  EXPECT_EQ(marginal(PreferenceVector({0, 0, 1}, 3)),
            (Distribution{Rational(2, 3), Rational(1, 3), Rational(0)}));
  EXPECT_EQ(marginal(PreferenceVector({0, 0, 0}, 3)),
            (Distribution{Rational(1), Rational(0), Rational(0)}));
  EXPECT_EQ(marginal(PreferenceVector({0, 1, 2, 0}, 3)),
            (Distribution{Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
}

TEST(Marginal, PermutationInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = oracle::random_vector(rng, 4, 1 + trial % 9);
    EXPECT_EQ(marginal(PreferenceVector(v, 4)), marginal(PreferenceVector(oracle::shuffled(v, rng), 4)));
  }
}

TEST(TvDistance, Examples) {
  const Distribution third{Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  EXPECT_EQ(tv_distance(third, third), Rational(0));
  EXPECT_EQ(tv_distance({Rational(2, 3), Rational(1, 3), Rational(0)}, third), Rational(1, 3));
  EXPECT_EQ(tv_distance({Rational(1), Rational(0)}, {Rational(0), Rational(1)}), Rational(1));
  EXPECT_THROW(tv_distance(third, {Rational(1)}), ValidationError);
}

TEST(TvDistance, MatchesHalfL1OnRandomPairs) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> weight(0, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto random_dist = [&] {
      std::vector<int> w(n);
      int total = 0;
      for (auto& x : w) total += (x = weight(rng));
      if (total == 0) {
        w[0] = 1;
        total = 1;
      }
      Distribution d;
      for (auto x : w) d.emplace_back(x, total);
      return d;
    };
    const auto p = random_dist();
    const auto q = random_dist();
    const Rational d = tv_distance(p, q);
    EXPECT_EQ(d, oracle::tv_sum_abs_half(p, q));
    EXPECT_EQ(d, tv_distance(q, p));
    EXPECT_GE(d, 0);
    EXPECT_LE(d, 1);
    EXPECT_EQ(d == 0, p == q);
  }
}

TEST(Quota, RejectsBadCounts) {
  EXPECT_THROW(Quota({}), ValidationError);
  EXPECT_THROW(Quota({0, 0}), ValidationError);
  EXPECT_THROW(Quota({2, -1}), ValidationError);
  EXPECT_EQ(Quota({2, 1}).K(), 3);
  EXPECT_EQ(Quota({2, 1}).as_distribution(), (Distribution{Rational(2, 3), Rational(1, 3)}));
}

TEST(Message, RejectsQuotaViolationNamingTypes) {
  const Quota q({1, 1, 1});
  EXPECT_NO_THROW(Message(PreferenceVector({0, 2, 1}, 3), q));
  try {
    Message(PreferenceVector({0, 0, 1}, 3), q);
    FAIL() << "expected QuotaViolation";
  } catch (const QuotaViolation& v) {
    EXPECT_EQ(v.over(), std::vector<TypeIndex>{0});
    EXPECT_EQ(v.under(), std::vector<TypeIndex>{2});
  }
}

TEST(PreferenceVector, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(PreferenceVector({}, 2), ValidationError);
  EXPECT_THROW(PreferenceVector({0, 2}, 2), ValidationError);
  const Problem p = counterexample_problem();
  const std::vector<std::string> labels{"A", "A", "B"};
  const auto v = PreferenceVector::from_labels(p, labels);
  EXPECT_EQ(v, PreferenceVector({0, 0, 1}, 3));
  EXPECT_EQ(v.labels(p), labels);
}

TEST(Invariant, KTimesTvToQuotaIsInteger) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const std::size_t K = 1 + trial % 11;
    const PreferenceVector v(oracle::random_vector(rng, n, K), n);
    const Quota q(oracle::random_quota(rng, n, K));
    const Rational scaled = tv_distance(marginal(v), q.as_distribution()) * static_cast<std::int64_t>(K);
    EXPECT_EQ(scaled.denominator(), 1);
  }
}

}  // namespace
}  // namespace linking
