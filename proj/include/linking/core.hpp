#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linking/rational.hpp"

namespace linking {

/// Canonical rank of a type label within its Problem (labels sorted
/// lexicographically). All deterministic tie-breaking uses this order.
using TypeIndex = std::size_t;

/// Probability weights indexed by TypeIndex. Priors, marginals and quota
/// distributions all use this representation.
using Distribution = std::vector<Rational>;

/// Untrusted input rejected during validation. `field()` names the offending
/// part of the input ("prior", "utility.B.c", ...).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An enumeration or allocation would exceed its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A post-condition check on an algorithm's own output failed.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RawProblem {
  std::vector<std::string> decisions;
  std::vector<std::string> types;
  std::vector<std::string> prior;  // aligned with `types`, rationals as text
  std::map<std::string, std::map<std::string, double>> utility;  // type -> decision -> u(d|t)
};

/// A single agent's decision problem: decisions D, types U_i with a utility
/// table u(d|t), and a prior P_i over types. Labels are stored sorted.
class Problem {
 public:
  const std::vector<std::string>& decisions() const noexcept { return decisions_; }
  const std::vector<std::string>& types() const noexcept { return types_; }
  const Distribution& prior() const noexcept { return prior_; }

  std::size_t num_types() const noexcept { return types_.size(); }
  std::size_t num_decisions() const noexcept { return decisions_.size(); }

  double utility(std::size_t decision, TypeIndex type) const {
    return utility_[type * decisions_.size() + decision];
  }

  TypeIndex type_index(std::string_view label) const;
  std::size_t decision_index(std::string_view label) const;

  /// Copy with u(decision | type) replaced.
  Problem with_utility(std::size_t decision, TypeIndex type, double value) const;

  friend Problem validate_problem(const RawProblem& raw);

 private:
  Problem() = default;

  std::vector<std::string> decisions_;
  std::vector<std::string> types_;
  Distribution prior_;
  std::vector<double> utility_;  // row-major [type][decision]
};

/// Checks every invariant of a problem description and returns the
/// canonicalised Problem. Throws ValidationError naming the offending field.
Problem validate_problem(const RawProblem& raw);

/// A length-K vector of type indices (u_i or a report).
class PreferenceVector {
 public:
  PreferenceVector(std::vector<TypeIndex> entries, std::size_t num_types);

  static PreferenceVector from_labels(const Problem& problem,
                                      std::span<const std::string> labels);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t num_types() const noexcept { return num_types_; }
  TypeIndex operator[](std::size_t k) const { return entries_[k]; }
  std::span<const TypeIndex> entries() const noexcept { return entries_; }

  /// Occurrences of each type, i.e. K * marg(. | u).
  std::vector<std::int64_t> counts() const;

  std::vector<std::string> labels(const Problem& problem) const;

  friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;
  friend auto operator<=>(const PreferenceVector& a, const PreferenceVector& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<TypeIndex> entries_;
  std::size_t num_types_;
};

/// Integer report budget per type; the counts K * P_i^K.
class Quota {
 public:
  explicit Quota(std::vector<std::int64_t> counts);

  std::int64_t K() const noexcept { return k_; }
  std::size_t num_types() const noexcept { return counts_.size(); }
  std::int64_t count(TypeIndex t) const { return counts_[t]; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  Distribution as_distribution() const;

  friend bool operator==(const Quota&, const Quota&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t k_ = 0;
};

/// Report rejected by the quota. Lists the over- and under-represented types.
class QuotaViolation : public ValidationError {
 public:
  QuotaViolation(std::vector<TypeIndex> over, std::vector<TypeIndex> under,
                 const std::string& message)
      : ValidationError("report", message), over_(std::move(over)), under_(std::move(under)) {}

  const std::vector<TypeIndex>& over() const noexcept { return over_; }
  const std::vector<TypeIndex>& under() const noexcept { return under_; }

 private:
  std::vector<TypeIndex> over_;
  std::vector<TypeIndex> under_;
};

/// A report that satisfies a quota: an element of the message space M_i^K.
class Message {
 public:
  /// Throws QuotaViolation if `report`'s type counts differ from `quota`.
  Message(PreferenceVector report, Quota quota);

  const PreferenceVector& vector() const noexcept { return report_; }
  const Quota& quota() const noexcept { return quota_; }
  std::size_t size() const noexcept { return report_.size(); }
  TypeIndex operator[](std::size_t k) const { return report_[k]; }

  friend bool operator==(const Message& a, const Message& b) { return a.report_ == b.report_; }
  friend auto operator<=>(const Message& a, const Message& b) { return a.report_ <=> b.report_; }

 private:
  PreferenceVector report_;
  Quota quota_;
};

/// marg(v | u) = #{k : u^k = v} / K.
Distribution marginal(const PreferenceVector& v);

/// d(Q, Q') = sum_v (Q(v) - Q'(v))_+ . Throws ValidationError on size mismatch.
Rational tv_distance(const Distribution& q, const Distribution& q_prime);

/// Number of slots where the two vectors differ.
std::size_t hamming(const PreferenceVector& a, const PreferenceVector& b);

}  // namespace linking
