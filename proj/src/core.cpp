#include "linking/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace linking {
namespace {

void require_distinct_nonempty(const std::vector<std::string>& labels, const std::string& field) {
  if (labels.empty()) throw ValidationError(field, "must be nonempty");
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw ValidationError(field, "empty label");
    if (!seen.insert(label).second) throw ValidationError(field, "duplicate label '" + label + "'");
  }
}

std::vector<std::size_t> sorted_order(const std::vector<std::string>& labels) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  return order;
}

}  // namespace

Problem validate_problem(const RawProblem& raw) {
  require_distinct_nonempty(raw.decisions, "decisions");
  require_distinct_nonempty(raw.types, "types");
  if (raw.prior.size() != raw.types.size()) {
    throw ValidationError("prior", "has " + std::to_string(raw.prior.size()) +
                                       " entries but there are " +
                                       std::to_string(raw.types.size()) + " types");
  }

  Problem p;
  const auto type_order = sorted_order(raw.types);
  const auto decision_order = sorted_order(raw.decisions);
  for (auto i : decision_order) p.decisions_.push_back(raw.decisions[i]);

  Rational total(0);
  for (auto i : type_order) {
    Rational w;
    try {
      w = parse_rational(raw.prior[i]);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("prior." + raw.types[i], e.what());
    }
    if (w < 0) {
      throw ValidationError("prior." + raw.types[i], "negative weight " + to_string(w));
    }
    p.types_.push_back(raw.types[i]);
    p.prior_.push_back(w);
    total += w;
  }
  if (total != 1) throw ValidationError("prior", "sums to " + to_string(total) + ", not 1");

  for (const auto& [type, row] : raw.utility) {
    if (std::find(raw.types.begin(), raw.types.end(), type) == raw.types.end()) {
      throw ValidationError("utility." + type, "unknown type");
    }
    for (const auto& [decision, value] : row) {
      if (std::find(raw.decisions.begin(), raw.decisions.end(), decision) ==
          raw.decisions.end()) {
        throw ValidationError("utility." + type + "." + decision, "unknown decision");
      }
      if (!std::isfinite(value)) {
        throw ValidationError("utility." + type + "." + decision, "not a finite number");
      }
    }
  }

  p.utility_.reserve(p.types_.size() * p.decisions_.size());
  for (const auto& type : p.types_) {
    auto row = raw.utility.find(type);
    for (const auto& decision : p.decisions_) {
      if (row == raw.utility.end() || !row->second.contains(decision)) {
        throw ValidationError("utility." + type + "." + decision, "missing entry");
      }
      p.utility_.push_back(row->second.at(decision));
    }
  }
  return p;
}

TypeIndex Problem::type_index(std::string_view label) const {
  auto it = std::lower_bound(types_.begin(), types_.end(), label);
  if (it == types_.end() || *it != label) {
    throw ValidationError("type", "unknown type label '" + std::string(label) + "'");
  }
  return static_cast<TypeIndex>(it - types_.begin());
}

std::size_t Problem::decision_index(std::string_view label) const {
  auto it = std::lower_bound(decisions_.begin(), decisions_.end(), label);
  if (it == decisions_.end() || *it != label) {
    throw ValidationError("decision", "unknown decision label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - decisions_.begin());
}

Problem Problem::with_utility(std::size_t decision, TypeIndex type, double value) const {
  if (type >= num_types() || decision >= num_decisions()) {
    throw std::out_of_range("utility index out of range");
  }
  if (!std::isfinite(value)) throw ValidationError("utility", "not a finite number");
  Problem copy = *this;
  copy.utility_[type * decisions_.size() + decision] = value;
  return copy;
}

PreferenceVector::PreferenceVector(std::vector<TypeIndex> entries, std::size_t num_types)
    : entries_(std::move(entries)), num_types_(num_types) {
  if (entries_.empty()) throw ValidationError("vector", "K must be at least 1");
  for (auto t : entries_) {
    if (t >= num_types_) {
      throw ValidationError("vector", "type index " + std::to_string(t) + " out of range");
    }
  }
}

PreferenceVector PreferenceVector::from_labels(const Problem& problem,
                                               std::span<const std::string> labels) {
  std::vector<TypeIndex> entries;
  entries.reserve(labels.size());
  for (const auto& label : labels) entries.push_back(problem.type_index(label));
  return PreferenceVector(std::move(entries), problem.num_types());
}

std::vector<std::int64_t> PreferenceVector::counts() const {
  std::vector<std::int64_t> c(num_types_, 0);
  for (auto t : entries_) ++c[t];
  return c;
}

std::vector<std::string> PreferenceVector::labels(const Problem& problem) const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (auto t : entries_) out.push_back(problem.types().at(t));
  return out;
}

Quota::Quota(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw ValidationError("quota", "no types");
  for (auto c : counts_) {
    if (c < 0) throw ValidationError("quota", "negative count");
    k_ += c;
  }
  if (k_ < 1) throw ValidationError("quota", "counts must sum to K >= 1");
}

Distribution Quota::as_distribution() const {
  Distribution d;
  d.reserve(counts_.size());
  for (auto c : counts_) d.emplace_back(c, k_);
  return d;
}

Message::Message(PreferenceVector report, Quota quota)
    : report_(std::move(report)), quota_(std::move(quota)) {
  if (report_.num_types() != quota_.num_types()) {
    throw ValidationError("report", "type set does not match the quota");
  }
  const auto have = report_.counts();
  std::vector<TypeIndex> over;
  std::vector<TypeIndex> under;
  for (TypeIndex t = 0; t < have.size(); ++t) {
    if (have[t] > quota_.count(t)) over.push_back(t);
    if (have[t] < quota_.count(t)) under.push_back(t);
  }
  if (!over.empty() || !under.empty()) {
    std::string msg = "violates quota;";
    for (auto t : over) {
      msg += " type #" + std::to_string(t) + " over (" + std::to_string(have[t]) + " > " +
             std::to_string(quota_.count(t)) + ")";
    }
    for (auto t : under) {
      msg += " type #" + std::to_string(t) + " under (" + std::to_string(have[t]) + " < " +
             std::to_string(quota_.count(t)) + ")";
    }
    throw QuotaViolation(std::move(over), std::move(under), msg);
  }
}

Distribution marginal(const PreferenceVector& v) {
  const auto k = static_cast<std::int64_t>(v.size());
  Distribution d;
  d.reserve(v.num_types());
  for (auto c : v.counts()) d.emplace_back(c, k);
  return d;
}

Rational tv_distance(const Distribution& q, const Distribution& q_prime) {
  if (q.size() != q_prime.size()) {
    throw ValidationError("distribution", "type sets differ in size (" +
                                              std::to_string(q.size()) + " vs " +
                                              std::to_string(q_prime.size()) + ")");
  }
  Rational d(0);
  for (std::size_t i = 0; i < q.size(); ++i) d += positive_part(q[i] - q_prime[i]);
  return d;
}

std::size_t hamming(const PreferenceVector& a, const PreferenceVector& b) {
  if (a.size() != b.size()) throw ValidationError("vector", "length mismatch");
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) n += a[k] != b[k];
  return n;
}

}  // namespace linking
