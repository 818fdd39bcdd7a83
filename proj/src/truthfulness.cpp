#include "linking/truthfulness.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "combinatorics.hpp"

namespace linking {
namespace {

void require_compatible(const PreferenceVector& truth, const Quota& quota) {
  if (truth.num_types() != quota.num_types()) {
    throw ValidationError("quota", "type set does not match the preference vector");
  }
  if (static_cast<std::int64_t>(truth.size()) != quota.K()) {
    throw ValidationError("quota", "K = " + std::to_string(quota.K()) +
                                       " but the vector has length " +
                                       std::to_string(truth.size()));
  }
}

using detail::kSaturated;
using detail::saturating_mul;

std::uint64_t binomial(std::int64_t n, std::int64_t k) { return detail::saturating_binomial(n, k); }

// Per-type slot positions, grouped by true type.
std::vector<std::vector<std::size_t>> positions_by_type(const PreferenceVector& v) {
  std::vector<std::vector<std::size_t>> pos(v.num_types());
  for (std::size_t k = 0; k < v.size(); ++k) pos[v[k]].push_back(k);
  return pos;
}

// Reports that must be placed on lying slots: each deficit type repeated by its deficit.
std::vector<TypeIndex> missing_reports(const std::vector<std::int64_t>& have, const Quota& quota) {
  std::vector<TypeIndex> out;
  for (TypeIndex t = 0; t < have.size(); ++t) {
    for (std::int64_t i = have[t]; i < quota.count(t); ++i) out.push_back(t);
  }
  return out;
}

}  // namespace

Quota compute_quota(const Distribution& prior, std::int64_t K) {
  if (K < 1) throw ValidationError("K", "must be at least 1");
  if (prior.empty()) throw ValidationError("prior", "no types");

  std::vector<std::int64_t> counts(prior.size());
  std::vector<Rational> remainder(prior.size());
  std::int64_t assigned = 0;
  for (std::size_t t = 0; t < prior.size(); ++t) {
    const Rational scaled = prior[t] * K;
    counts[t] = scaled.numerator() / scaled.denominator();
    remainder[t] = scaled - counts[t];
    assigned += counts[t];
  }

  std::vector<std::size_t> order(prior.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < K; ++i, ++assigned) ++counts[order[i % order.size()]];
  return Quota(std::move(counts));
}

std::int64_t min_lie_count(const PreferenceVector& truth, const Quota& quota) {
  require_compatible(truth, quota);
  const auto have = truth.counts();
  std::int64_t lies = 0;
  for (TypeIndex t = 0; t < have.size(); ++t) lies += std::max<std::int64_t>(0, have[t] - quota.count(t));
  return lies;
}

std::int64_t star_bound(const PreferenceVector& truth, const Quota& quota) {
  return static_cast<std::int64_t>(truth.num_types() - 1) * min_lie_count(truth, quota);
}

std::uint64_t count_minimal_lie_messages(const PreferenceVector& truth, const Quota& quota) {
  require_compatible(truth, quota);
  const auto have = truth.counts();
  std::uint64_t count = 1;
  // Which slots of each surplus type lie.
  for (TypeIndex t = 0; t < have.size(); ++t) {
    if (have[t] > quota.count(t)) count = saturating_mul(count, binomial(have[t], have[t] - quota.count(t)));
  }
  // Arrangements of the missing reports over the lying slots.
  std::int64_t remaining = 0;
  for (TypeIndex t = 0; t < have.size(); ++t) {
    if (quota.count(t) > have[t]) {
      const std::int64_t deficit = quota.count(t) - have[t];
      remaining += deficit;
      count = saturating_mul(count, binomial(remaining, deficit));
    }
  }
  return count;
}

std::vector<Message> minimal_lie_messages(const PreferenceVector& truth, const Quota& quota,
                                          std::uint64_t cap) {
  const std::uint64_t expected = count_minimal_lie_messages(truth, quota);
  if (expected > cap) {
    throw CapExceeded("minimal-lie message set has " +
                      (expected == kSaturated ? std::string("more than 2^64") : std::to_string(expected)) +
                      " elements, above the cap of " + std::to_string(cap) +
                      "; use the canonical selection or the sampler");
  }

  const auto have = truth.counts();
  const auto pos = positions_by_type(truth);
  std::vector<TypeIndex> surplus_types;
  for (TypeIndex t = 0; t < have.size(); ++t) {
    if (have[t] > quota.count(t)) surplus_types.push_back(t);
  }
  const auto fill = missing_reports(have, quota);

  std::vector<Message> out;
  out.reserve(static_cast<std::size_t>(expected));
  std::vector<std::size_t> lying;

  // Recurse over surplus types choosing which of their slots lie, then
  // enumerate every distinct arrangement of `fill` over the chosen slots.
  auto choose = [&](auto&& self, std::size_t depth) -> void {
    if (depth == surplus_types.size()) {
      std::vector<std::size_t> slots = lying;
      std::sort(slots.begin(), slots.end());
      std::vector<TypeIndex> arrangement = fill;  // sorted by construction
      do {
        std::vector<TypeIndex> entries(truth.entries().begin(), truth.entries().end());
        for (std::size_t i = 0; i < slots.size(); ++i) entries[slots[i]] = arrangement[i];
        out.emplace_back(PreferenceVector(std::move(entries), truth.num_types()), quota);
      } while (std::next_permutation(arrangement.begin(), arrangement.end()));
      return;
    }
    const TypeIndex t = surplus_types[depth];
    const auto& slots_of_t = pos[t];
    const auto take = static_cast<std::size_t>(have[t] - quota.count(t));
    std::vector<bool> mask(slots_of_t.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(take), true);
    do {
      const std::size_t before = lying.size();
      for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) lying.push_back(slots_of_t[i]);
      self(self, depth + 1);
      lying.resize(before);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  };
  choose(choose, 0);

  std::sort(out.begin(), out.end());
  if (out.size() != expected) {
    throw InternalError("minimal-lie enumeration produced " + std::to_string(out.size()) +
                        " messages, expected " + std::to_string(expected));
  }
  return out;
}

TransportPlan canonical_min_lie_plan(const PreferenceVector& truth, const Quota& quota) {
  require_compatible(truth, quota);
  const auto have = truth.counts();
  const std::size_t n = have.size();
  TransportPlan plan(n);
  std::vector<std::int64_t> surplus(n, 0);
  std::vector<std::int64_t> deficit(n, 0);
  for (TypeIndex t = 0; t < n; ++t) {
    plan.at(t, t) = std::min(have[t], quota.count(t));
    surplus[t] = have[t] - plan.at(t, t);
    deficit[t] = quota.count(t) - plan.at(t, t);
  }
  TypeIndex r = 0;
  for (TypeIndex t = 0; t < n; ++t) {
    while (surplus[t] > 0) {
      while (deficit[r] == 0) ++r;
      const std::int64_t moved = std::min(surplus[t], deficit[r]);
      plan.at(t, r) += moved;
      surplus[t] -= moved;
      deficit[r] -= moved;
    }
  }
  return plan;
}

Message canonical_min_lie_message(const PreferenceVector& truth, const Quota& quota) {
  return Message(realize_plan(canonical_min_lie_plan(truth, quota), truth), quota);
}

Message sample_minimal_lie_message(const PreferenceVector& truth, const Quota& quota,
                                   std::mt19937_64& rng) {
  require_compatible(truth, quota);
  const auto have = truth.counts();
  auto pos = positions_by_type(truth);
  std::vector<std::size_t> lying;
  for (TypeIndex t = 0; t < have.size(); ++t) {
    const std::int64_t extra = have[t] - quota.count(t);
    if (extra <= 0) continue;
    // Partial Fisher-Yates: the first `extra` entries form a uniform subset.
    auto& p = pos[t];
    for (std::int64_t i = 0; i < extra; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), p.size() - 1);
      std::swap(p[static_cast<std::size_t>(i)], p[pick(rng)]);
      lying.push_back(p[static_cast<std::size_t>(i)]);
    }
  }
  std::sort(lying.begin(), lying.end());
  auto fill = missing_reports(have, quota);
  std::shuffle(fill.begin(), fill.end(), rng);

  std::vector<TypeIndex> entries(truth.entries().begin(), truth.entries().end());
  for (std::size_t i = 0; i < lying.size(); ++i) entries[lying[i]] = fill[i];
  return Message(PreferenceVector(std::move(entries), truth.num_types()), quota);
}

Message chain_message(const PreferenceVector& truth, const Quota& quota) {
  const TransportPlan base = canonical_min_lie_plan(truth, quota);
  const auto have = truth.counts();
  const std::size_t n = have.size();

  std::vector<std::int64_t> spare(n, 0);  // truthful slots of balanced types still unused
  for (TypeIndex w = 0; w < n; ++w) {
    if (have[w] == quota.count(w)) spare[w] = base.at(w, w);
  }

  TransportPlan plan = base;
  for (TypeIndex t = 0; t < n; ++t) {
    for (TypeIndex r = 0; r < n; ++r) {
      if (t == r) continue;
      for (std::int64_t unit = 0; unit < base.at(t, r); ++unit) {
        TypeIndex from = t;
        --plan.at(t, r);
        for (TypeIndex w = 0; w < n; ++w) {
          if (spare[w] == 0) continue;
          --spare[w];
          --plan.at(w, w);
          ++plan.at(from, w);
          from = w;
        }
        ++plan.at(from, r);
      }
    }
  }
  return Message(realize_plan(plan, truth), quota);
}

bool is_approx_truthful(const PreferenceVector& truth, const Message& report) {
  return static_cast<std::int64_t>(hamming(truth, report.vector())) ==
         min_lie_count(truth, report.quota());
}

bool is_approx_truthful_star(const PreferenceVector& truth, const Message& report) {
  return static_cast<std::int64_t>(hamming(truth, report.vector())) <=
         star_bound(truth, report.quota());
}

bool is_permutation_truthful_naive(const PreferenceVector& truth, const PreferenceVector& report,
                                   std::size_t max_k) {
  const std::size_t K = truth.size();
  if (report.size() != K || report.num_types() != truth.num_types()) {
    throw ValidationError("vector", "truth and report differ in length or type set");
  }
  if (K > max_k || K >= 63) {
    throw CapExceeded("naive permutation scan limited to K <= " + std::to_string(max_k) +
                      ", got K = " + std::to_string(K));
  }
  std::vector<std::int64_t> balance(truth.num_types());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << K); ++mask) {
    std::fill(balance.begin(), balance.end(), 0);
    bool has_lie = false;
    for (std::size_t k = 0; k < K; ++k) {
      if (!(mask >> k & 1U)) continue;
      ++balance[truth[k]];
      --balance[report[k]];
      has_lie = has_lie || truth[k] != report[k];
    }
    if (has_lie && std::all_of(balance.begin(), balance.end(), [](auto b) { return b == 0; })) {
      return false;
    }
  }
  return true;
}

bool is_permutation_truthful(const PreferenceVector& truth, const PreferenceVector& report) {
  const std::size_t n = truth.num_types();
  if (report.size() != truth.size() || report.num_types() != n) {
    throw ValidationError("vector", "truth and report differ in length or type set");
  }
  std::vector<char> edge(n * n, 0);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (truth[k] == report[k]) continue;
    char& e = edge[truth[k] * n + report[k]];
    if (!e) {
      e = 1;
      ++indegree[report[k]];
    }
  }
  // Kahn's algorithm: acyclic iff every node can be peeled.
  std::vector<TypeIndex> ready;
  for (TypeIndex v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t peeled = 0;
  while (!ready.empty()) {
    const TypeIndex v = ready.back();
    ready.pop_back();
    ++peeled;
    for (TypeIndex w = 0; w < n; ++w) {
      if (edge[v * n + w] && --indegree[w] == 0) ready.push_back(w);
    }
  }
  return peeled == n;
}

}  // namespace linking
