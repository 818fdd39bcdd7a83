#include "linking/plan.hpp"

#include <numeric>

namespace linking {

std::vector<std::int64_t> TransportPlan::row_sums() const {
  std::vector<std::int64_t> sums(n_, 0);
  for (std::size_t t = 0; t < n_; ++t)
    for (std::size_t r = 0; r < n_; ++r) sums[t] += at(t, r);
  return sums;
}

std::vector<std::int64_t> TransportPlan::column_sums() const {
  std::vector<std::int64_t> sums(n_, 0);
  for (std::size_t t = 0; t < n_; ++t)
    for (std::size_t r = 0; r < n_; ++r) sums[r] += at(t, r);
  return sums;
}

std::int64_t TransportPlan::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0});
}

std::int64_t TransportPlan::lies() const {
  std::int64_t diagonal = 0;
  for (std::size_t t = 0; t < n_; ++t) diagonal += at(t, t);
  return total() - diagonal;
}

TransportPlan plan_of(const PreferenceVector& truth, const PreferenceVector& report) {
  if (truth.size() != report.size() || truth.num_types() != report.num_types()) {
    throw ValidationError("vector", "truth and report differ in length or type set");
  }
  TransportPlan plan(truth.num_types());
  for (std::size_t k = 0; k < truth.size(); ++k) ++plan.at(truth[k], report[k]);
  return plan;
}

PreferenceVector realize_plan(const TransportPlan& plan, const PreferenceVector& truth) {
  const std::size_t n = plan.num_types();
  if (truth.num_types() != n || plan.row_sums() != truth.counts()) {
    throw ValidationError("plan", "row sums do not match the truth vector's type counts");
  }
  // next_report[t] walks the reported types of row t in canonical order.
  std::vector<TypeIndex> next_report(n, 0);
  std::vector<std::int64_t> used(n, 0);
  std::vector<TypeIndex> out(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const TypeIndex t = truth[k];
    while (used[t] == plan.at(t, next_report[t])) {
      ++next_report[t];
      used[t] = 0;
    }
    out[k] = next_report[t];
    ++used[t];
  }
  return PreferenceVector(std::move(out), n);
}

}  // namespace linking
