#pragma once

#include <cstdint>
#include <vector>

#include "linking/core.hpp"

namespace linking {

/// Integer transport plan between true types (rows) and reported types
/// (columns): at(t, r) slots of true type t report r. Row sums are the
/// truth counts K*marg(u), column sums the report counts.
class TransportPlan {
 public:
  explicit TransportPlan(std::size_t num_types)
      : n_(num_types), cells_(num_types * num_types, 0) {}

  std::size_t num_types() const noexcept { return n_; }
  std::int64_t& at(TypeIndex truth, TypeIndex report) { return cells_[truth * n_ + report]; }
  std::int64_t at(TypeIndex truth, TypeIndex report) const { return cells_[truth * n_ + report]; }

  std::vector<std::int64_t> row_sums() const;
  std::vector<std::int64_t> column_sums() const;
  std::int64_t total() const;
  /// Off-diagonal mass: the number of lies of any realisation.
  std::int64_t lies() const;

  friend bool operator==(const TransportPlan&, const TransportPlan&) = default;

 private:
  std::size_t n_;
  std::vector<std::int64_t> cells_;
};

/// The plan counting (u^k, m^k) pairs.
TransportPlan plan_of(const PreferenceVector& truth, const PreferenceVector& report);

/// Turns a plan into a concrete report for `truth`: within each true type,
/// slots are visited in increasing index and receive reported types in
/// canonical order, each repeated at(t, r) times. The result depends on u
/// only through the rank of each slot among slots of the same type, which
/// is what makes plan-driven strategies label-free.
/// Throws ValidationError if the plan's row sums differ from truth's counts.
PreferenceVector realize_plan(const TransportPlan& plan, const PreferenceVector& truth);

}  // namespace linking
