#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "linking/core.hpp"

namespace linking {

/// Directed multigraph on the type set. Edge labels are 1-based: labels
/// 1..K are the original edges u^k -> û^k, labels K+1..K+K' are balancing
/// edges added by balance_graph.
class LinkGraph {
 public:
  struct Edge {
    TypeIndex tail;
    TypeIndex head;
    std::size_t label;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  LinkGraph(std::size_t num_types, std::size_t num_original)
      : num_types_(num_types), num_original_(num_original) {}

  std::size_t num_types() const noexcept { return num_types_; }
  /// K, the number of original edges.
  std::size_t num_original() const noexcept { return num_original_; }
  /// K', the number of balancing edges.
  std::size_t num_new() const noexcept { return edges_.size() - num_original_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t label) const { return edges_.at(label - 1); }
  bool is_new(std::size_t label) const noexcept { return label > num_original_; }

  std::vector<std::int64_t> out_degrees() const;
  std::vector<std::int64_t> in_degrees() const;
  bool is_balanced() const;

  /// Appends an edge labelled edges().size() + 1.
  void add_edge(TypeIndex tail, TypeIndex head);

 private:
  std::size_t num_types_;
  std::size_t num_original_;
  std::vector<Edge> edges_;
};

/// Edge-disjoint cycles covering a balanced LinkGraph. Each cycle lists edge
/// labels in traversal order; the head of each edge is the tail of the next.
struct CyclePartition {
  std::vector<std::vector<std::size_t>> cycles;
};

/// S ⊆ {1..K} with a bijection π on S, stored as (k, π(k)) pairs sorted by k.
/// Certifies û^k = u^{π(k)} for every k in S.
struct LemmaWitness {
  std::vector<std::size_t> subset;
  std::vector<std::pair<std::size_t, std::size_t>> pi;
};

/// One edge u^k -> û^k for every slot k.
LinkGraph build_link_graph(const PreferenceVector& truth, const PreferenceVector& report);

/// Adds balancing edges until in-degree equals out-degree everywhere. Each new
/// edge runs from a node whose in-degree exceeds its out-degree to a node
/// whose out-degree exceeds its in-degree; both sides are matched in
/// canonical node order. Adds exactly K * d(marg u, marg û) edges.
/// Throws ValidationError if `g` already carries balancing edges.
LinkGraph balance_graph(LinkGraph g);

/// Peels cycles off a balanced graph: start a path on the lowest-labelled
/// remaining edge, keep extending it with the lowest-labelled unused
/// outgoing edge until a node repeats, remove that cycle, repeat.
/// Throws ValidationError on an unbalanced graph.
CyclePartition cycle_partition(const LinkGraph& g);

/// Builds, balances and partitions the link graph of (u, û), drops every
/// cycle through a balancing edge and reads off S and π from the rest.
/// The result is checked against both witness properties before returning;
/// a failed check throws InternalError.
LemmaWitness lemma_witness(const PreferenceVector& truth, const PreferenceVector& report);

/// Checks û^k = u^{π(k)} on S, that π is a bijection on S ⊆ {1..K}, and
/// #S >= K - (#U_i - 1) * K * d(marg u, marg û). Empty string when valid,
/// otherwise a description of the first failure.
std::string check_witness(const PreferenceVector& truth, const PreferenceVector& report,
                          const LemmaWitness& witness);

}  // namespace linking
