#include "linking/link_graph.hpp"

#include <algorithm>

namespace linking {

std::vector<std::int64_t> LinkGraph::out_degrees() const {
  std::vector<std::int64_t> d(num_types_, 0);
  for (const auto& e : edges_) ++d[e.tail];
  return d;
}

std::vector<std::int64_t> LinkGraph::in_degrees() const {
  std::vector<std::int64_t> d(num_types_, 0);
  for (const auto& e : edges_) ++d[e.head];
  return d;
}

bool LinkGraph::is_balanced() const { return out_degrees() == in_degrees(); }

void LinkGraph::add_edge(TypeIndex tail, TypeIndex head) {
  if (tail >= num_types_ || head >= num_types_) throw std::out_of_range("edge endpoint out of range");
  edges_.push_back({tail, head, edges_.size() + 1});
}

LinkGraph build_link_graph(const PreferenceVector& truth, const PreferenceVector& report) {
  if (truth.size() != report.size() || truth.num_types() != report.num_types()) {
    throw ValidationError("vector", "truth and report differ in length or type set");
  }
  LinkGraph g(truth.num_types(), truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) g.add_edge(truth[k], report[k]);
  return g;
}

LinkGraph balance_graph(LinkGraph g) {
  if (g.num_new() != 0) throw ValidationError("graph", "already carries balancing edges");
  const auto out = g.out_degrees();
  const auto in = g.in_degrees();
  std::vector<std::int64_t> need_out(g.num_types(), 0);  // in > out: new edges leave here
  std::vector<std::int64_t> need_in(g.num_types(), 0);   // out > in: new edges arrive here
  for (TypeIndex v = 0; v < g.num_types(); ++v) {
    if (in[v] > out[v]) need_out[v] = in[v] - out[v];
    if (out[v] > in[v]) need_in[v] = out[v] - in[v];
  }
  TypeIndex head = 0;
  for (TypeIndex tail = 0; tail < g.num_types(); ++tail) {
    while (need_out[tail] > 0) {
      while (need_in[head] == 0) ++head;
      g.add_edge(tail, head);
      --need_out[tail];
      --need_in[head];
    }
  }
  return g;
}

CyclePartition cycle_partition(const LinkGraph& g) {
  if (!g.is_balanced()) throw ValidationError("graph", "not balanced");

  const std::size_t num_edges = g.edges().size();
  std::vector<std::vector<std::size_t>> outgoing(g.num_types());
  for (const auto& e : g.edges()) outgoing[e.tail].push_back(e.label);  // ascending labels

  std::vector<char> removed(num_edges + 1, 0);
  std::vector<char> on_path(num_edges + 1, 0);
  constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> node_pos(g.num_types(), kAbsent);  // index into path_nodes

  std::vector<TypeIndex> path_nodes;
  std::vector<std::size_t> path_edges;
  std::size_t lowest = 1;
  std::size_t removed_count = 0;

  CyclePartition result;
  while (removed_count < num_edges) {
    std::size_t next = 0;
    if (path_edges.empty()) {
      while (removed[lowest]) ++lowest;
      next = lowest;
      for (auto v : path_nodes) node_pos[v] = kAbsent;
      path_nodes.assign(1, g.edge(next).tail);
      node_pos[path_nodes[0]] = 0;
    } else {
      for (auto label : outgoing[path_nodes.back()]) {
        if (!removed[label] && !on_path[label]) {
          next = label;
          break;
        }
      }
      if (next == 0) throw InternalError("cycle peeling stalled on a balanced graph");
    }

    path_edges.push_back(next);
    on_path[next] = 1;
    const TypeIndex head = g.edge(next).head;
    if (node_pos[head] == kAbsent) {
      node_pos[head] = path_nodes.size();
      path_nodes.push_back(head);
      continue;
    }

    // Closed a cycle at `head`: edges after its position form the cycle.
    const std::size_t start = node_pos[head];
    std::vector<std::size_t> cycle(path_edges.begin() + static_cast<std::ptrdiff_t>(start),
                                   path_edges.end());
    for (auto label : cycle) {
      removed[label] = 1;
      on_path[label] = 0;
    }
    removed_count += cycle.size();
    result.cycles.push_back(std::move(cycle));
    for (std::size_t i = start + 1; i < path_nodes.size(); ++i) node_pos[path_nodes[i]] = kAbsent;
    path_nodes.resize(start + 1);
    path_edges.resize(start);
  }
  return result;
}

std::string check_witness(const PreferenceVector& truth, const PreferenceVector& report,
                          const LemmaWitness& witness) {
  const std::size_t K = truth.size();
  if (report.size() != K) return "length mismatch";

  std::vector<char> in_subset(K + 1, 0);
  for (auto k : witness.subset) {
    if (k < 1 || k > K) return "subset element " + std::to_string(k) + " outside 1..K";
    if (in_subset[k]) return "subset element " + std::to_string(k) + " repeated";
    in_subset[k] = 1;
  }
  if (witness.pi.size() != witness.subset.size()) return "pi is not defined on exactly S";
  std::vector<char> seen_domain(K + 1, 0);
  std::vector<char> seen_image(K + 1, 0);
  for (const auto& [k, image] : witness.pi) {
    if (k < 1 || k > K || !in_subset[k]) return "pi defined outside S at " + std::to_string(k);
    if (image < 1 || image > K || !in_subset[image]) {
      return "pi(" + std::to_string(k) + ") = " + std::to_string(image) + " leaves S";
    }
    if (seen_domain[k]++) return "pi defined twice at " + std::to_string(k);
    if (seen_image[image]++) return "pi not injective at image " + std::to_string(image);
    if (report[k - 1] != truth[image - 1]) {
      return "report at " + std::to_string(k) + " differs from truth at pi(k) = " +
             std::to_string(image);
    }
  }

  const auto cu = truth.counts();
  const auto cr = report.counts();
  std::int64_t k_times_d = 0;
  for (std::size_t t = 0; t < cu.size(); ++t) k_times_d += std::max<std::int64_t>(0, cu[t] - cr[t]);
  const auto bound = static_cast<std::int64_t>(K) -
                     static_cast<std::int64_t>(truth.num_types() - 1) * k_times_d;
  if (static_cast<std::int64_t>(witness.subset.size()) < bound) {
    return "#S = " + std::to_string(witness.subset.size()) + " below bound " + std::to_string(bound);
  }
  return {};
}

LemmaWitness lemma_witness(const PreferenceVector& truth, const PreferenceVector& report) {
  const LinkGraph g = balance_graph(build_link_graph(truth, report));
  const CyclePartition partition = cycle_partition(g);

  LemmaWitness w;
  for (const auto& cycle : partition.cycles) {
    if (std::any_of(cycle.begin(), cycle.end(), [&](auto label) { return g.is_new(label); })) {
      continue;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      w.pi.emplace_back(cycle[i], cycle[(i + 1) % cycle.size()]);
    }
  }
  std::sort(w.pi.begin(), w.pi.end());
  for (const auto& [k, image] : w.pi) w.subset.push_back(k);

  if (auto failure = check_witness(truth, report, w); !failure.empty()) {
    throw InternalError("lemma witness failed its own check: " + failure);
  }
  return w;
}

}  // namespace linking
