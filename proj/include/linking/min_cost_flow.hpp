#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace linking {

// Successive shortest paths with Bellman-Ford on the residual graph. Meant
// for the tiny type-by-type networks here; no potentials, no heap.
class MinCostFlow {
 public:
  struct Result {
    std::int64_t flow = 0;
    double cost = 0.0;
  };

  explicit MinCostFlow(std::size_t num_nodes) : adjacency_(num_nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t capacity, double cost) {
    if (from >= adjacency_.size() || to >= adjacency_.size()) {
      throw std::out_of_range("min-cost-flow node out of range");
    }
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, capacity, cost});
    arcs_.push_back({from, 0, -cost});
    adjacency_[from].push_back(id);
    adjacency_[to].push_back(id + 1);
    return id;
  }

  /// Pushes up to `demand` units from source to sink at minimum cost.
  Result solve(std::size_t source, std::size_t sink, std::int64_t demand) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr double kEps = 1e-12;
    const std::size_t n = adjacency_.size();
    Result result;
    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    while (result.flow < demand) {
      std::fill(dist.begin(), dist.end(), kInf);
      dist[source] = 0.0;
      for (std::size_t round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == kInf) continue;
          for (auto id : adjacency_[u]) {
            const Arc& a = arcs_[id];
            if (a.residual > 0 && dist[u] + a.cost < dist[a.to] - kEps) {
              dist[a.to] = dist[u] + a.cost;
              via[a.to] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[sink] == kInf) break;

      std::int64_t push = demand - result.flow;
      for (std::size_t v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        push = std::min(push, arcs_[via[v]].residual);
      }
      for (std::size_t v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].residual -= push;
        arcs_[via[v] ^ 1].residual += push;
      }
      result.flow += push;
      result.cost += static_cast<double>(push) * dist[sink];
    }
    return result;
  }

  /// Flow currently carried by the arc returned from add_edge.
  std::int64_t flow(std::size_t edge_id) const { return arcs_[edge_id ^ 1].residual; }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t residual;
    double cost;
  };

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace linking
