#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hhslab {

/// Undirected graph with small positive integer edge weights. Distances are
/// kept in raw units; the metric value is raw / scale. Coned graphs use
/// scale 2 so that hub edges of weight 1 give half-unit distances.
class MetricGraph {
 public:
  struct Arc {
    std::uint32_t to;
    std::uint8_t weight;
  };

  explicit MetricGraph(std::size_t n = 0, int scale = 1);

  std::size_t size() const { return adj_.size(); }
  int scale() const { return scale_; }
  std::size_t edge_count() const { return edges_; }

  std::size_t add_vertex();
  void add_edge(std::size_t u, std::size_t v, int weight);
  const std::vector<Arc>& arcs(std::size_t u) const { return adj_[u]; }

  /// Single-source distances in raw units (-1 if unreachable), by bucket
  /// queue. `limit` stops the search beyond that raw distance.
  std::vector<int> distances(std::size_t source, int limit = -1) const;

  /// A shortest path from source to target (inclusive), empty if none.
  std::vector<std::size_t> shortest_path(std::size_t source,
                                         std::size_t target) const;

  bool connected() const;
  /// Exact diameter in raw units via BFS from every vertex.
  int diameter_raw() const;
  double diameter() const { return diameter_raw() / double(scale_); }

 private:
  std::vector<std::vector<Arc>> adj_;
  int scale_;
  int max_weight_ = 1;
  std::size_t edges_ = 0;
};

struct DeltaEstimate {
  /// Four-point defect in metric units (a multiple of 1/(2·scale)).
  double delta = 0;
  bool exhaustive = false;
  std::size_t quadruples = 0;
  std::size_t pool = 0;
};

/// Gromov four-point estimate. Exhaustive over all quadruples when the graph
/// has at most `exhaustive_limit` vertices; otherwise distances are taken
/// from a seeded pool of sources and `samples` quadruples from the pool are
/// checked. Throws std::invalid_argument on a disconnected graph.
DeltaEstimate estimate_delta(const MetricGraph& g, std::size_t samples,
                             std::uint64_t seed,
                             std::size_t exhaustive_limit = 300);

/// Exhaustive four-point defect for a full raw distance matrix.
int four_point_raw(const std::vector<std::vector<int>>& dist);

/// Every biconnected component is a clique. For connected graphs this is
/// exactly 0-hyperbolicity of the path metric (ignoring weights).
bool is_block_graph(const MetricGraph& g);

}  // namespace hhslab
