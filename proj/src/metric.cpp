#include "hhslab/metric.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hhslab/random_walk.hpp"

namespace hhslab {

MetricGraph::MetricGraph(std::size_t n, int scale) : adj_(n), scale_(scale) {
  if (scale < 1) throw std::invalid_argument("metric scale must be positive");
}

std::size_t MetricGraph::add_vertex() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

void MetricGraph::add_edge(std::size_t u, std::size_t v, int weight) {
  if (weight < 1 || weight > 255) throw std::invalid_argument("edge weight");
  if (u == v) return;
  adj_[u].push_back({static_cast<std::uint32_t>(v),
                     static_cast<std::uint8_t>(weight)});
  adj_[v].push_back({static_cast<std::uint32_t>(u),
                     static_cast<std::uint8_t>(weight)});
  max_weight_ = std::max(max_weight_, weight);
  ++edges_;
}

std::vector<int> MetricGraph::distances(std::size_t source, int limit) const {
  std::vector<int> dist(adj_.size(), -1);
  // Dial's algorithm: a ring of max_weight+1 buckets.
  const std::size_t ring = static_cast<std::size_t>(max_weight_) + 1;
  std::vector<std::vector<std::uint32_t>> buckets(ring);
  std::vector<int> tentative(adj_.size(), -1);
  tentative[source] = 0;
  buckets[0].push_back(static_cast<std::uint32_t>(source));
  std::size_t pending = 1;
  for (int d = 0; pending > 0; ++d) {
    if (limit >= 0 && d > limit) break;
    auto& bucket = buckets[static_cast<std::size_t>(d) % ring];
    std::vector<std::uint32_t> current;
    current.swap(bucket);
    pending -= current.size();
    for (auto u : current) {
      if (dist[u] >= 0 || tentative[u] != d) continue;
      dist[u] = d;
      for (const auto& a : adj_[u]) {
        int nd = d + a.weight;
        if (dist[a.to] >= 0) continue;
        if (tentative[a.to] < 0 || nd < tentative[a.to]) {
          tentative[a.to] = nd;
          buckets[static_cast<std::size_t>(nd) % ring].push_back(a.to);
          ++pending;
        }
      }
    }
  }
  return dist;
}

std::vector<std::size_t> MetricGraph::shortest_path(std::size_t source,
                                                    std::size_t target) const {
  auto from_target = distances(target);
  if (from_target[source] < 0) return {};
  // Walk down the distance-to-target gradient; ties go to the smallest id.
  std::vector<std::size_t> path{source};
  std::size_t at = source;
  while (at != target) {
    std::size_t next = at;
    for (const auto& a : adj_[at]) {
      if (from_target[a.to] >= 0 &&
          from_target[a.to] + a.weight == from_target[at] &&
          (next == at || a.to < next)) {
        next = a.to;
      }
    }
    at = next;
    path.push_back(at);
  }
  return path;
}

bool MetricGraph::connected() const {
  if (adj_.empty()) return true;
  auto d = distances(0);
  return std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; });
}

int MetricGraph::diameter_raw() const {
  int best = 0;
  for (std::size_t s = 0; s < adj_.size(); ++s) {
    for (int x : distances(s)) {
      if (x < 0) throw std::invalid_argument("diameter of disconnected graph");
      best = std::max(best, x);
    }
  }
  return best;
}

namespace {

int defect(int ab, int cd, int ac, int bd, int ad, int bc) {
  int s[3] = {ab + cd, ac + bd, ad + bc};
  std::sort(s, s + 3);
  return s[2] - s[1];
}

}  // namespace

int four_point_raw(const std::vector<std::vector<int>>& dist) {
  const std::size_t n = dist.size();
  int best = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        for (std::size_t d = c + 1; d < n; ++d) {
          best = std::max(best, defect(dist[a][b], dist[c][d], dist[a][c],
                                       dist[b][d], dist[a][d], dist[b][c]));
        }
      }
    }
  }
  return best;
}

DeltaEstimate estimate_delta(const MetricGraph& g, std::size_t samples,
                             std::uint64_t seed, std::size_t exhaustive_limit) {
  if (!g.connected()) {
    throw std::invalid_argument("estimate_delta: graph is disconnected");
  }
  const std::size_t n = g.size();
  DeltaEstimate out;
  const double unit = 2.0 * g.scale();
  if (n <= exhaustive_limit) {
    std::vector<std::vector<int>> dist(n);
    for (std::size_t s = 0; s < n; ++s) dist[s] = g.distances(s);
    out.delta = four_point_raw(dist) / unit;
    out.exhaustive = true;
    out.pool = n;
    out.quadruples = n < 4 ? 0 : n * (n - 1) * (n - 2) * (n - 3) / 24;
    return out;
  }

  auto engine = make_engine(seed, 0xde17a);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), engine);
  const std::size_t pool = std::min<std::size_t>(n, 96);
  order.resize(pool);
  std::sort(order.begin(), order.end());
  std::vector<std::vector<int>> dist(pool);
  for (std::size_t i = 0; i < pool; ++i) {
    auto full = g.distances(order[i]);
    dist[i].resize(pool);
    for (std::size_t j = 0; j < pool; ++j) dist[i][j] = full[order[j]];
  }
  int best = 0;
  std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t a = pick(engine), b = pick(engine), c = pick(engine),
                d = pick(engine);
    best = std::max(best, defect(dist[a][b], dist[c][d], dist[a][c],
                                 dist[b][d], dist[a][d], dist[b][c]));
  }
  out.delta = best / unit;
  out.quadruples = samples;
  out.pool = pool;
  return out;
}

bool is_block_graph(const MetricGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_stack;
  int timer = 0;

  auto component_is_clique =
      [&](std::size_t stop_u, std::size_t stop_v) -> bool {
    std::vector<std::uint32_t> verts;
    std::size_t edges = 0;
    while (!edge_stack.empty()) {
      auto e = edge_stack.back();
      edge_stack.pop_back();
      verts.push_back(e.first);
      verts.push_back(e.second);
      ++edges;
      if (e.first == stop_u && e.second == stop_v) break;
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    const std::size_t k = verts.size();
    return edges == k * (k - 1) / 2;
  };

  struct Frame {
    std::uint32_t v;
    std::uint32_t parent;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{static_cast<std::uint32_t>(root),
                              static_cast<std::uint32_t>(-1), 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      auto& f = stack.back();
      const auto& arcs = g.arcs(f.v);
      if (f.next < arcs.size()) {
        auto w = arcs[f.next++].to;
        if (w == f.parent) continue;
        if (disc[w] < 0) {
          edge_stack.emplace_back(f.v, w);
          disc[w] = low[w] = timer++;
          stack.push_back({w, f.v, 0});
        } else if (disc[w] < disc[f.v]) {
          edge_stack.emplace_back(f.v, w);
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      Frame done = f;
      stack.pop_back();
      if (stack.empty()) break;
      auto& p = stack.back();
      low[p.v] = std::min(low[p.v], low[done.v]);
      if (low[done.v] >= disc[p.v] && !component_is_clique(p.v, done.v)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace hhslab
