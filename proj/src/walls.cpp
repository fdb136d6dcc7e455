#include "hhslab/walls.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hhslab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

VertexSet wall_key_type(const DefiningGraph& g, int v) {
  return g.involution(v) ? g.star(v) : g.link(v);
}

ParabolicCoset wall_key(const Group& group, const Word& g, const Letter& l) {
  const auto& graph = group.graph();
  if (graph.involution(l.vertex)) return group.coset(g, graph.star(l.vertex));
  Word tail = l.exponent > 0 ? g : group.multiply(g, l);
  return group.coset(tail, graph.link(l.vertex));
}

WallSet::WallSet(const CayleyBall& ball) : letters_(ball.letters().size()) {
  const Group& group = ball.group();
  const auto& graph = group.graph();
  const auto& letters = ball.letters();
  const std::size_t n = ball.size();

  // Edge ids: one per (tail, positive letter) with the head inside the ball.
  std::vector<std::int32_t> edge_id(n * letters_, -1);
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (tail, letter)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < letters_; ++l) {
      auto j = ball.neighbor(i, l);
      if (j == CayleyBall::kOutside || letters[l].exponent < 0) continue;
      if (graph.involution(letters[l].vertex) &&
          static_cast<std::size_t>(j) < i) {
        continue;
      }
      edge_id[i * letters_ + l] = static_cast<std::int32_t>(edges.size());
      edges.emplace_back(i, l);
    }
  }
  auto id_of = [&](std::size_t i, std::size_t l) -> std::int32_t {
    auto j = ball.neighbor(i, l);
    if (j == CayleyBall::kOutside) return -1;
    const auto& le = letters[l];
    if (le.exponent < 0) {
      // reverse of the positive edge j → i
      for (std::size_t m = 0; m < letters_; ++m) {
        if (letters[m].vertex == le.vertex && letters[m].exponent > 0) {
          return edge_id[static_cast<std::size_t>(j) * letters_ + m];
        }
      }
      return -1;
    }
    if (graph.involution(le.vertex) && static_cast<std::size_t>(j) < i) {
      return edge_id[static_cast<std::size_t>(j) * letters_ + l];
    }
    return edge_id[i * letters_ + l];
  };

  UnionFind uf(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [i, l] = edges[e];
    const int v = letters[l].vertex;
    for (std::size_t t = 0; t < letters_; ++t) {
      if (!graph.adjacent(v, letters[t].vertex)) continue;
      auto it = ball.neighbor(i, t);
      if (it == CayleyBall::kOutside) continue;
      auto other = id_of(static_cast<std::size_t>(it), l);
      if (other >= 0) uf.unite(e, static_cast<std::size_t>(other));
    }
  }

  // Group classes, ordered by (label, key).
  std::map<std::pair<int, Word>, std::size_t> by_key;
  std::vector<std::int32_t> class_wall(edges.size(), -1);
  std::vector<std::size_t> root_of_wall;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [i, l] = edges[e];
    auto key = wall_key(group, ball.element(i), letters[l]);
    auto [it, fresh] = by_key.emplace(
        std::make_pair(letters[l].vertex, key.base), root_of_wall.size());
    const std::size_t root = uf.find(e);
    if (fresh) {
      root_of_wall.push_back(root);
      if (class_wall[root] >= 0) {
        throw std::logic_error("wall parallelism class carries two keys");
      }
      class_wall[root] = static_cast<std::int32_t>(it->second);
    } else if (root_of_wall[it->second] != root) {
      throw std::logic_error("wall key split across parallelism classes");
    }
  }

  std::vector<std::size_t> rank(root_of_wall.size());
  walls_.resize(root_of_wall.size());
  std::size_t r = 0;
  for (const auto& [k, idx] : by_key) {
    rank[idx] = r;
    walls_[r].label = k.first;
    walls_[r].key = {k.second, wall_key_type(graph, k.first)};
    ++r;
  }
  std::vector<std::int32_t> wall_of_edge(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto w = rank[static_cast<std::size_t>(class_wall[uf.find(e)])];
    wall_of_edge[e] = static_cast<std::int32_t>(w);
    auto [i, l] = edges[e];
    auto j = static_cast<CayleyBall::Index>(ball.neighbor(i, l));
    walls_[w].dual_edges.push_back({static_cast<CayleyBall::Index>(i), j});
  }
  for (auto& w : walls_) {
    for (const auto& d : w.dual_edges) {
      w.carrier.push_back(d.tail);
      w.carrier.push_back(d.head);
    }
    std::sort(w.carrier.begin(), w.carrier.end());
    w.carrier.erase(std::unique(w.carrier.begin(), w.carrier.end()),
                    w.carrier.end());
  }

  edge_wall_.assign(n * letters_, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < letters_; ++l) {
      auto e = id_of(i, l);
      if (e >= 0) edge_wall_[i * letters_ + l] = wall_of_edge[static_cast<std::size_t>(e)];
    }
  }
}

std::optional<std::size_t> WallSet::find(int label, const Word& key_base) const {
  auto it = std::lower_bound(
      walls_.begin(), walls_.end(), std::make_pair(label, &key_base),
      [](const Wall& w, const auto& k) {
        if (w.label != k.first) return w.label < k.first;
        return w.key.base < *k.second;
      });
  if (it == walls_.end() || it->label != label || !(it->key.base == key_base)) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - walls_.begin());
}

std::vector<std::size_t> WallSet::crossed_by_path(const CayleyBall& ball,
                                                  std::size_t i) const {
  std::vector<std::size_t> out;
  const auto& letters = ball.letters();
  std::size_t at = 0;
  for (const auto& step : ball.group().spell(ball.element(i))) {
    std::size_t l = 0;
    while (letters[l].vertex != step.vertex ||
           letters[l].exponent != step.exponent) {
      ++l;
    }
    out.push_back(static_cast<std::size_t>(wall_of(at, l)));
    at = static_cast<std::size_t>(ball.neighbor(at, l));
  }
  return out;
}

std::vector<Word> wall_stabilizer(const Wall& w, const CayleyBall& ball) {
  const Group& group = ball.group();
  const Word inv = group.inverse(w.key.base);
  std::vector<Word> out;
  for (const auto& h : ball.elements()) {
    if (group.in_parabolic(group.multiply(group.multiply(inv, h), w.key.base),
                           w.key.type)) {
      out.push_back(h);
    }
  }
  return out;
}

bool stabilizes_dual_edges(const Word& h, std::size_t wall,
                           const WallSet& walls, const CayleyBall& ball) {
  const Group& group = ball.group();
  const auto& letters = ball.letters();
  const int v = walls[wall].label;
  bool any = false;
  for (const auto& e : walls[wall].dual_edges) {
    auto t = ball.find(group.multiply(h, ball.element(e.tail)));
    auto s = ball.find(group.multiply(h, ball.element(e.head)));
    if (!t || !s) continue;
    any = true;
    // The image edge is t—s; find the wall through it.
    std::int32_t img = -1;
    for (std::size_t l = 0; l < letters.size(); ++l) {
      if (letters[l].vertex == v &&
          ball.neighbor(*t, l) == static_cast<std::int32_t>(*s)) {
        img = walls.wall_of(*t, l);
      }
    }
    if (img != static_cast<std::int32_t>(wall)) return false;
  }
  return any;
}

std::size_t ContactGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& a : adjacency) e += a.size();
  return e / 2;
}

MetricGraph ContactGraph::metric() const {
  MetricGraph m(adjacency.size(), 1);
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    for (auto j : adjacency[i]) {
      if (i < j) m.add_edge(i, j, 1);
    }
  }
  return m;
}

ContactGraph contact_graph(const WallSet& walls, const CayleyBall& ball) {
  const std::size_t nl = ball.letters().size();
  const auto& letters = ball.letters();
  const auto& graph = ball.group().graph();
  std::vector<std::vector<std::uint32_t>> at_vertex(ball.size());
  for (std::size_t w = 0; w < walls.size(); ++w) {
    for (auto x : walls[w].carrier) {
      at_vertex[x].push_back(static_cast<std::uint32_t>(w));
    }
  }
  ContactGraph cg;
  cg.adjacency.resize(walls.size());
  for (const auto& here : at_vertex) {
    for (std::size_t a = 0; a < here.size(); ++a) {
      for (std::size_t b = a + 1; b < here.size(); ++b) {
        if (here[a] == here[b]) continue;
        cg.adjacency[here[a]].push_back(here[b]);
        cg.adjacency[here[b]].push_back(here[a]);
      }
    }
  }
  for (auto& adj : cg.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }

  // Squares g, gu, gv, guv with u, v adjacent.
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t p = 0; p < nl; ++p) {
      for (std::size_t q = 0; q < nl; ++q) {
        if (!graph.adjacent(letters[p].vertex, letters[q].vertex)) continue;
        auto gu = ball.neighbor(i, p);
        auto gv = ball.neighbor(i, q);
        if (gu == CayleyBall::kOutside || gv == CayleyBall::kOutside) continue;
        if (ball.neighbor(static_cast<std::size_t>(gu), q) ==
            CayleyBall::kOutside) {
          continue;
        }
        auto a = static_cast<std::uint32_t>(walls.wall_of(i, p));
        auto b = static_cast<std::uint32_t>(walls.wall_of(i, q));
        cg.crossings.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  std::sort(cg.crossings.begin(), cg.crossings.end());
  cg.crossings.erase(std::unique(cg.crossings.begin(), cg.crossings.end()),
                     cg.crossings.end());
  return cg;
}

std::string wall_name(const Group& group, const Wall& w) {
  return group.graph().name(w.label) + "@" + group.format(w.key.base);
}

std::string to_dot(const ContactGraph& cg, const WallSet& walls,
                   const Group& group) {
  std::ostringstream out;
  out << "graph contact {\n";
  for (std::size_t i = 0; i < walls.size(); ++i) {
    out << "  w" << i << " [label=\"" << wall_name(group, walls[i]) << "\"];\n";
  }
  for (std::size_t i = 0; i < cg.adjacency.size(); ++i) {
    for (auto j : cg.adjacency[i]) {
      if (i < j) out << "  w" << i << " -- w" << j << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace hhslab
