#include "hhslab/coned.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hhslab/random_walk.hpp"

namespace hhslab {

std::string to_string(ConeReason r) {
  switch (r) {
    case ConeReason::ProperSubdomain: return "proper-subdomain";
    case ConeReason::UnboundedProduct: return "unbounded-product";
    case ConeReason::WallCarrier: return "wall-carrier";
    case ConeReason::Coset: return "coset";
    case ConeReason::LargestAction: return "largest-action";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Elliptic: return "elliptic";
    case Verdict::Loxodromic: return "loxodromic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Domination d) {
  switch (d) {
    case Domination::Equivalent: return "equivalent";
    case Domination::XBelowY: return "x<=y";
    case Domination::YBelowX: return "y<=x";
    case Domination::Incomparable: return "incomparable";
  }
  return "?";
}

ConedGraph::ConedGraph(std::string name, std::shared_ptr<const CayleyBall> ball)
    : name_(std::move(name)), ball_(std::move(ball)),
      metric_(ball_->size(), kScale) {
  const std::size_t nl = ball_->letters().size();
  const auto& graph = ball_->group().graph();
  for (std::size_t i = 0; i < ball_->size(); ++i) {
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& le = ball_->letters()[l];
      auto j = ball_->neighbor(i, l);
      if (j == CayleyBall::kOutside || le.exponent < 0) continue;
      if (graph.involution(le.vertex) && static_cast<std::size_t>(j) < i) continue;
      metric_.add_edge(i, static_cast<std::size_t>(j), kScale);
    }
  }
}

std::size_t ConedGraph::add_cone(ConeVertex c,
                                 const std::vector<std::size_t>& members) {
  c.members = static_cast<std::uint32_t>(members.size());
  const std::size_t id = metric_.add_vertex();
  const int w = c.hub ? 1 : kScale;
  for (auto m : members) metric_.add_edge(id, m, w);
  cone_index_.emplace(std::make_tuple(c.type, c.wall_label, c.key), id);
  cones_.push_back(std::move(c));
  return id;
}

void ConedGraph::collapse(const CollapsedFamily& f) {
  provenance_.push_back(f);
  if (f.type == 0) return;
  const Group& group = ball_->group();
  std::map<Word, std::vector<std::size_t>> cosets;
  for (std::size_t x = 0; x < ball_->size(); ++x) {
    cosets[group.min_coset_rep(ball_->element(x), f.type)].push_back(x);
  }
  for (auto& [key, members] : cosets) {
    if (find_cone(f.type, key)) continue;
    add_cone({f.type, key, -1, f.reason, f.clique, 0}, members);
  }
}

void ConedGraph::collapse_walls(const WallSet& walls) {
  provenance_.push_back({0, ConeReason::WallCarrier, false});
  for (const auto& w : walls.walls()) {
    std::vector<std::size_t> members(w.carrier.begin(), w.carrier.end());
    add_cone({w.key.type, w.key.base, w.label, ConeReason::WallCarrier, false, 0},
             members);
  }
}

std::optional<std::size_t> ConedGraph::find_cone(VertexSet type, const Word& key,
                                                 int wall_label) const {
  auto it = cone_index_.find(std::make_tuple(type, wall_label, key));
  if (it == cone_index_.end()) return std::nullopt;
  return it->second;
}

std::string ConedGraph::vertex_name(std::size_t v) const {
  const Group& group = ball_->group();
  if (is_base(v)) return group.format(ball_->element(v));
  const auto& c = cone(v);
  std::string label = c.wall_label >= 0
                          ? "J" + group.graph().name(c.wall_label)
                          : group.graph().format_set(c.type);
  return (c.hub ? "hub(" : "cone(") + label + "@" + group.format(c.key) + ")";
}

std::optional<std::size_t> ConedGraph::act(const Word& h, std::size_t v) const {
  const Group& group = ball_->group();
  if (is_base(v)) {
    auto i = ball_->find(group.multiply(h, ball_->element(v)));
    if (!i) return std::nullopt;
    return static_cast<std::size_t>(*i);
  }
  const auto& c = cone(v);
  return find_cone(c.type, group.min_coset_rep(group.multiply(h, c.key), c.type),
                   c.wall_label);
}

std::vector<double> ConedGraph::distances(std::size_t source) const {
  auto raw = metric_.distances(source);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = raw[i] < 0 ? -1.0 : raw[i] / double(kScale);
  }
  return out;
}

double ConedGraph::distance(std::size_t u, std::size_t v) const {
  int d = metric_.distances(u)[v];
  return d < 0 ? -1.0 : d / double(kScale);
}

double ConedGraph::base_diameter() const {
  int best = 0;
  for (std::size_t s = 0; s < base_count(); ++s) {
    auto d = metric_.distances(s);
    for (std::size_t t = 0; t < base_count(); ++t) {
      if (d[t] < 0) throw std::invalid_argument("coned graph is disconnected");
      best = std::max(best, d[t]);
    }
  }
  return best / double(kScale);
}

bool ConedGraph::identical_to_cayley() const {
  if (!cones_.empty()) return false;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < ball_->size(); ++i) {
    for (std::size_t l = 0; l < ball_->letters().size(); ++l) {
      if (ball_->neighbor(i, l) != CayleyBall::kOutside) ++edges;
    }
  }
  return metric_.edge_count() * 2 == edges;
}

std::string ConedGraph::to_dot() const {
  std::ostringstream out;
  out << "graph \"" << name_ << "\" {\n";
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    out << "  v" << v << " [label=\"" << vertex_name(v) << "\"";
    if (!is_base(v)) out << (cone(v).hub ? ", shape=point" : ", shape=box, style=filled");
    out << "];\n";
  }
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    for (const auto& a : metric_.arcs(v)) {
      if (v < a.to) {
        out << "  v" << v << " -- v" << a.to;
        if (!is_base(v) || !is_base(a.to)) out << " [style=dashed]";
        out << ";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

ConedGraph cayley_graph(std::shared_ptr<const CayleyBall> ball) {
  return ConedGraph("cayley", std::move(ball));
}

ConedGraph factored_space(const Group& group,
                          const std::vector<VertexSet>& family, VertexSet a,
                          int radius, std::size_t budget) {
  auto ball = std::make_shared<const CayleyBall>(
      CayleyBall::build(group, radius, budget, a));
  ConedGraph g("C(" + group.graph().format_set(a) + ")", ball);
  for (VertexSet b : family) {
    if (b != a && is_subset(b, a)) {
      g.collapse({b, ConeReason::ProperSubdomain, false});
    }
  }
  return g;
}

ConedGraph original_top_space(const StructureIndex& idx) {
  ConedGraph g("CS", idx.ball_ptr());
  for (VertexSet b : idx.family()) {
    if (b != idx.group().graph().all()) {
      g.collapse({b, ConeReason::ProperSubdomain, false});
    }
  }
  return g;
}

ConedGraph unbounded_products_space(const StructureIndex& idx,
                                    const Restructuring& r) {
  ConedGraph g("T_S", idx.ball_ptr());
  for (VertexSet b : r.sm_types) {
    g.collapse({b, ConeReason::UnboundedProduct, false});
  }
  return g;
}

ConedGraph largest_action_graph(const StructureIndex& idx,
                                const Restructuring& r) {
  const auto& graph = idx.group().graph();
  ConedGraph g("largest", idx.ball_ptr());
  std::set<VertexSet> stars;
  for (VertexSet a : r.t_types) {
    if (a == graph.all()) continue;
    bool maximal = std::none_of(r.t_types.begin(), r.t_types.end(), [&](VertexSet b) {
      return b != graph.all() && b != a && is_subset(a, b);
    });
    if (maximal) stars.insert(graph.star(a));
  }
  for (VertexSet st : stars) {
    g.collapse({st, ConeReason::LargestAction, true});
  }
  return g;
}

ConedGraph wall_coned_graph(std::shared_ptr<const CayleyBall> ball,
                            const WallSet& walls) {
  ConedGraph g("contact", std::move(ball));
  g.collapse_walls(walls);
  return g;
}

ConedGraph coset_coned_graph(std::shared_ptr<const CayleyBall> ball,
                             const std::vector<VertexSet>& types,
                             std::string name) {
  ConedGraph g(std::move(name), std::move(ball));
  for (VertexSet t : types) g.collapse({t, ConeReason::Coset, false});
  return g;
}

ElementClassification classify_element(const Word& g, const ConedGraph& space,
                                       int max_power) {
  ElementClassification best;
  best.element = g;
  best.space = space.name();
  std::vector<std::size_t> candidates{0};
  for (const auto& a : space.metric().arcs(0)) {
    if (!space.is_base(a.to)) candidates.push_back(a.to);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  bool have = false;
  std::vector<double> best_orbit;
  for (auto base : candidates) {
    std::vector<std::size_t> orbit{base};
    while (static_cast<int>(orbit.size()) <= max_power) {
      auto next = space.act(g, orbit.back());
      if (!next) break;
      orbit.push_back(*next);
    }
    auto dist = space.distances(base);
    std::vector<double> d;
    double diam = 0;
    for (auto p : orbit) {
      d.push_back(dist[p]);
      diam = std::max(diam, dist[p]);
    }
    const int n = static_cast<int>(orbit.size()) - 1;
    if (!have || n > best.n || (n == best.n && diam < best.orbit_diameter)) {
      have = true;
      best.base = base;
      best.n = n;
      best.orbit_diameter = diam;
      best_orbit = std::move(d);
    }
  }
  best.base_name = space.vertex_name(best.base);
  if (best.n < 2) {
    best.verdict = Verdict::Inconclusive;
    best.required_radius = 2 * g.length();
    return best;
  }
  const int m = best.n / 2;
  best.translation = (best_orbit[static_cast<std::size_t>(best.n)] -
                      best_orbit[static_cast<std::size_t>(m)]) /
                     (best.n - m);
  if (best.translation >= kTauMin) {
    best.verdict = Verdict::Loxodromic;
  } else if (best.orbit_diameter <= kEllipticBound) {
    best.verdict = Verdict::Elliptic;
  } else {
    best.verdict = Verdict::Inconclusive;
  }
  return best;
}

std::string AcylindricityReport::to_csv() const {
  std::ostringstream out;
  out << "R,pairs,N\n";
  for (const auto& row : rows) {
    out << row.r << "," << row.pairs << "," << row.n << "\n";
  }
  return out.str();
}

AcylindricityReport acylindricity_probe(const ConedGraph& space, int epsilon,
                                        const std::vector<int>& levels,
                                        std::size_t pairs_per_level,
                                        std::uint64_t seed) {
  AcylindricityReport rep;
  rep.epsilon = epsilon;
  const auto& ball = space.ball();
  const std::size_t n = space.base_count();
  rep.acting = ball.size();
  std::map<std::size_t, std::vector<double>> cache;
  auto dist_from = [&](std::size_t v) -> const std::vector<double>& {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, space.distances(v)).first;
    return it->second;
  };
  std::optional<std::size_t> best_n;
  for (int r : levels) {
    AcylindricityRow row;
    row.r = r;
    auto engine = make_engine(seed, static_cast<std::uint64_t>(r));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < pairs_per_level; ++t) {
      std::size_t p = pick(engine);
      const auto& dp = dist_from(p);
      std::vector<std::size_t> far;
      for (std::size_t q = 0; q < n; ++q) {
        if (dp[q] >= r) far.push_back(q);
      }
      if (far.empty()) continue;
      std::size_t q = far[std::uniform_int_distribution<std::size_t>(
          0, far.size() - 1)(engine)];
      const auto& dq = dist_from(q);
      std::size_t count = 0;
      for (const auto& h : ball.elements()) {
        auto hp = space.act(h, p);
        auto hq = space.act(h, q);
        if (hp && hq && dp[*hp] >= 0 && dp[*hp] <= epsilon && dq[*hq] >= 0 &&
            dq[*hq] <= epsilon) {
          ++count;
        }
      }
      ++row.pairs;
      row.n = std::max(row.n, count);
    }
    if (row.pairs > 0 && (!best_n || row.n < *best_n)) {
      best_n = row.n;
      rep.r = r;
    }
    rep.rows.push_back(row);
  }
  if (best_n) rep.n = *best_n;
  return rep;
}

namespace {

// Implicit generators of a space: standard letters and, for each collapsed
// set over the coset key·W, the elements key⁻¹·member. Ball indices.
std::vector<std::size_t> implicit_generators(const ConedGraph& g) {
  const auto& ball = g.ball();
  const Group& group = ball.group();
  std::vector<char> seen(ball.size(), 0);
  for (std::size_t l = 0; l < ball.letters().size(); ++l) {
    auto j = ball.neighbor(0, l);
    if (j != CayleyBall::kOutside) seen[static_cast<std::size_t>(j)] = 1;
  }
  for (std::size_t v = g.base_count(); v < g.vertex_count(); ++v) {
    const Word inv = group.inverse(g.cone(v).key);
    for (const auto& a : g.metric().arcs(v)) {
      if (!g.is_base(a.to)) continue;
      if (auto i = ball.find(group.multiply(inv, ball.element(a.to)))) {
        seen[*i] = 1;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < ball.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

// Max length in `space` of generators with word length ≤ r and ≤ r − 2.
std::pair<double, double> length_bounds(const ConedGraph& space,
                                        const std::vector<std::size_t>& gens) {
  auto d = space.distances(0);
  const int r = space.ball().radius();
  double outer = 0, inner = 0;
  for (auto i : gens) {
    const int len = space.ball().element(i).length();
    outer = std::max(outer, d[i]);
    if (len <= r - 2) inner = std::max(inner, d[i]);
  }
  return {outer, inner};
}

}  // namespace

ActionComparison compare_actions(const ConedGraph& x, const ConedGraph& y) {
  if (x.ball().size() != y.ball().size() ||
      x.ball().radius() != y.ball().radius()) {
    throw std::invalid_argument("compare_actions: spaces over different balls");
  }
  ActionComparison c;
  std::tie(c.x_bound, c.x_bound_inner) = length_bounds(x, implicit_generators(y));
  std::tie(c.y_bound, c.y_bound_inner) = length_bounds(y, implicit_generators(x));
  // Unbounded families grow by at least 2 over the last two spheres in the
  // desk examples; saturating (bounded) ones by at most 1.
  c.y_gens_x_bounded = c.x_bound - c.x_bound_inner <= 1;
  c.x_gens_y_bounded = c.y_bound - c.y_bound_inner <= 1;
  if (c.y_gens_x_bounded && c.x_gens_y_bounded) {
    c.verdict = Domination::Equivalent;
  } else if (c.y_gens_x_bounded) {
    c.verdict = Domination::XBelowY;
  } else if (c.x_gens_y_bounded) {
    c.verdict = Domination::YBelowX;
  } else {
    c.verdict = Domination::Incomparable;
  }
  return c;
}

}  // namespace hhslab
