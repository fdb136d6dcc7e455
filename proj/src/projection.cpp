#include "hhslab/projection.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "hhslab/random_walk.hpp"

namespace hhslab {

std::string to_string(StructureKind k) {
  return k == StructureKind::Original ? "original" : "unbounded-products";
}

ProjectionTable::ProjectionTable(const StructureIndex& idx,
                                 const Restructuring& r, StructureKind kind)
    : idx_(&idx), r_(&r), kind_(kind), factor_radius_(2 * idx.ball().radius()) {
  if (kind == StructureKind::Original) {
    members_.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) members_[i] = i;
    types_ = idx.family();
    top_ = std::make_unique<ConedGraph>(original_top_space(idx));
  } else {
    members_ = r.t;
    types_ = r.t_types;
    top_ = std::make_unique<ConedGraph>(unbounded_products_space(idx, r));
  }
}

bool ProjectionTable::contains(std::size_t d) const {
  if (kind_ == StructureKind::Original) return d < idx_->size();
  return r_->in_t(d);
}

const ConedGraph& ProjectionTable::space_for_type(VertexSet a) const {
  if (a == idx_->group().graph().all()) return *top_;
  std::lock_guard lock(*mu_);
  auto it = factors_.find(a);
  if (it == factors_.end()) {
    it = factors_
             .emplace(a, std::make_unique<ConedGraph>(factored_space(
                             idx_->group(), idx_->family(), a, factor_radius_)))
             .first;
  }
  return *it->second;
}

std::optional<std::size_t> ProjectionTable::project(const Domain& u,
                                                    const Word& x) const {
  const Group& group = idx_->group();
  if (u.type == group.graph().all()) {
    auto i = idx_->ball().find(x);
    if (!i) return std::nullopt;
    return std::size_t(*i);
  }
  VertexSet st = group.graph().star(u.type);
  Word y = group.between(u.key, x);
  Word part = group.restrict_to(group.split_prefix(y, st).first, u.type);
  auto i = space_for_type(u.type).ball().find(part);
  if (!i) return std::nullopt;
  return std::size_t(*i);
}

const std::vector<int>& ProjectionTable::bfs(VertexSet type,
                                             std::size_t node) const {
  auto key = std::make_pair(type, node);
  std::lock_guard lock(*mu_);
  auto it = bfs_.find(key);
  if (it == bfs_.end()) {
    it = bfs_.emplace(key, space_for_type(type).metric().distances(node)).first;
  }
  return it->second;
}

double ProjectionTable::node_distance(VertexSet type, std::size_t a,
                                      std::size_t b) const {
  if (a == b) return 0;
  int raw = bfs(type, std::min(a, b))[std::max(a, b)];
  if (raw < 0) return std::numeric_limits<double>::infinity();
  return raw / double(ConedGraph::kScale);
}

std::optional<double> ProjectionTable::distance(const Domain& u, const Word& x,
                                                const Word& y) const {
  auto a = project(u, x);
  auto b = project(u, y);
  if (!a || !b) return std::nullopt;
  return node_distance(u.type, *a, *b);
}

double ProjectionTable::diameter(VertexSet type,
                                 const std::vector<std::size_t>& nodes) const {
  double best = 0;
  std::size_t sources = std::min<std::size_t>(nodes.size(), 256);
  for (std::size_t i = 0; i < sources; ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      best = std::max(best, node_distance(type, nodes[i], nodes[j]));
    }
  }
  return best;
}

double ProjectionTable::set_distance(VertexSet type, std::size_t node,
                                     const std::vector<std::size_t>& set) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s : set) best = std::min(best, node_distance(type, node, s));
  return best;
}

const std::vector<std::size_t>& ProjectionTable::product_region(
    std::size_t domain) const {
  std::lock_guard lock(*mu_);
  if (regions_.empty()) {
    regions_.resize(idx_->size());
    const auto n = idx_->ball().size();
    for (std::size_t t = 0; t < idx_->family().size(); ++t) {
      for (std::size_t e = 0; e < n; ++e) regions_[idx_->at(t, e)].push_back(e);
    }
  }
  return regions_.at(domain);
}

std::vector<std::size_t> ProjectionTable::rho(const Domain& u,
                                              const Domain& v) const {
  auto rel = idx_->relate(u, v).relation;
  if (rel != Relation::Nested && rel != Relation::Transverse) {
    throw std::invalid_argument("rho: " + idx_->name(u) + " and " +
                                idx_->name(v) + " are " +
                                std::string(to_string(rel)));
  }
  auto ui = idx_->find(u);
  if (!ui) throw std::invalid_argument("rho: " + idx_->name(u) + " not in index");
  std::set<std::size_t> nodes;
  for (std::size_t e : product_region(*ui)) {
    if (auto p = project(v, idx_->ball().element(e))) nodes.insert(*p);
  }
  return {nodes.begin(), nodes.end()};
}

LipschitzAudit lipschitz_audit(const ProjectionTable& t, int radius) {
  const auto& idx = t.index();
  const auto& ball = idx.ball();
  const Group& group = idx.group();
  LipschitzAudit out;
  std::size_t n = 0;
  while (n < ball.size() && ball.element(n).length() <= radius) ++n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Word& x = ball.element(i);
      const Word& y = ball.element(j);
      double d = group.distance(x, y);
      std::set<std::size_t> doms;
      for (std::size_t ty = 0; ty < idx.family().size(); ++ty) {
        for (std::size_t e : {i, j}) {
          std::size_t dom = idx.at(ty, e);
          if (t.contains(dom)) doms.insert(dom);
        }
      }
      for (std::size_t dom : doms) {
        auto du = t.distance(dom, x, y);
        if (!du) {
          ++out.skipped;
          continue;
        }
        out.k = std::max(out.k, *du / d);
        ++out.pairs;
      }
    }
  }
  return out;
}

XiPrime audit_xi_prime(const ProjectionTable& t, std::size_t samples,
                       std::uint64_t seed) {
  const auto& idx = t.index();
  const auto& members = t.members();
  XiPrime out;
  if (members.size() < 2) return out;
  // Every domain at the identity into S, then random pairs.
  for (std::size_t ty = 0; ty < idx.family().size(); ++ty) {
    std::size_t u = idx.at(ty, 0);
    if (u == idx.top() || !t.contains(u)) continue;
    auto nodes = t.rho(idx[u], idx[idx.top()]);
    out.value = std::max(out.value, t.diameter(idx[idx.top()].type, nodes));
    ++out.rho_sets;
  }
  auto engine = make_engine(seed, 0x71);
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t u = members[pick(engine)];
    std::size_t v = members[pick(engine)];
    auto rel = idx.relation(u, v);
    if (rel != Relation::Nested && rel != Relation::Transverse) continue;
    auto nodes = t.rho(idx[u], idx[v]);
    out.value = std::max(out.value, t.diameter(idx[v].type, nodes));
    ++out.rho_sets;
  }
  return out;
}

}  // namespace hhslab
