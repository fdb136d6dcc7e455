#include "hhslab/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace hhslab {

std::vector<VertexSet> factor_family(const DefiningGraph& g) {
  std::set<VertexSet> fam{g.all()};
  for (int v = 0; v < g.size(); ++v) {
    fam.insert(g.star(v));
    fam.insert(g.link(v));
    fam.insert(vertex_bit(v));
  }
  fam.erase(0);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<VertexSet> cur(fam.begin(), fam.end());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        VertexSet m = cur[i] & cur[j];
        if (m != 0 && fam.insert(m).second) grew = true;
      }
    }
  }
  std::vector<VertexSet> out(fam.begin(), fam.end());
  std::sort(out.begin(), out.end(), [](VertexSet a, VertexSet b) {
    if (set_size(a) != set_size(b)) return set_size(a) > set_size(b);
    return a < b;
  });
  return out;
}

int max_nesting_chain(const std::vector<VertexSet>& family) {
  // Sorted by decreasing size, so a proper superset always comes first.
  std::vector<VertexSet> f = family;
  std::sort(f.begin(), f.end(), [](VertexSet a, VertexSet b) {
    return set_size(a) > set_size(b);
  });
  std::vector<int> best(f.size(), 1);
  int out = f.empty() ? 0 : 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (f[i] != f[j] && is_subset(f[i], f[j])) {
        best[i] = std::max(best[i], best[j] + 1);
      }
    }
    out = std::max(out, best[i]);
  }
  return out;
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::Nested: return "nested";
    case Relation::Contains: return "contains";
    case Relation::Orthogonal: return "orthogonal";
    case Relation::Transverse: return "transverse";
    case Relation::Undecidable: return "undecidable";
  }
  return "?";
}

namespace {

bool growth_finite(const Group& group, VertexSet a) {
  auto ball = CayleyBall::build(group, set_size(a) + 1, kDefaultBallBudget, a);
  return ball.sphere_sizes().back() == 0;
}

}  // namespace

Boundedness classify_boundedness(const Group& group, VertexSet a) {
  const auto& g = group.graph();
  Boundedness b;
  b.f_bounded = g.finite_parabolic(a);
  const VertexSet lk = g.link(a);
  b.e_bounded = lk == 0 || g.finite_parabolic(lk);
  if (set_size(a) <= 4 && set_size(lk) <= 4) {
    b.growth_checked = true;
    b.growth_agrees = growth_finite(group, a) == b.f_bounded &&
                      growth_finite(group, lk) == b.e_bounded;
  }
  return b;
}

StructureIndex::StructureIndex(std::shared_ptr<const CayleyBall> ball,
                               std::vector<VertexSet> family,
                               std::size_t budget)
    : ball_(std::move(ball)), family_(std::move(family)) {
  const Group& group = ball_->group();
  const auto& g = group.graph();
  if (family_.empty() || family_.front() != g.all()) {
    throw std::invalid_argument("factor family must start with V");
  }
  const std::size_t n = ball_->size();
  const std::size_t nt = family_.size();

  std::vector<std::map<Word, std::size_t>> keys(nt);
  std::vector<Word> key_at(nt * n);
  std::size_t count = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    const VertexSet st = g.star(family_[t]);
    for (std::size_t x = 0; x < n; ++x) {
      Word k = group.min_coset_rep(ball_->element(x), st);
      if (keys[t].emplace(k, 0).second && ++count > budget) {
        throw ResourceError("domains", count);
      }
      key_at[t * n + x] = std::move(k);
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    for (auto& [k, id] : keys[t]) {
      id = domains_.size();
      domains_.push_back({family_[t], k});
      type_of_.push_back(t);
    }
  }
  at_.resize(nt * n);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t x = 0; x < n; ++x) {
      at_[t * n + x] = keys[t].at(key_at[t * n + x]);
    }
  }
}

std::optional<std::size_t> StructureIndex::type_index(VertexSet a) const {
  for (std::size_t t = 0; t < family_.size(); ++t) {
    if (family_[t] == a) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> StructureIndex::find(const Domain& d) const {
  auto t = type_index(d.type);
  if (!t) return std::nullopt;
  // Domains of one type are contiguous and sorted by key.
  auto first = std::find_if(type_of_.begin(), type_of_.end(),
                            [&](std::size_t x) { return x == *t; });
  if (first == type_of_.end()) return std::nullopt;
  auto lo = domains_.begin() + (first - type_of_.begin());
  auto hi = lo;
  while (hi != domains_.end() && hi->type == d.type) ++hi;
  auto it = std::lower_bound(lo, hi, d.key, [](const Domain& a, const Word& k) {
    return a.key < k;
  });
  if (it == hi || !(it->key == d.key)) return std::nullopt;
  return static_cast<std::size_t>(it - domains_.begin());
}

Domain StructureIndex::domain_of(VertexSet a, const Word& g) const {
  return {a, group().min_coset_rep(g, group().graph().star(a))};
}

RelationVerdict StructureIndex::relate(const Domain& u, const Domain& v) const {
  if (u == v) return {Relation::Equal, u.key};
  const auto& g = group().graph();
  Relation candidate;
  if (is_subset(u.type, v.type)) {
    candidate = Relation::Nested;
  } else if (is_subset(v.type, u.type)) {
    candidate = Relation::Contains;
  } else if (is_subset(v.type, g.link(u.type))) {
    candidate = Relation::Orthogonal;
  } else {
    return {Relation::Transverse, std::nullopt};
  }
  auto meet = group().coset_intersection(u.key, g.star(u.type), v.key,
                                         g.star(v.type));
  if (!meet) return {Relation::Transverse, std::nullopt};
  if (meet->length() > ball_->radius()) return {Relation::Undecidable, meet};
  return {candidate, meet};
}

std::string StructureIndex::name(const Domain& d) const {
  return group().graph().format_set(d.type) + "@" + group().format(d.key);
}

bool in_sm_type(const Group& group, const std::vector<VertexSet>& family,
                VertexSet a) {
  const auto& g = group.graph();
  for (VertexSet b : family) {
    if (!is_subset(a, b) || g.finite_parabolic(b)) continue;
    for (VertexSet c : family) {
      if (is_subset(c, g.link(b)) && !g.finite_parabolic(c)) return true;
    }
  }
  return false;
}

bool Restructuring::in_t(std::size_t d) const {
  return std::binary_search(t.begin(), t.end(), d);
}

bool Restructuring::in_sm(std::size_t d) const {
  return std::binary_search(sm.begin(), sm.end(), d);
}

ContainerCheck check_clean_containers(const StructureIndex& idx,
                                      const std::vector<std::size_t>& points) {
  const auto& g = idx.group().graph();
  const auto& fam = idx.family();
  ContainerCheck out;
  for (std::size_t x : points) {
    for (std::size_t ta = 0; ta < fam.size(); ++ta) {
      for (std::size_t tb = 0; tb < fam.size(); ++tb) {
        const VertexSet a = fam[ta], b = fam[tb];
        if (a == b || !is_subset(a, b)) continue;
        const VertexSet c = b & g.link(a);
        if (c == 0) continue;  // nothing in T is orthogonal to U
        const std::size_t u = idx.at(ta, x), t = idx.at(tb, x);
        Domain cont = idx.domain_of(c, idx.ball().element(x));
        ++out.checked;
        auto fail = [&](const std::string& why) {
          out.failures.push_back(why + ": U=" + idx.name(u) +
                                 " T=" + idx.name(t) + " C=" + idx.name(cont));
        };
        if (!idx.type_index(c)) {
          fail("container type outside family");
          continue;
        }
        if (idx.relate(cont, idx[t]).relation != Relation::Nested) {
          fail("container not properly nested in T");
        }
        if (idx.relate(cont, idx[u]).relation != Relation::Orthogonal) {
          fail("container not orthogonal to U");
        }
        // Every V ⊑ T with V ⊥ U realized at x must nest into C.
        for (std::size_t tv = 0; tv < fam.size(); ++tv) {
          const std::size_t v = idx.at(tv, x);
          auto rt = idx.relation(v, t);
          if (rt != Relation::Nested && rt != Relation::Equal) continue;
          if (idx.relation(v, u) != Relation::Orthogonal) continue;
          ++out.members_checked;
          auto rc = idx.relate(idx[v], cont).relation;
          if (rc != Relation::Nested && rc != Relation::Equal) {
            fail("member " + idx.name(v) + " not nested in container");
          }
        }
      }
    }
  }
  return out;
}

Restructuring restructure(const StructureIndex& idx) {
  const Group& group = idx.group();
  const auto& g = group.graph();
  const auto& fam = idx.family();
  Restructuring r;
  for (VertexSet a : fam) {
    if (in_sm_type(group, fam, a)) r.sm_types.push_back(a);
    auto b = classify_boundedness(group, a);
    if (a == g.all() || (!b.f_bounded && !b.e_bounded)) r.t_types.push_back(a);
  }
  auto has = [](const std::vector<VertexSet>& v, VertexSet a) {
    return std::find(v.begin(), v.end(), a) != v.end();
  };

  r.t.push_back(idx.top());
  for (std::size_t d = 0; d < idx.size(); ++d) {
    const VertexSet a = idx[d].type;
    if (has(r.sm_types, a)) r.sm.push_back(d);
    if (d == idx.top()) continue;
    if (has(r.t_types, a)) {
      r.t.push_back(d);
    } else if (!g.finite_parabolic(a)) {
      r.removed.push_back(d);
    }
  }

  // Witnesses V ⊒ U with V ⊥ W, both factors unbounded.
  for (std::size_t u : r.sm) {
    const Domain& du = idx[u];
    bool ok = false;
    for (VertexSet b : fam) {
      if (ok) break;
      if (!is_subset(du.type, b) || g.finite_parabolic(b)) continue;
      Domain v = idx.domain_of(b, du.key);
      auto ruv = idx.relate(du, v).relation;
      if (ruv != Relation::Nested && ruv != Relation::Equal) continue;
      for (VertexSet c : fam) {
        if (!is_subset(c, g.link(b)) || g.finite_parabolic(c)) continue;
        if (idx.relate(v, idx.domain_of(c, du.key)).relation ==
            Relation::Orthogonal) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) r.sm_witnessed = false;
  }

  // Nesting closure, checked through realization points.
  const std::size_t n = idx.ball().size();
  for (std::size_t x = 0; x < n && r.sm_nesting_closed; ++x) {
    for (std::size_t tu = 0; tu < fam.size(); ++tu) {
      const std::size_t u = idx.at(tu, x);
      if (!r.in_sm(u)) continue;
      for (std::size_t tv = 0; tv < fam.size(); ++tv) {
        const std::size_t v = idx.at(tv, x);
        if (is_subset(fam[tv], fam[tu]) && !r.in_sm(v) &&
            idx.relation(v, u) == Relation::Nested) {
          r.sm_nesting_closed = false;
        }
      }
    }
  }

  // Containers at the identity and along the first sphere.
  std::vector<std::size_t> points;
  for (std::size_t x = 0; x < n && idx.ball().element(x).length() <= 1; ++x) {
    points.push_back(x);
  }
  r.containers = check_clean_containers(idx, points);
  return r;
}

namespace {

void bron_kerbosch(const std::vector<std::vector<std::uint32_t>>& adj,
                   std::vector<std::uint32_t>& clique,
                   std::vector<std::uint32_t> p, std::vector<std::uint32_t> x,
                   std::vector<std::uint32_t>& best) {
  if (p.empty() && x.empty()) {
    if (clique.size() > best.size()) best = clique;
    return;
  }
  if (clique.size() + p.size() <= best.size()) return;
  std::uint32_t pivot = !p.empty() ? p.front() : x.front();
  std::size_t most = 0;
  for (const auto* s : {&p, &x}) {
    for (auto u : *s) {
      std::vector<std::uint32_t> common;
      std::set_intersection(p.begin(), p.end(), adj[u].begin(), adj[u].end(),
                            std::back_inserter(common));
      if (common.size() >= most) {
        most = common.size();
        pivot = u;
      }
    }
  }
  std::vector<std::uint32_t> candidates;
  std::set_difference(p.begin(), p.end(), adj[pivot].begin(), adj[pivot].end(),
                      std::back_inserter(candidates));
  for (auto v : candidates) {
    std::vector<std::uint32_t> np, nx;
    std::set_intersection(p.begin(), p.end(), adj[v].begin(), adj[v].end(),
                          std::back_inserter(np));
    std::set_intersection(x.begin(), x.end(), adj[v].begin(), adj[v].end(),
                          std::back_inserter(nx));
    clique.push_back(v);
    bron_kerbosch(adj, clique, std::move(np), std::move(nx), best);
    clique.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.insert(std::upper_bound(x.begin(), x.end(), v), v);
  }
}

}  // namespace

std::size_t max_orthogonal_family(const StructureIndex& idx,
                                  std::vector<std::size_t>* witness,
                                  const std::function<bool(std::size_t)>& keep) {
  const auto& g = idx.group().graph();
  const auto& fam = idx.family();
  std::vector<std::pair<std::size_t, std::size_t>> orth_types;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      if (is_subset(fam[j], g.link(fam[i]))) orth_types.emplace_back(i, j);
    }
  }
  std::vector<std::vector<std::uint32_t>> adj(idx.size());
  for (std::size_t x = 0; x < idx.ball().size(); ++x) {
    for (auto [i, j] : orth_types) {
      auto u = idx.at(i, x), v = idx.at(j, x);
      if (keep && (!keep(u) || !keep(v))) continue;
      adj[u].push_back(static_cast<std::uint32_t>(v));
      adj[v].push_back(static_cast<std::uint32_t>(u));
    }
  }
  std::vector<std::uint32_t> p;
  for (std::size_t d = 0; d < adj.size(); ++d) {
    auto& a = adj[d];
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    if (!a.empty()) p.push_back(static_cast<std::uint32_t>(d));
  }
  std::vector<std::uint32_t> best, clique;
  if (!p.empty()) {
    best.push_back(p.front());
    bron_kerbosch(adj, clique, p, {}, best);
  } else if (idx.size() > 0) {
    best.push_back(static_cast<std::uint32_t>(idx.top()));
  }
  if (witness) witness->assign(best.begin(), best.end());
  return best.size();
}

}  // namespace hhslab
