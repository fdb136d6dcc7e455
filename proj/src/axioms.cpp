#include "hhslab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "hhslab/random_walk.hpp"

namespace hhslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sampler {
  const ProjectionTable& t;
  const StructureIndex& idx;
  const Group& group;
  std::vector<std::size_t> core;     // ball indices
  std::vector<std::size_t> domains;  // structure domains realized in core
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> rho;

  explicit Sampler(const ProjectionTable& table, int core_radius)
      : t(table), idx(table.index()), group(table.index().group()) {
    const auto& ball = idx.ball();
    for (std::size_t e = 0; e < ball.size() && ball.element(e).length() <= core_radius; ++e) {
      core.push_back(e);
    }
    std::set<std::size_t> seen;
    for (std::size_t ty = 0; ty < idx.family().size(); ++ty) {
      for (std::size_t e : core) {
        std::size_t d = idx.at(ty, e);
        if (t.contains(d)) seen.insert(d);
      }
    }
    domains.assign(seen.begin(), seen.end());
  }

  const std::vector<std::size_t>& rho_of(std::size_t u, std::size_t v) {
    auto key = std::make_pair(u, v);
    auto it = rho.find(key);
    if (it == rho.end()) it = rho.emplace(key, t.rho(idx[u], idx[v])).first;
    return it->second;
  }

  /// Group element represented by a base node of the space of domain d.
  Word point(std::size_t d, std::size_t node) const {
    const auto& space = t.space(d);
    if (idx[d].type == group.graph().all()) return space.ball().element(node);
    return group.multiply(idx[d].key, space.ball().element(node));
  }

  /// Structure domains realized along the normal-form path from x to y.
  std::vector<std::size_t> along(const Word& x, const Word& y) const {
    std::set<std::size_t> out;
    auto path = group.letter_path(group.between(x, y));
    for (const auto& step : path) {
      auto e = idx.ball().find(group.multiply(x, step));
      if (!e) continue;
      for (std::size_t ty = 0; ty < idx.family().size(); ++ty) {
        std::size_t d = idx.at(ty, *e);
        if (t.contains(d)) out.insert(d);
      }
    }
    return {out.begin(), out.end()};
  }

  /// d(z, P_V): length of what is left after the maximal st(A)-prefix.
  int distance_to_region(const Word& z, std::size_t v) const {
    const Domain& d = idx[v];
    Word y = group.between(d.key, z);
    return group.split_prefix(y, group.graph().star(d.type)).second.length();
  }
};

bool finite(double v) { return std::isfinite(v); }

}  // namespace

bool AxiomReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& kv) { return kv.second; });
}

AxiomReport check_axioms(const ProjectionTable& t, const AxiomConfig& config) {
  const auto& idx = t.index();
  const auto& ball = idx.ball();
  const Group& group = idx.group();
  AxiomReport rep;
  rep.kind = t.kind();
  rep.config = config;
  rep.radius = ball.radius();
  rep.core_radius = (ball.radius() + 1) / 2;
  rep.domains = t.members().size();

  Sampler s(t, rep.core_radius);
  auto engine = make_engine(config.seed, 0xa710);
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine);
  };
  std::size_t budget = config.samples;
  bool partial = false;
  auto note_partial = [&](std::size_t done, bool had_candidates) {
    if (had_candidates && done * 4 < budget) partial = true;
  };

  // Hyperbolicity of each factor space.
  for (VertexSet ty : t.types()) {
    const auto& space = t.space_for_type(ty);
    auto est = estimate_delta(space.metric(), config.delta_samples, config.seed);
    rep.delta.push_back({group.graph().format_set(ty), est.delta, est.exhaustive,
                         space.vertex_count()});
  }

  // Consistency for transverse pairs.
  bool transverse_seen = false;
  for (std::size_t tries = 0; tries < 20 * budget && rep.kappa_samples < budget &&
                              s.domains.size() > 1;
       ++tries) {
    std::size_t v = s.domains[pick(s.domains.size())];
    std::size_t w = s.domains[pick(s.domains.size())];
    if (idx.relation(v, w) != Relation::Transverse) continue;
    transverse_seen = true;
    const Word& x = ball.element(s.core[pick(s.core.size())]);
    auto pw = t.project(idx[w], x);
    auto pv = t.project(idx[v], x);
    if (!pw || !pv) {
      ++rep.skipped;
      continue;
    }
    double a = t.set_distance(idx[w].type, *pw, s.rho_of(v, w));
    double b = t.set_distance(idx[v].type, *pv, s.rho_of(w, v));
    rep.kappa0 = std::max(rep.kappa0, std::min(a, b));
    ++rep.kappa_samples;
  }
  note_partial(rep.kappa_samples, transverse_seen);

  // Bounded geodesic image along ĈW geodesics, for V ⊊ W realized at a
  // common core point.
  const auto& fam = idx.family();
  std::vector<std::pair<std::size_t, std::size_t>> nested_types;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i != j && is_subset(fam[i], fam[j])) nested_types.emplace_back(i, j);
    }
  }
  bool nested_seen = false;
  for (std::size_t tries = 0; tries < 20 * budget && rep.bgi_samples < budget &&
                              !nested_types.empty();
       ++tries) {
    auto [ti, tj] = nested_types[pick(nested_types.size())];
    std::size_t e = s.core[pick(s.core.size())];
    std::size_t v = idx.at(ti, e), w = idx.at(tj, e);
    if (!t.contains(v) || !t.contains(w)) continue;
    if (idx.relation(v, w) != Relation::Nested) continue;
    nested_seen = true;
    const Word& x = ball.element(s.core[pick(s.core.size())]);
    const Word& y = ball.element(s.core[pick(s.core.size())]);
    auto px = t.project(idx[w], x);
    auto py = t.project(idx[w], y);
    if (!px || !py) {
      ++rep.skipped;
      continue;
    }
    const auto& space = t.space(w);
    auto path = space.metric().shortest_path(*px, *py);
    std::vector<std::size_t> image;
    double near = kInf;
    const auto& rho_vw = s.rho_of(v, w);
    for (std::size_t node : path) {
      if (!space.is_base(node)) continue;
      near = std::min(near, t.set_distance(idx[w].type, node, rho_vw));
      if (auto p = t.project(idx[v], s.point(w, node))) image.push_back(*p);
    }
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    rep.e_bgi = std::max(rep.e_bgi, std::min(t.diameter(idx[v].type, image), near));
    ++rep.bgi_samples;
  }
  note_partial(rep.bgi_samples, nested_seen);

  // Partial realization for orthogonal pairs realized at a common point.
  std::vector<std::pair<std::size_t, std::size_t>> orth_types;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i != j && is_subset(fam[j], group.graph().link(fam[i]))) orth_types.emplace_back(i, j);
    }
  }
  bool orth_seen = false;
  for (std::size_t tries = 0; tries < 20 * budget && rep.realization_samples < budget &&
                              !orth_types.empty();
       ++tries) {
    auto [ti, tj] = orth_types[pick(orth_types.size())];
    std::size_t ye = s.core[pick(s.core.size())];
    std::size_t v1 = idx.at(ti, ye), v2 = idx.at(tj, ye);
    if (!t.contains(v1) || !t.contains(v2)) continue;
    if (idx.relation(v1, v2) != Relation::Orthogonal) continue;
    orth_seen = true;
    const Word& y = ball.element(ye);
    int room = (ball.radius() - y.length()) / 2;
    if (room < 1) continue;
    auto factor_step = [&](VertexSet a) {
      std::vector<Letter> ls;
      for (const auto& l : group.letters()) {
        if (has_vertex(a, l.vertex)) ls.push_back(l);
      }
      Word p = group.identity();
      int steps = 1 + int(pick(std::size_t(room)));
      for (int k = 0; k < steps; ++k) p = group.multiply(p, ls[pick(ls.size())]);
      return p;
    };
    Word p1 = factor_step(fam[ti]);
    Word p2 = factor_step(fam[tj]);
    Word x = group.multiply(group.multiply(y, p1), p2);
    bool ok = true;
    for (auto [vd, p] : {std::make_pair(v1, p1), std::make_pair(v2, p2)}) {
      const Domain& dv = idx[vd];
      auto at_y = t.project(dv, y);
      auto at_x = t.project(dv, x);
      if (!at_y || !at_x) {
        ok = false;
        break;
      }
      // Target: π_V(y) moved by p inside F_V.
      Word target = group.multiply(t.space(vd).ball().element(*at_y), p);
      if (dv.type == group.graph().all()) target = group.multiply(y, p);
      auto node = t.space(vd).ball().find(target);
      if (!node) {
        ok = false;
        break;
      }
      rep.theta_e = std::max(rep.theta_e, t.node_distance(dv, *at_x, *node));
      // Containers above V_j: realized at y, ⊋ V_j.
      for (std::size_t ty = 0; ty < fam.size(); ++ty) {
        std::size_t wd = idx.at(ty, ye);
        if (!t.contains(wd) || idx.relation(vd, wd) != Relation::Nested) continue;
        auto pw = t.project(idx[wd], x);
        if (!pw) continue;
        rep.alpha = std::max(rep.alpha,
                             t.set_distance(idx[wd].type, *pw, s.rho_of(vd, wd)));
      }
    }
    if (!ok) {
      ++rep.skipped;
      continue;
    }
    ++rep.realization_samples;
  }
  rep.theta_e = std::max(rep.theta_e, rep.alpha);
  note_partial(rep.realization_samples, orth_seen);

  // Uniqueness, large links and active-subpath proximity over core pairs.
  double relevance = config.kappa_u;
  for (std::size_t i = 0; i < s.core.size(); ++i) {
    for (std::size_t j = i + 1; j < s.core.size(); ++j) {
      const Word& x = ball.element(s.core[i]);
      const Word& y = ball.element(s.core[j]);
      double d = group.distance(x, y);
      double top = 0, big = 0;
      std::size_t relevant = 0;
      for (std::size_t v : s.along(x, y)) {
        auto dv = t.distance(v, x, y);
        if (!dv) {
          ++rep.skipped;
          continue;
        }
        big = std::max(big, *dv);
        if (v == idx.top()) {
          top = *dv;
          continue;
        }
        if (*dv > relevance) {
          ++relevant;
          auto path = group.letter_path(group.between(x, y));
          int best = std::numeric_limits<int>::max();
          for (const auto& step : path)
            best = std::min(best, s.distance_to_region(group.multiply(x, step), v));
          rep.nu = std::max(rep.nu, double(best));
          ++rep.nu_samples;
        }
      }
      if (big <= config.kappa_u) rep.theta_u = std::max(rep.theta_u, d);
      rep.large_link_witnesses += relevant;
      rep.lambda = std::max(rep.lambda, relevant / (top + 1));
      ++rep.uniqueness_pairs;
    }
  }

  rep.xi = max_orthogonal_family(idx, nullptr,
                                 [&](std::size_t d) { return t.contains(d); });
  rep.xi_prime = audit_xi_prime(t, budget, config.seed).value;
  rep.nesting_chain = max_nesting_chain(t.types());
  rep.containers = t.restructuring().containers;
  rep.partial = partial;

  bool deltas = std::all_of(rep.delta.begin(), rep.delta.end(),
                            [](const FactorDelta& f) { return finite(f.delta); });
  rep.verdicts = {
      {"hyperbolicity", deltas},
      {"projections", finite(rep.xi_prime)},
      {"consistency", finite(rep.kappa0)},
      {"bounded_geodesic_image", finite(rep.e_bgi)},
      {"partial_realization", finite(rep.theta_e)},
      {"uniqueness", finite(rep.theta_u)},
      {"large_links", finite(rep.lambda)},
      {"finite_complexity", rep.nesting_chain <= group.rank() + 1},
      {"orthogonality_cardinality", rep.xi <= std::size_t(group.rank())},
      {"clean_containers", rep.containers.clean()},
  };
  return rep;
}

}  // namespace hhslab
