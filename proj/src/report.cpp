#include "hhslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "hhslab/version.hpp"

namespace hhslab {

using nlohmann::json;

namespace {

constexpr std::string_view kShipped = "shipped:";

/// `shipped:<file>` names an example graph installed with the tool.
std::string resolve(const std::string& path) {
  if (path.rfind(kShipped, 0) == 0)
    return std::string(HHSLAB_DATA_DIR) + "/" + path.substr(kShipped.size());
  return path;
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const ResourceError& e) {
    throw StageError(StageError::Kind::Resource, name,
                     "budget exceeded after " + std::to_string(e.reached()) + " items");
  } catch (const ParseError& e) {
    throw StageError(StageError::Kind::Usage, name, e.what());
  } catch (const std::invalid_argument& e) {
    throw StageError(StageError::Kind::Usage, name, e.what());
  } catch (const std::out_of_range& e) {
    throw StageError(StageError::Kind::Usage, name, e.what());
  } catch (const std::bad_alloc&) {
    throw StageError(StageError::Kind::Resource, name, "out of memory");
  } catch (const std::exception& e) {
    throw StageError(StageError::Kind::Internal, name, e.what());
  }
}

[[noreturn]] void usage(const std::string& stage_name, const std::string& what) {
  throw StageError(StageError::Kind::Usage, stage_name, what);
}

/// Finite doubles as numbers, infinities as the strings "inf"/"-inf".
json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

struct Checks {
  json list = json::array();
  bool pass = true;
  void add(const std::string& name, bool ok, json detail = json::object()) {
    list.push_back({{"name", name}, {"pass", ok}, {"detail", std::move(detail)}});
    pass = pass && ok;
  }
};

/// Lazily built pipeline stages; each stage tags its errors.
class Pipeline {
 public:
  explicit Pipeline(const RunConfig& c) : c_(c) {}

  const RunConfig& config() const { return c_; }

  const Group& group() {
    if (!group_) {
      group_ = stage("load-graph", [&] {
        if (c_.graph.empty()) usage("load-graph", "--graph is required");
        return std::make_unique<Group>(load_graph(resolve(c_.graph)));
      });
    }
    return *group_;
  }
  std::shared_ptr<const CayleyBall> ball() {
    if (!ball_) {
      const Group& g = group();
      if (c_.radius < 0) usage("ball", "radius must be non-negative");
      ball_ = stage("ball", [&] {
        return std::make_shared<const CayleyBall>(CayleyBall::build(g, c_.radius, c_.budget));
      });
    }
    return ball_;
  }
  const WallSet& walls() {
    if (!walls_) {
      auto b = ball();
      walls_ = stage("walls", [&] { return std::make_unique<WallSet>(*b); });
    }
    return *walls_;
  }
  const StructureIndex& index() {
    if (!idx_) {
      auto b = ball();
      idx_ = stage("domains", [&] {
        return std::make_unique<StructureIndex>(b, factor_family(b->group().graph()));
      });
    }
    return *idx_;
  }
  const Restructuring& restructuring() {
    if (!r_) {
      const auto& idx = index();
      r_ = stage("restructure", [&] { return std::make_unique<Restructuring>(restructure(idx)); });
    }
    return *r_;
  }
  const ConedGraph& space(const std::string& name) {
    auto it = spaces_.find(name);
    if (it != spaces_.end()) return *it->second;
    std::unique_ptr<ConedGraph> s;
    if (name == "cayley") {
      auto b = ball();
      s = stage("cone", [&] { return std::make_unique<ConedGraph>(cayley_graph(b)); });
    } else if (name == "contact") {
      const auto& w = walls();
      auto b = ball();
      s = stage("cone", [&] { return std::make_unique<ConedGraph>(wall_coned_graph(b, w)); });
    } else if (name == "ts") {
      const auto& r = restructuring();
      s = stage("cone", [&] {
        return std::make_unique<ConedGraph>(unbounded_products_space(index(), r));
      });
    } else if (name == "original") {
      const auto& idx = index();
      s = stage("cone", [&] { return std::make_unique<ConedGraph>(original_top_space(idx)); });
    } else if (name == "largest") {
      const auto& r = restructuring();
      s = stage("cone", [&] {
        return std::make_unique<ConedGraph>(largest_action_graph(index(), r));
      });
    } else if (name == "coset") {
      auto b = ball();
      const auto& gr = group().graph();
      std::vector<VertexSet> singles;
      for (int v = 0; v < gr.size(); ++v) singles.push_back(vertex_bit(v));
      s = stage("cone", [&] {
        return std::make_unique<ConedGraph>(coset_coned_graph(b, singles, "coset"));
      });
    } else {
      usage("cone", "unknown space '" + name +
                        "' (expected cayley, contact, ts, original, largest, coset)");
    }
    return *spaces_.emplace(name, std::move(s)).first->second;
  }
  const ProjectionTable& table(StructureKind kind) {
    auto& slot = tables_[int(kind)];
    if (!slot) {
      const auto& r = restructuring();
      slot = stage("projections", [&] { return std::make_unique<ProjectionTable>(index(), r, kind); });
    }
    return *slot;
  }
  StructureKind structure_kind() const {
    if (c_.structure == "original") return StructureKind::Original;
    if (c_.structure == "unbounded-products" || c_.structure == "t")
      return StructureKind::UnboundedProducts;
    usage("config", "unknown structure '" + c_.structure +
                        "' (expected original or unbounded-products)");
  }
  Word parse(const std::string& w) {
    const Group& g = group();
    return stage("parse-word", [&] { return g.parse(w); });
  }
  std::string format(const Word& w) { return group().format(w); }
  std::string format_set(VertexSet a) { return group().graph().format_set(a); }

 private:
  const RunConfig& c_;
  std::unique_ptr<Group> group_;
  std::shared_ptr<const CayleyBall> ball_;
  std::unique_ptr<WallSet> walls_;
  std::unique_ptr<StructureIndex> idx_;
  std::unique_ptr<Restructuring> r_;
  std::map<std::string, std::unique_ptr<ConedGraph>> spaces_;
  std::unique_ptr<ProjectionTable> tables_[2];
};

json set_list(Pipeline& p, const std::vector<VertexSet>& sets) {
  json out = json::array();
  for (VertexSet a : sets) out.push_back(p.format_set(a));
  return out;
}

json space_summary(const ConedGraph& s) {
  json prov = json::array();
  for (const auto& f : s.provenance()) {
    prov.push_back({{"type", s.ball().group().graph().format_set(f.type)},
                    {"reason", to_string(f.reason)},
                    {"clique", f.clique}});
  }
  return {{"name", s.name()},
          {"base_vertices", s.base_count()},
          {"vertices", s.vertex_count()},
          {"cone_vertices", s.cone_count()},
          {"edges", s.metric().edge_count()},
          {"base_diameter", num(s.base_diameter())},
          {"identical_to_cayley", s.identical_to_cayley()},
          {"collapsed", prov}};
}

json classification_json(Pipeline& p, const ElementClassification& c) {
  return {{"element", p.format(c.element)},
          {"space", c.space},
          {"base", c.base_name},
          {"n", c.n},
          {"orbit_diameter", num(c.orbit_diameter)},
          {"translation", num(c.translation)},
          {"verdict", to_string(c.verdict)},
          {"required_radius", c.required_radius}};
}

json restructure_json(Pipeline& p) {
  const auto& idx = p.index();
  const auto& r = p.restructuring();
  auto names = [&](const std::vector<std::size_t>& ds, std::size_t cap) {
    json out = json::array();
    for (std::size_t i = 0; i < ds.size() && i < cap; ++i) out.push_back(idx.name(ds[i]));
    return out;
  };
  return {{"sm_types", set_list(p, r.sm_types)},
          {"t_types", set_list(p, r.t_types)},
          {"sm", r.sm.size()},
          {"t", r.t.size()},
          {"removed", r.removed.size()},
          {"t_domains_sample", names(r.t, 16)},
          {"sm_witnessed", r.sm_witnessed},
          {"sm_nesting_closed", r.sm_nesting_closed},
          {"containers",
           {{"checked", r.containers.checked},
            {"members_checked", r.containers.members_checked},
            {"clean", r.containers.clean()},
            {"failures", r.containers.failures}}}};
}

std::vector<VertexSet> sorted_types(std::vector<VertexSet> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// ---------------------------------------------------------------- commands

Report cmd_ball(Pipeline& p, Report rep) {
  auto b = p.ball();
  auto cay = stage("ball", [&] { return cayley_graph(b); });
  rep.result = {{"radius", b->radius()},
                {"size", b->size()},
                {"sphere_sizes", b->sphere_sizes()},
                {"edges", cay.metric().edge_count()}};
  rep.extra.push_back({"ball.dot", cay.to_dot()});
  return rep;
}

Report cmd_walls(Pipeline& p, Report rep) {
  const auto& walls = p.walls();
  auto b = p.ball();
  const Group& g = p.group();
  std::ostringstream csv;
  csv << "wall,label,key_type,key_base,dual_edges,carrier\n";
  std::map<std::string, std::size_t> by_label;
  std::size_t single_edge = 0;
  for (const auto& w : walls.walls()) {
    const std::string label = g.graph().name(w.label);
    ++by_label[label];
    single_edge += w.dual_edges.size() == 1;
    csv << wall_name(g, w) << "," << label << "," << p.format_set(w.key.type) << ","
        << g.format(w.key.base) << "," << w.dual_edges.size() << "," << w.carrier.size() << "\n";
  }
  json at_identity = json::array();
  for (int v = 0; v < g.graph().size(); ++v) {
    auto i = walls.find(v, g.identity());
    if (!i) continue;
    auto stab = stage("walls", [&] { return wall_stabilizer(walls[*i], *b); });
    VertexSet t = wall_key_type(g.graph(), v);
    std::size_t expect = 0;
    for (const auto& x : b->elements()) expect += g.in_parabolic(x, t);
    at_identity.push_back({{"wall", wall_name(g, walls[*i])},
                           {"stabilizer_size", stab.size()},
                           {"parabolic", p.format_set(t)},
                           {"ball_parabolic_size", expect},
                           {"equals_ball_parabolic", stab.size() == expect}});
  }
  rep.result = {{"count", walls.size()},
                {"by_label", by_label},
                {"single_edge_walls", single_edge},
                {"at_identity", at_identity}};
  rep.extra.push_back({"walls.csv", csv.str()});
  return rep;
}

json contact_json(Pipeline& p, const ContactGraph& cg) {
  auto m = cg.metric();
  json out = {{"walls", cg.adjacency.size()},
              {"edges", cg.edge_count()},
              {"crossings", cg.crossings.size()},
              {"connected", m.connected()}};
  if (m.connected()) {
    auto d = stage("contact", [&] { return estimate_delta(m, 20000, p.config().seed); });
    bool block = is_block_graph(m);
    out["delta"] = {{"estimate", num(d.delta)},
                    {"exhaustive", d.exhaustive},
                    {"quadruples", d.quadruples},
                    {"pool", d.pool},
                    {"block_graph", block}};
    // Block graphs are exactly the graphs whose four-point δ is 0.
    out["delta_exact_zero"] = block;
  }
  return out;
}

Report cmd_contact(Pipeline& p, Report rep) {
  const auto& walls = p.walls();
  auto b = p.ball();
  auto cg = stage("contact", [&] { return contact_graph(walls, *b); });
  rep.result = contact_json(p, cg);
  rep.pass = cg.adjacency.empty() || rep.result["connected"].get<bool>();
  rep.extra.push_back({"contact.dot", to_dot(cg, walls, p.group())});
  return rep;
}

Report cmd_domains(Pipeline& p, Report rep) {
  const auto& idx = p.index();
  const auto& r = p.restructuring();
  const Group& g = p.group();
  json types = json::array();
  for (VertexSet a : idx.family()) {
    auto b = classify_boundedness(g, a);
    std::size_t n = 0;
    for (const auto& d : idx.domains()) n += d.type == a;
    std::string cls = std::count(r.t_types.begin(), r.t_types.end(), a)   ? "T"
                      : std::count(r.sm_types.begin(), r.sm_types.end(), a) ? "SM"
                                                                           : "W";
    types.push_back({{"type", p.format_set(a)},
                     {"link", p.format_set(g.graph().link(a))},
                     {"level", set_size(a)},
                     {"f_bounded", b.f_bounded},
                     {"e_bounded", b.e_bounded},
                     {"domains", n},
                     {"class", cls}});
  }
  std::ostringstream csv;
  csv << "domain,type,key,level,class\n";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& d = idx[i];
    csv << idx.name(i) << "," << p.format_set(d.type) << "," << g.format(d.key) << ","
        << d.level() << "," << (r.in_t(i) ? "T" : r.in_sm(i) ? "SM" : "W") << "\n";
  }
  rep.result = {{"domains", idx.size()},
                {"types", types},
                {"nesting_chain", max_nesting_chain(idx.family())}};
  rep.extra.push_back({"domains.csv", csv.str()});
  return rep;
}

Report cmd_restructure(Pipeline& p, Report rep) {
  rep.result = restructure_json(p);
  const auto& r = p.restructuring();
  rep.pass = r.containers.clean() && r.sm_nesting_closed;
  return rep;
}

Report cmd_cone(Pipeline& p, Report rep) {
  const auto& s = p.space(p.config().space);
  rep.result = space_summary(s);
  rep.extra.push_back({"cone.dot", s.to_dot()});
  return rep;
}

Report cmd_largest(Pipeline& p, Report rep) {
  const auto& largest = p.space("largest");
  json rows = json::array();
  bool dominated = true;
  std::vector<std::string> others = {"contact", "ts", "original"};
  if (!p.group().graph().splits_as_infinite_product()) others.insert(others.begin(), "cayley");
  for (const auto& name : others) {
    const auto& y = p.space(name);
    auto c = stage("largest", [&] { return compare_actions(y, largest); });
    rows.push_back({{"space", name},
                    {"verdict", to_string(c.verdict)},
                    {"x_bound", num(c.x_bound)},
                    {"y_bound", num(c.y_bound)}});
    dominated = dominated && c.verdict != Domination::YBelowX &&
                c.verdict != Domination::Incomparable;
  }
  rep.result = {{"largest", space_summary(largest)}, {"comparisons", rows}};
  rep.pass = dominated;
  return rep;
}

Report cmd_classify(Pipeline& p, Report rep) {
  if (p.config().words.size() != 1) usage("classify", "expected exactly one word");
  Word w = p.parse(p.config().words[0]);
  const auto& s = p.space(p.config().space);
  auto c = stage("classify", [&] { return classify_element(w, s); });
  rep.result = classification_json(p, c);
  rep.pass = c.verdict != Verdict::Inconclusive;
  return rep;
}

json axiom_json(const AxiomReport& a) {
  json deltas = json::array();
  for (const auto& d : a.delta)
    deltas.push_back({{"type", d.type}, {"delta", num(d.delta)}, {"exhaustive", d.exhaustive},
                      {"vertices", d.vertices}});
  return {{"structure", to_string(a.kind)},
          {"radius", a.radius},
          {"core_radius", a.core_radius},
          {"domains", a.domains},
          {"delta", deltas},
          {"kappa0", num(a.kappa0)},
          {"kappa_samples", a.kappa_samples},
          {"E", num(a.e_bgi)},
          {"bgi_samples", a.bgi_samples},
          {"theta_e", num(a.theta_e)},
          {"alpha", num(a.alpha)},
          {"realization_samples", a.realization_samples},
          {"theta_u", num(a.theta_u)},
          {"uniqueness_pairs", a.uniqueness_pairs},
          {"nu", num(a.nu)},
          {"nu_samples", a.nu_samples},
          {"lambda", num(a.lambda)},
          {"large_link_witnesses", a.large_link_witnesses},
          {"xi", a.xi},
          {"xi_prime", num(a.xi_prime)},
          {"nesting_chain", a.nesting_chain},
          {"containers_checked", a.containers.checked},
          {"containers_clean", a.containers.clean()},
          {"skipped", a.skipped},
          {"partial", a.partial},
          {"verdicts", a.verdicts},
          {"pass", a.pass()}};
}

Report cmd_axioms(Pipeline& p, Report rep) {
  const auto& t = p.table(p.structure_kind());
  AxiomConfig ac;
  ac.seed = p.config().seed;
  auto a = stage("check-axioms", [&] { return check_axioms(t, ac); });
  rep.result = axiom_json(a);
  rep.pass = a.pass();
  return rep;
}

json fit_json(const DistanceFormulaFit& f) {
  return {{"s", f.s},
          {"K", num(f.k)},
          {"C", num(f.c)},
          {"pairs", f.pairs},
          {"informative", f.informative},
          {"degenerate", f.degenerate},
          {"coverage", num(f.coverage)},
          {"worst_upper", num(f.worst_upper)},
          {"worst_lower", num(f.worst_lower)},
          {"skipped", f.skipped}};
}

Report cmd_distance_formula(Pipeline& p, Report rep) {
  const auto& c = p.config();
  const auto& t = p.table(p.structure_kind());
  auto f = stage("distance-formula",
                 [&] { return distance_formula_fit(t, c.threshold_s, c.pairs, c.seed); });
  rep.result = fit_json(f);
  rep.result["structure"] = to_string(t.kind());
  rep.pass = !f.degenerate && f.coverage == 1;
  rep.extra.push_back({"distance_formula.csv", f.to_csv()});
  return rep;
}

json contracting_json(Pipeline& p, const Word& w) {
  const auto& c = p.config();
  auto b = p.ball();
  const Group& g = p.group();
  const auto& tt = p.table(StructureKind::UnboundedProducts);
  const auto& to = p.table(StructureKind::Original);
  int n = max_certified_power(g, w, b->radius());
  if (n < 1) usage("contracting", "no power of the word fits in the ball; raise --radius");
  auto ax = axis_sample(g, w, n, b.get());
  auto con = stage("contracting", [&] { return is_contracting(ax, *b, c.contraction_a); });
  auto bpt = stage("contracting", [&] { return bounded_projections(ax, tt); });
  auto bpo = stage("contracting", [&] { return bounded_projections(ax, to); });
  json profile = json::array();
  for (double v : con.profile) profile.push_back(num(v));
  json out = {{"word", p.format(w)},
              {"axis_power", n},
              {"axis_points", ax.points.size()},
              {"contracting", con.contracting},
              {"inconclusive", con.inconclusive},
              {"A", con.a},
              {"D_prime", num(con.d_prime)},
              {"identity_defect", num(con.identity_defect)},
              {"lipschitz_defect", num(con.lipschitz_defect)},
              {"profile", profile},
              {"slope", num(con.slope)},
              {"points_checked", con.points_checked}};
  if (con.witness) {
    out["witness"] = {{"point", p.format(*con.witness)},
                      {"R", con.witness_r},
                      {"diameter", num(con.witness_diam)}};
  }
  auto bp = [&](const BoundedProjections& x) {
    return json{{"bounded", x.bounded}, {"d", num(x.d)},           {"d_half", num(x.d_half)},
                {"slope", num(x.slope)}, {"cutoff", num(x.cutoff)}, {"worst_domain", x.worst_domain},
                {"domains", x.domains},  {"skipped", x.skipped}};
  };
  out["bounded_projections_t"] = bp(bpt);
  out["bounded_projections_s"] = bp(bpo);
  out["agree_t"] = bpt.bounded == con.contracting;
  return out;
}

Report cmd_contracting(Pipeline& p, Report rep) {
  if (p.config().words.size() != 1) usage("contracting", "expected exactly one word");
  Word w = p.parse(p.config().words[0]);
  if (w.is_identity()) usage("contracting", "the identity has no axis");
  rep.result = contracting_json(p, w);
  rep.pass = !rep.result["inconclusive"].get<bool>();
  return rep;
}

json morse_json(const MorseGauge& m) {
  json rows = json::array();
  for (const auto& r : m.rows)
    rows.push_back({{"K", r.k}, {"C", r.c}, {"N", num(r.n)}, {"N_half", num(r.n_half)},
                    {"slope", num(r.slope)}, {"templates", r.templates}});
  return {{"morse", m.morse},
          {"inconclusive", m.inconclusive},
          {"slope", num(m.slope)},
          {"rows", rows},
          {"waypoint_radius", m.waypoint_radius},
          {"staircase_radius", m.staircase_radius},
          {"pairs", m.pairs},
          {"family", m.family}};
}

json stability_json(Pipeline& p, const StabilityReport& s) {
  json gens = json::array();
  for (const auto& w : s.gens) gens.push_back(p.format(w));
  return {{"generators", gens},
          {"h_radius", s.h_radius},
          {"orbit", s.orbit},
          {"partial", s.partial},
          {"partial_reason", s.partial_reason},
          {"trivial", s.trivial},
          {"morse", s.morse},
          {"gauge", morse_json(s.gauge)},
          {"undistorted", s.undistorted},
          {"distortion", {{"K", num(s.distortion_k)}, {"slope", num(s.distortion_slope)}}},
          {"bounded_projections", s.bounded_projections},
          {"projection", {{"d", num(s.projection_d)}, {"slope", num(s.projection_slope)}}},
          {"qi_into_ts", s.qi_into_ts},
          {"qi", {{"K", num(s.qi_k)}, {"C", num(s.qi_c)}, {"slope", num(s.qi_slope)}}},
          {"ts_algebraic", s.ts_algebraic},
          {"tri_verdict", s.agree() ? "agree" : "disagree"},
          {"stable", s.stable()}};
}

StabilityConfig stability_config(const RunConfig& c) {
  StabilityConfig sc;
  sc.bounded_cutoff = kDefaultBoundedCutoff;
  (void)c;
  return sc;
}

Report cmd_stability(Pipeline& p, Report rep) {
  if (p.config().words.empty()) usage("stability", "expected at least one generator");
  std::vector<Word> gens;
  for (const auto& w : p.config().words) gens.push_back(p.parse(w));
  const auto& t = p.table(StructureKind::UnboundedProducts);
  const auto& ts = p.space("ts");
  auto s = stage("stability", [&] { return stability_tritest(gens, t, ts, stability_config(p.config())); });
  rep.result = stability_json(p, s);
  rep.pass = s.agree() && !s.partial;
  return rep;
}

Report cmd_random_subgroups(Pipeline& p, Report rep, unsigned threads) {
  const auto& c = p.config();
  if (c.k < 1 || c.steps < 0 || c.trials < 0)
    usage("random-subgroups", "need k >= 1, steps >= 0, trials >= 0");
  const auto& t = p.table(StructureKind::UnboundedProducts);
  const auto& ts = p.space("ts");
  auto r = stage("random-subgroups", [&] {
    return random_subgroup_experiment(t, ts, c.k, c.steps, c.trials, c.seed,
                                      stability_config(c), threads);
  });
  json runs = json::array();
  for (const auto& run : r.runs) {
    json gens = json::array();
    for (const auto& w : run.gens) gens.push_back(p.format(w));
    runs.push_back({{"generators", gens}, {"stable", run.stable}, {"agree", run.agree},
                    {"partial", run.partial}});
  }
  rep.result = {{"refused", r.refused},
                {"reason", r.reason},
                {"k", r.k},
                {"steps", r.n},
                {"trials", r.trials},
                {"frequency", num(r.frequency)},
                {"disagreements", r.disagreements},
                {"runs", runs},
                {"note", "finite-trial frequency; trend evidence only, not a probability estimate"}};
  rep.pass = !r.refused && r.disagreements == 0;
  return rep;
}

// ------------------------------------------------------------ golden runs

std::string shipped(const std::string& file) { return std::string(kShipped) + file; }

VertexSet set_named(Pipeline& p, const std::string& names) {
  VertexSet s = 0;
  for (char ch : names) {
    auto v = p.group().graph().find(std::string(1, ch));
    if (!v) usage("golden", std::string("graph lacks vertex ") + ch);
    s |= vertex_bit(*v);
  }
  return s;
}

Report make_report(const RunConfig& c) {
  Report rep;
  rep.command = c.command;
  rep.config = to_json(c);
  return rep;
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"graph", c.graph},
          {"radius", c.radius},
          {"seed", c.seed},
          {"threshold_s", c.threshold_s},
          {"contraction_A", c.contraction_a},
          {"tau_min", c.tau_min},
          {"growth_slope", c.growth_slope},
          {"relevance_cutoff_floor", relevance_cutoff(0)},
          {"bounded_cutoff", kDefaultBoundedCutoff},
          {"budget", c.budget},
          {"space", c.space},
          {"structure", c.structure},
          {"words", c.words},
          {"pairs", c.pairs},
          {"k", c.k},
          {"steps", c.steps},
          {"trials", c.trials}};
}

std::string Report::to_json() const {
  json doc = {{"tool", {{"name", kToolName}, {"version", kVersion}}},
              {"command", command},
              {"config", config},
              {"pass", pass},
              {"result", result}};
  return doc.dump(2) + "\n";
}

const std::vector<std::string>& report_commands() {
  static const std::vector<std::string> names = {
      "ball",      "walls",       "contact",          "domains",     "restructure",
      "cone",      "largest",     "classify",         "check-axioms", "distance-formula",
      "contracting", "stability", "random-subgroups", "pentagon-report", "square-report",
      "f2-report"};
  return names;
}

Report pentagon_report(RunConfig c) {
  if (c.graph.empty()) c.graph = shipped("pentagon.ggp");
  c.command = "pentagon-report";
  Report rep = make_report(c);
  Pipeline p(c);
  const Group& g = p.group();
  auto b = p.ball();
  Checks checks;

  // (a) wall J_b and its stabilizer.
  const auto& walls = p.walls();
  VertexSet abc = set_named(p, "abc");
  int vb = *g.graph().find("b");
  auto jb = walls.find(vb, g.identity());
  if (!jb) usage("walls", "no wall J_b at the identity");
  auto stab = stage("walls", [&] { return wall_stabilizer(walls[*jb], *b); });
  std::vector<Word> expect;
  for (const auto& x : b->elements())
    if (g.in_parabolic(x, abc)) expect.push_back(x);
  checks.add("wall J_b stabilizer equals ball ∩ <a,b,c>", stab == expect,
             {{"stabilizer", stab.size()}, {"ball_parabolic", expect.size()}});

  // (b) the lk(b) domain type.
  VertexSet ac = set_named(p, "ac");
  auto bd = classify_boundedness(g, ac);
  const auto& idx = p.index();
  const auto& r = p.restructuring();
  auto lkb = idx.find(idx.domain_of(ac, g.identity()));
  bool removed = lkb && std::count(r.removed.begin(), r.removed.end(), *lkb) == 1;
  checks.add("lk(b) = {a,c}: F unbounded, E bounded, removed",
             !bd.f_bounded && bd.e_bounded && removed,
             {{"f_bounded", bd.f_bounded}, {"e_bounded", bd.e_bounded}, {"removed", removed}});

  // (c) restructuring and 𝒯_S.
  const auto& ts = p.space("ts");
  const auto& cay = p.space("cayley");
  bool t_is_s = r.t == std::vector<std::size_t>{idx.top()};
  checks.add("S^M empty and T = {S}", r.sm.empty() && t_is_s,
             {{"sm", r.sm.size()}, {"t", r.t.size()}});
  bool same = ts.identical_to_cayley() && ts.vertex_count() == cay.vertex_count() &&
              ts.metric().edge_count() == cay.metric().edge_count();
  checks.add("T_S vertex/edge-identical to the Cayley ball", same,
             {{"ts", space_summary(ts)}, {"cayley_vertices", cay.vertex_count()},
              {"cayley_edges", cay.metric().edge_count()}});

  // (d) ac on the contact action and on 𝒯_S.
  Word acw = p.parse("ac");
  const auto& contact = p.space("contact");
  auto c1 = stage("classify", [&] { return classify_element(acw, contact); });
  auto c2 = stage("classify", [&] { return classify_element(acw, ts); });
  checks.add("ac elliptic on the contact graph, orbit diameter 0",
             c1.verdict == Verdict::Elliptic && c1.orbit_diameter == 0,
             classification_json(p, c1));
  checks.add("ac loxodromic on T_S, translation 2",
             c2.verdict == Verdict::Loxodromic && c2.translation == 2, classification_json(p, c2));

  rep.result = {{"checks", checks.list},
                {"restructure", restructure_json(p)},
                {"ball", {{"size", b->size()}, {"sphere_sizes", b->sphere_sizes()}}}};
  rep.pass = checks.pass;
  return rep;
}

Report square_report(RunConfig c) {
  if (c.graph.empty()) c.graph = shipped("square.ggp");
  c.command = "square-report";
  Report rep = make_report(c);
  Pipeline p(c);
  const Group& g = p.group();
  Checks checks;
  const auto& idx = p.index();
  const auto& r = p.restructuring();
  VertexSet ac = set_named(p, "ac"), bd = set_named(p, "bd");
  auto types = sorted_types(std::vector<VertexSet>(r.t_types.begin(), r.t_types.end()));
  types.erase(std::unique(types.begin(), types.end()), types.end());
  bool t_ok = types == sorted_types({g.graph().all(), ac, bd});
  std::size_t classes = 1;
  for (const auto& d : idx.domains()) classes += d.type == ac || d.type == bd;
  t_ok = t_ok && r.t.size() == classes;
  checks.add("T = {S, {a,c}-domains, {b,d}-domains}", t_ok,
             {{"t_types", set_list(p, r.t_types)}, {"t", r.t.size()}});
  const auto& ts = p.space("ts");
  double diam = ts.base_diameter();
  checks.add("T_S ball diameter <= 4", diam <= 4, {{"diameter", num(diam)}});
  Word acbd = p.parse("acbd");
  auto cl = stage("classify", [&] { return classify_element(acbd, ts); });
  checks.add("acbd elliptic on T_S", cl.verdict == Verdict::Elliptic, classification_json(p, cl));
  const auto& t = p.table(StructureKind::UnboundedProducts);
  auto st = stage("stability", [&] { return stability_tritest({acbd}, t, ts, stability_config(c)); });
  checks.add("tri-test on <acbd>: three false verdicts in agreement",
             !st.morse && !st.condition2() && !st.qi_into_ts && st.agree() && !st.partial,
             stability_json(p, st));
  rep.result = {{"checks", checks.list}, {"restructure", restructure_json(p)}};
  rep.pass = checks.pass;
  return rep;
}

Report f2_report(RunConfig c) {
  if (c.graph.empty()) c.graph = shipped("f2.ggp");
  c.command = "f2-report";
  Report rep = make_report(c);
  Pipeline p(c);
  auto b = p.ball();
  Checks checks;
  const auto& walls = p.walls();
  std::size_t multi = 0, nontrivial = 0, stab_checked = 0;
  for (const auto& w : walls.walls()) {
    multi += w.dual_edges.size() != 1;
    if (w.key.base.length() <= 1) {
      ++stab_checked;
      auto s = stage("walls", [&] { return wall_stabilizer(w, *b); });
      nontrivial += !(s.size() == 1 && s[0].is_identity());
    }
  }
  checks.add("walls are single edges", multi == 0,
             {{"walls", walls.size()}, {"multi_edge_walls", multi}});
  checks.add("wall stabilizers trivial (walls keyed within distance 1)", nontrivial == 0,
             {{"checked", stab_checked}, {"nontrivial", nontrivial}});
  auto cg = stage("contact", [&] { return contact_graph(walls, *b); });
  auto cj = contact_json(p, cg);
  checks.add("contact graph delta = 0", cj.value("delta_exact_zero", false), cj);
  const auto& r = p.restructuring();
  checks.add("T = {S}", r.t.size() == 1 && r.sm.empty(), {{"t", r.t.size()}});
  const auto& ts = p.space("ts");
  Word x = p.parse("x");
  auto cl = stage("classify", [&] { return classify_element(x, ts); });
  checks.add("x loxodromic, translation 1",
             cl.verdict == Verdict::Loxodromic && cl.translation == 1, classification_json(p, cl));
  const auto& coset = p.space("coset");
  const auto& cay = p.space("cayley");
  auto cmp = stage("largest", [&] { return compare_actions(coset, cay); });
  checks.add("coset-coned graph strictly below the Cayley tree",
             cmp.verdict == Domination::XBelowY,
             {{"verdict", to_string(cmp.verdict)}, {"x_bound", num(cmp.x_bound)},
              {"y_bound", num(cmp.y_bound)}});
  rep.result = {{"checks", checks.list}};
  rep.pass = checks.pass;
  return rep;
}

Report run_report(const RunConfig& c, unsigned threads) {
  const std::string& cmd = c.command;
  if (cmd == "pentagon-report") return pentagon_report(c);
  if (cmd == "square-report") return square_report(c);
  if (cmd == "f2-report") return f2_report(c);
  Pipeline p(c);
  Report rep = make_report(c);
  if (cmd == "ball") return cmd_ball(p, std::move(rep));
  if (cmd == "walls") return cmd_walls(p, std::move(rep));
  if (cmd == "contact") return cmd_contact(p, std::move(rep));
  if (cmd == "domains") return cmd_domains(p, std::move(rep));
  if (cmd == "restructure") return cmd_restructure(p, std::move(rep));
  if (cmd == "cone") return cmd_cone(p, std::move(rep));
  if (cmd == "largest") return cmd_largest(p, std::move(rep));
  if (cmd == "classify") return cmd_classify(p, std::move(rep));
  if (cmd == "check-axioms") return cmd_axioms(p, std::move(rep));
  if (cmd == "distance-formula") return cmd_distance_formula(p, std::move(rep));
  if (cmd == "contracting") return cmd_contracting(p, std::move(rep));
  if (cmd == "stability") return cmd_stability(p, std::move(rep));
  if (cmd == "random-subgroups") return cmd_random_subgroups(p, std::move(rep), threads);
  usage("cli", "unknown subcommand '" + cmd + "'");
}

}  // namespace hhslab
