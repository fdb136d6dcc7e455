#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hhslab/ball.hpp"
#include "hhslab/metric.hpp"
#include "hhslab/structure.hpp"
#include "hhslab/walls.hpp"

namespace hhslab {

enum class ConeReason {
  ProperSubdomain,  // proper family cosets, for ĈU
  UnboundedProduct,  // 𝔖^M members, for 𝒯_S
  WallCarrier,
  Coset,            // plain coset coning (comparison spaces)
  LargestAction,    // clique over Stab(F_U)-cosets
};

std::string to_string(ConeReason r);

/// Extra vertex attached to every ball point of one collapsed set. Cones sit
/// at distance 1 from their members (collapsed diameter 2); hubs at distance
/// 1/2 (members pairwise at distance 1, i.e. clique edges).
struct ConeVertex {
  VertexSet type = 0;
  Word key;
  int wall_label = -1;
  ConeReason reason = ConeReason::Coset;
  bool hub = false;
  std::uint32_t members = 0;
};

struct CollapsedFamily {
  VertexSet type = 0;
  ConeReason reason = ConeReason::Coset;
  bool clique = false;
};

/// Cayley ball (ids 0..n-1 are ball indices) with collapsed sets attached.
/// Edge weights are in half units.
class ConedGraph {
 public:
  static constexpr int kScale = 2;

  ConedGraph(std::string name, std::shared_ptr<const CayleyBall> ball);

  /// Cone (or hub) every coset g·W_type meeting the ball, for each family.
  void collapse(const CollapsedFamily& f);
  /// One cone per wall, over its carrier.
  void collapse_walls(const WallSet& walls);

  const std::string& name() const { return name_; }
  const CayleyBall& ball() const { return *ball_; }
  const std::shared_ptr<const CayleyBall>& ball_ptr() const { return ball_; }
  const MetricGraph& metric() const { return metric_; }
  const std::vector<CollapsedFamily>& provenance() const { return provenance_; }

  std::size_t base_count() const { return ball_->size(); }
  std::size_t vertex_count() const { return metric_.size(); }
  bool is_base(std::size_t v) const { return v < base_count(); }
  const ConeVertex& cone(std::size_t v) const { return cones_[v - base_count()]; }
  std::size_t cone_count() const { return cones_.size(); }
  std::optional<std::size_t> find_cone(VertexSet type, const Word& key,
                                       int wall_label = -1) const;
  std::string vertex_name(std::size_t v) const;

  /// h·v, when the image is present in the graph.
  std::optional<std::size_t> act(const Word& h, std::size_t v) const;

  /// Metric distances (raw / kScale); -1 if unreachable.
  std::vector<double> distances(std::size_t source) const;
  double distance(std::size_t u, std::size_t v) const;
  /// Largest distance between base vertices.
  double base_diameter() const;
  /// Base vertex and edge sets equal the plain Cayley ball's (nothing
  /// collapsed, or only singleton sets).
  bool identical_to_cayley() const;

  std::string to_dot() const;

 private:
  std::size_t add_cone(ConeVertex c, const std::vector<std::size_t>& members);

  std::string name_;
  std::shared_ptr<const CayleyBall> ball_;
  MetricGraph metric_;
  std::vector<ConeVertex> cones_;
  std::map<std::tuple<VertexSet, int, Word>, std::size_t> cone_index_;
  std::vector<CollapsedFamily> provenance_;
};

ConedGraph cayley_graph(std::shared_ptr<const CayleyBall> ball);

/// ĈU for domains of type A: the ball of W_A with every coset of every
/// proper family member B ⊊ A coned off.
ConedGraph factored_space(const Group& group,
                          const std::vector<VertexSet>& family, VertexSet a,
                          int radius, std::size_t budget = kDefaultBallBudget);

/// ĈS of the original structure: every proper family coset coned.
ConedGraph original_top_space(const StructureIndex& idx);
/// 𝒯_S: every coset of every 𝔖^M member coned.
ConedGraph unbounded_products_space(const StructureIndex& idx,
                                    const Restructuring& r);
/// Cosets of W_st(A) for ⊑-maximal U ∈ 𝔗∖{S} made into cliques.
ConedGraph largest_action_graph(const StructureIndex& idx,
                                const Restructuring& r);
/// Hyperplane carriers coned (the contact-graph action).
ConedGraph wall_coned_graph(std::shared_ptr<const CayleyBall> ball,
                            const WallSet& walls);
/// Cosets of the given parabolic types coned.
ConedGraph coset_coned_graph(std::shared_ptr<const CayleyBall> ball,
                             const std::vector<VertexSet>& types,
                             std::string name);

// ---------------------------------------------------------------------------
// Dynamics

inline constexpr double kTauMin = 0.25;
inline constexpr double kEllipticBound = 6.0;  // 3 × collapsed diameter
inline constexpr int kOrbitCap = 64;

enum class Verdict { Elliptic, Loxodromic, Inconclusive };
std::string to_string(Verdict v);

struct ElementClassification {
  Word element;
  std::string space;
  std::size_t base = 0;
  std::string base_name;
  int n = 0;  // largest power with g^n·base present (capped)
  double orbit_diameter = 0;
  double translation = 0;
  Verdict verdict = Verdict::Inconclusive;
  /// Ball radius that would certify two powers of g, when too small.
  int required_radius = 0;
};

/// Base point: the identity or a collapsed set through it, whichever keeps
/// its orbit inside the graph longest (ties: smaller orbit diameter).
ElementClassification classify_element(const Word& g, const ConedGraph& space,
                                       int max_power = kOrbitCap);

struct AcylindricityRow {
  int r = 0;
  std::size_t pairs = 0;
  std::size_t n = 0;  // max #{g : d(p,gp) ≤ ε, d(q,gq) ≤ ε}
};

struct AcylindricityReport {
  int epsilon = 0;
  std::vector<AcylindricityRow> rows;
  /// Smallest R attaining the minimal witnessed N, if any pair was found.
  std::optional<int> r;
  std::size_t n = 0;
  std::size_t acting = 0;
  std::string to_csv() const;
};

AcylindricityReport acylindricity_probe(const ConedGraph& space, int epsilon,
                                        const std::vector<int>& levels,
                                        std::size_t pairs_per_level,
                                        std::uint64_t seed);

enum class Domination { Equivalent, XBelowY, YBelowX, Incomparable };
std::string to_string(Domination d);

struct ActionComparison {
  Domination verdict = Domination::Incomparable;
  /// Sup over the other space's generators of the length in this space,
  /// restricted to generators of word length ≤ radius and ≤ radius − 2.
  double x_bound = 0, x_bound_inner = 0;
  double y_bound = 0, y_bound_inner = 0;
  bool y_gens_x_bounded = false;
  bool x_gens_y_bounded = false;
};

/// X ≼ Y when Y's implicit generators (standard letters plus every collapsed
/// pair) have bounded length in X.
ActionComparison compare_actions(const ConedGraph& x, const ConedGraph& y);

}  // namespace hhslab
