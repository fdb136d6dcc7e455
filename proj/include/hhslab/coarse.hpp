#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhslab/coned.hpp"
#include "hhslab/projection.hpp"

namespace hhslab {

enum class PathKind { Geodesic, Quasigeodesic, Axis, Orbit };
std::string to_string(PathKind k);

struct PathSample {
  PathKind kind = PathKind::Geodesic;
  std::string label;
  std::vector<Word> points;
  /// Every point lies in the reference ball.
  bool certified = false;
};

/// Normal-form path from x to y.
PathSample geodesic_sample(const Group& group, const Word& x, const Word& y,
                           const CayleyBall* ball = nullptr);
/// g^{-n} … g^{n} joined by normal-form paths of g.
PathSample axis_sample(const Group& group, const Word& g, int n,
                       const CayleyBall* ball = nullptr);
/// Largest n with |g^k| ≤ radius for all |k| ≤ n (capped at 64).
int max_certified_power(const Group& group, const Word& g, int radius);

/// Growth threshold: a quantity growing at least this fast per unit of
/// scale between half and full sample size is called unbounded.
inline constexpr double kGrowthSlope = 0.25;
/// Contraction fails when diam π_γ(B_R(x)) grows at least this fast in R.
inline constexpr double kContractionSlope = 1.0;
inline constexpr double kDefaultBoundedCutoff = 20;

/// Relevance cutoff for hierarchy paths: 10·ξ′ with a floor of 2.
double relevance_cutoff(double xi_prime);

struct BoundedProjections {
  bool bounded = true;
  double d = 0;       // max diam π_U(γ) over non-maximal U
  double d_half = 0;  // same on the middle half of γ
  double slope = 0;
  double cutoff = kDefaultBoundedCutoff;
  std::string worst_domain;
  std::size_t domains = 0;
  std::size_t skipped = 0;
};

/// Domains are those of the table's structure realized at points of γ.
BoundedProjections bounded_projections(const PathSample& gamma,
                                       const ProjectionTable& table,
                                       double cutoff = kDefaultBoundedCutoff);

struct Contracting {
  bool contracting = true;
  bool inconclusive = false;
  double a = 0.5;
  double d_prime = 0;
  double identity_defect = 0;  // max diam π_γ(p), p ∈ γ
  double lipschitz_defect = 0;  // max diam π_γ({x, x·s})
  /// profile[R-1] = max diam π_γ(B_R(x)) over ball x with ⌊A·d(x,γ)⌋ = R.
  std::vector<double> profile;
  double slope = 0;
  /// Point with the largest diam/R, preferring R ≥ 2; a failure witness when
  /// diam ≥ 2R and R ≥ 2.
  std::optional<Word> witness;
  int witness_r = 0;
  double witness_diam = 0;
  std::size_t points_checked = 0;
};

/// Ball points are all checked up to `max_points`, else an even stride.
/// Fails on linear growth of the profile or a point with diam ≥ 2R, R ≥ 2.
Contracting is_contracting(const PathSample& gamma, const CayleyBall& ball,
                           double a = 0.5, std::size_t max_points = 4000);

struct MorseRow {
  double k = 1;
  double c = 0;
  double n = 0;
  double n_half = 0;  // over endpoint pairs at most half as far apart
  double slope = 0;
  std::size_t templates = 0;
};

struct MorseGauge {
  std::vector<MorseRow> rows;
  bool morse = true;
  bool inconclusive = false;
  /// Largest per-row growth of N between half and full endpoint distance.
  double slope = 0;
  int waypoint_radius = 0;
  int staircase_radius = 0;
  std::size_t pairs = 0;
  std::string family;
};

struct MorseConfig {
  std::vector<std::pair<double, double>> kc = {{1, 2}, {2, 2}};
  int waypoint_radius = 6;
  int staircase_radius = 3;
  /// Endpoint pairs beyond this are thinned by an even stride in distance.
  std::size_t max_pairs = 36;
};

/// Templates: the normal-form geodesic, two geodesic legs through a waypoint
/// p·u, and three legs p → p·u → q·u → q, for u in the waypoint balls and
/// (p, q) endpoint pairs on γ. Excursion is measured to the points of γ.
MorseGauge morse_gauge(const PathSample& gamma, const CayleyBall& ball,
                       const MorseConfig& config = {});

struct DistanceFormulaPair {
  Word x, y;
  int d = 0;
  double sigma = 0;
  std::size_t terms = 0;
};

struct DistanceFormulaFit {
  double s = 10;
  double k = 0;
  double c = 0;
  std::size_t pairs = 0;
  std::size_t informative = 0;  // pairs with Σ > 0
  bool degenerate = true;
  /// Fraction of pairs satisfying both inequalities at (k, c).
  double coverage = 0;
  double worst_upper = 0;  // max d − (kΣ + c)
  double worst_lower = 0;  // max Σ − (kd + c)
  std::size_t skipped = 0;
  std::vector<DistanceFormulaPair> samples;
  std::string to_csv() const;
};

/// Σ_U ⦃d_U(x,y)⦄_s over structure domains realized along the normal-form
/// path, for `pairs` uniform ball pairs. K is the least constant covering the
/// informative pairs both ways; C covers pairs where Σ = 0.
DistanceFormulaFit distance_formula_fit(const ProjectionTable& table,
                                        double s, std::size_t pairs,
                                        std::uint64_t seed);

struct StabilityConfig {
  /// H-ball radius; 0 picks the largest radius keeping the orbit certified
  /// (capped at 3) or 2 when 𝒯_S is the plain Cayley graph.
  int h_radius = 0;
  double bounded_cutoff = kDefaultBoundedCutoff;
  /// Fewer endpoint pairs than for axes: a 2-generator H-ball has ~160.
  MorseConfig morse{{{1, 2}, {2, 2}}, 6, 3, 16};
};

struct StabilityReport {
  std::vector<Word> gens;
  int h_radius = 0;
  std::size_t orbit = 0;
  bool partial = false;
  std::string partial_reason;
  bool trivial = false;

  // (1) Morse orbit
  bool morse = true;
  MorseGauge gauge;
  // (2) undistorted with bounded projections over the structure
  bool undistorted = true;
  double distortion_k = 1;
  double distortion_c = 0;
  double distortion_slope = 0;
  bool bounded_projections = true;
  double projection_d = 0;
  double projection_slope = 0;
  // (3) orbit map into 𝒯_S is a quasi-isometric embedding
  bool qi_into_ts = true;
  double qi_k = 1;
  double qi_c = 0;
  double qi_slope = 0;
  bool ts_algebraic = false;

  bool condition2() const { return undistorted && bounded_projections; }
  bool agree() const { return morse == condition2() && morse == qi_into_ts; }
  bool stable() const { return morse && condition2() && qi_into_ts; }
};

StabilityReport stability_tritest(const std::vector<Word>& gens,
                                  const ProjectionTable& table,
                                  const ConedGraph& ts,
                                  const StabilityConfig& config = {});

struct RandomSubgroupTrial {
  std::vector<Word> gens;
  bool stable = false;
  bool agree = true;
  bool partial = false;
};

struct RandomSubgroupReport {
  bool refused = false;
  std::string reason;
  int k = 0;
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<RandomSubgroupTrial> runs;
  double frequency = 0;
  std::size_t disagreements = 0;
};

/// Trial t uses make_engine(seed, t), so results do not depend on `threads`.
/// Refuses when the defining graph is a join of two subgraphs with infinite
/// parabolics.
RandomSubgroupReport random_subgroup_experiment(const ProjectionTable& table,
                                                const ConedGraph& ts, int k,
                                                int n, int trials,
                                                std::uint64_t seed,
                                                const StabilityConfig& config = {},
                                                unsigned threads = 1);

struct DomainPathCheck {
  std::string domain;
  double d = 0;           // d_U(x, y)
  double backtrack = 0;   // unparametrized-quasigeodesic defect
  bool relevant = false;
  int active_begin = 0;
  int active_end = 0;
  int nu = 0;             // max distance of the active subpath to P_U
};

struct HierarchyPathReport {
  int length = 0;
  double cutoff = 2;
  double max_backtrack = 0;
  int nu = 0;
  std::size_t relevant = 0;
  std::vector<DomainPathCheck> domains;
  /// Image in the top space: backtracking defect and diameter.
  double top_backtrack = 0;
  double top_diameter = 0;
  bool top_certified = true;
  bool pass = true;
};

HierarchyPathReport hierarchy_path_checks(const Word& x, const Word& y,
                                          const ProjectionTable& table,
                                          double cutoff);

}  // namespace hhslab
