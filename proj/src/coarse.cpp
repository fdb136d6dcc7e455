#include "hhslab/coarse.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "hhslab/random_walk.hpp"

namespace hhslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DomainKey {
  VertexSet type;
  Word key;
  friend bool operator<(const DomainKey& a, const DomainKey& b) {
    if (a.type != b.type) return a.type < b.type;
    return a.key < b.key;
  }
};

/// Non-maximal structure domains realized at the given points.
std::vector<Domain> realized(const ProjectionTable& t,
                             const std::vector<Word>& points, bool with_top) {
  const auto& idx = t.index();
  VertexSet all = idx.group().graph().all();
  std::set<DomainKey> seen;
  std::vector<Domain> out;
  for (VertexSet ty : t.types()) {
    if (ty == all && !with_top) continue;
    for (const auto& p : points) {
      Domain d = idx.domain_of(ty, p);
      if (seen.insert({d.type, d.key}).second) out.push_back(std::move(d));
    }
  }
  return out;
}

/// Points sorted by length; nearest-point queries prune with
/// |d(1,z) − d(1,o)| ≤ d(z,o).
class ReferenceSet {
 public:
  ReferenceSet(const Group& g, std::vector<Word> pts) : g_(g), pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    for (const auto& p : pts_) len_.push_back(p.length());
  }

  int distance(const Word& z) const { return distance(z.syllables(), z.length()); }

  /// `z` is any reduced syllable sequence of word length `lz`.
  int distance(std::span<const Syllable> z, int lz) const {
    if (pts_.empty()) return 0;
    int best = std::numeric_limits<int>::max();
    auto mid = std::lower_bound(len_.begin(), len_.end(), lz) - len_.begin();
    std::ptrdiff_t lo = mid - 1, hi = mid;
    const auto n = std::ptrdiff_t(pts_.size());
    while (lo >= 0 || hi < n) {
      int glo = lo >= 0 ? lz - len_[lo] : std::numeric_limits<int>::max();
      int ghi = hi < n ? len_[hi] - lz : std::numeric_limits<int>::max();
      if (std::min(glo, ghi) >= best) break;
      if (glo <= ghi) {
        best = std::min(best, g_.distance(z, pts_[lo].syllables()));
        --lo;
      } else {
        best = std::min(best, g_.distance(z, pts_[hi].syllables()));
        ++hi;
      }
      if (best == 0) break;
    }
    return best;
  }

 private:
  const Group& g_;
  std::vector<Word> pts_;
  std::vector<int> len_;
};

void append_path(const Group& g, std::vector<Word>& path, const Word& from,
                 const Word& to) {
  auto steps = g.letter_path(g.between(from, to));
  for (std::size_t i = path.empty() ? 0 : 1; i < steps.size(); ++i) {
    path.push_back(g.multiply(from, steps[i]));
  }
}

int syllable_length(const std::vector<Syllable>& w) {
  int n = 0;
  for (const auto& x : w) n += std::abs(x.exponent);
  return n;
}

/// Template path kept as reduced, non-canonical syllable sequences plus the
/// letters between consecutive points; cheap to extend letter by letter.
struct Trail {
  std::vector<std::vector<Syllable>> points;
  std::vector<int> lengths;
  std::vector<Letter> steps;

  void reset(const Word& start) {
    points.assign(1, start.syllables());
    lengths.assign(1, start.length());
    steps.clear();
  }
  void step(const Group& g, const Letter& l) {
    auto next = points.back();
    g.extend(next, l);
    lengths.push_back(syllable_length(next));
    points.push_back(std::move(next));
    steps.push_back(l);
  }
  /// Normal-form leg from `from` to `to`, or the normal form of the reverse
  /// leg walked backwards. The trail must currently end at `from`.
  void leg(const Group& g, const Word& from, const Word& to, bool reversed) {
    if (!reversed) {
      for (const auto& l : g.spell(g.between(from, to))) step(g, l);
    } else {
      auto letters = g.spell(g.between(to, from));
      for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        step(g, {it->vertex, -it->exponent});
    }
  }
  std::size_t size() const { return points.size(); }

  /// (k,c)-quasigeodesic test; distances from each point are accumulated
  /// letter by letter.
  bool quasigeodesic(const Group& g, double k, double c) const {
    std::vector<Syllable> acc;
    for (std::size_t i = 0; i + 2 < points.size(); ++i) {
      acc.clear();
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        g.extend(acc, steps[j - 1]);
        if (j >= i + 2 && double(j - i) > k * syllable_length(acc) + c) return false;
      }
    }
    return true;
  }
};

std::vector<const Word*> small_elements(const CayleyBall& ball, int radius) {
  std::vector<const Word*> out;
  for (const auto& w : ball.elements()) {
    if (w.length() > radius) break;
    if (!w.is_identity()) out.push_back(&w);
  }
  return out;
}

double growth_slope(double full, double half, double scale_full,
                    double scale_half) {
  if (scale_full <= scale_half) return 0;
  return (full - half) / (scale_full - scale_half);
}

struct PairSpec {
  Word p, q;
  int d;
};

MorseGauge gauge_pairs(const Group& g, const CayleyBall& ball,
                       std::vector<PairSpec> pairs,
                       const ReferenceSet& ref, const MorseConfig& config,
                       std::string family) {
  MorseGauge out;
  out.family = std::move(family);
  out.waypoint_radius = std::min(config.waypoint_radius, ball.radius());
  out.staircase_radius = std::min(config.staircase_radius, ball.radius());
  if (config.max_pairs > 1 && pairs.size() > config.max_pairs) {
    // Even stride over pairs sorted by distance; the farthest pair is kept.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const PairSpec& a, const PairSpec& b) { return a.d < b.d; });
    std::vector<PairSpec> kept;
    std::size_t n = pairs.size(), m = config.max_pairs;
    for (std::size_t i = 0; i < m; ++i) kept.push_back(pairs[(n - 1) - (m - 1 - i) * (n - 1) / (m - 1)]);
    pairs = std::move(kept);
  }
  out.pairs = pairs.size();
  for (auto [k, c] : config.kc) out.rows.push_back({k, c, 0, 0});
  if (pairs.empty() || out.rows.empty()) {
    out.inconclusive = !pairs.empty();
    return out;
  }
  double kmax = 0, cmax = 0;
  for (const auto& r : out.rows) kmax = std::max(kmax, r.k), cmax = std::max(cmax, r.c);
  int dmax = 0;
  for (const auto& pr : pairs) dmax = std::max(dmax, pr.d);
  double half_scale = dmax / 2.0;
  int half_dmax = 0;

  auto waypoints = small_elements(ball, out.waypoint_radius);
  auto stairs = small_elements(ball, out.staircase_radius);

  auto consider = [&](const Trail& path, const PairSpec& pr) {
    double len = double(path.size() - 1);
    double excess = len - pr.d;
    std::vector<char> ok(out.rows.size());
    bool any = false;
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      const auto& row = out.rows[r];
      if (excess <= row.c) {
        ok[r] = 1;  // subpath excess never exceeds the total
      } else if (row.k > 1 && len <= row.k * pr.d + row.c) {
        ok[r] = path.quasigeodesic(g, row.k, row.c);
      }
      any = any || ok[r];
    }
    if (!any) return;
    int exc = 0;
    for (std::size_t i = 0; i < path.size(); ++i)
      exc = std::max(exc, ref.distance(path.points[i], path.lengths[i]));
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      if (!ok[r]) continue;
      out.rows[r].n = std::max(out.rows[r].n, double(exc));
      if (pr.d <= half_scale) out.rows[r].n_half = std::max(out.rows[r].n_half, double(exc));
      ++out.rows[r].templates;
    }
  };
  for (const auto& pr : pairs)
    if (pr.d <= half_scale) half_dmax = std::max(half_dmax, pr.d);

  Trail path;
  for (const auto& pr : pairs) {
    path.reset(pr.p);
    path.leg(g, pr.p, pr.q, false);
    consider(path, pr);
    // Each leg is tried in both orientations of its normal form, since a
    // normal form may double back along γ where another geodesic would not.
    auto legs = [&](const std::vector<Word>& corners) {
      std::size_t n = corners.size() - 1;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        path.reset(corners[0]);
        for (std::size_t i = 0; i < n; ++i) path.leg(g, corners[i], corners[i + 1], mask >> i & 1);
        consider(path, pr);
      }
    };
    for (const Word* u : waypoints) {
      Word w = g.multiply(pr.p, *u);
      int second = g.distance(w, pr.q);
      if (u->length() + second > kmax * pr.d + cmax) continue;
      legs({pr.p, w, pr.q});
    }
    for (const Word* u : stairs) {
      Word a = g.multiply(pr.p, *u);
      Word b = g.multiply(pr.q, *u);
      if (2 * u->length() + g.distance(a, b) > kmax * pr.d + cmax) continue;
      legs({pr.p, a, b, pr.q});
    }
  }
  // Monotone in K for a fixed C: a (K,C) template is a (K′,C) template.
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    for (std::size_t q = 0; q < out.rows.size(); ++q) {
      if (out.rows[q].c == out.rows[r].c && out.rows[q].k < out.rows[r].k) {
        out.rows[r].n = std::max(out.rows[r].n, out.rows[q].n);
        out.rows[r].n_half = std::max(out.rows[r].n_half, out.rows[q].n_half);
      }
    }
  }
  out.inconclusive = half_dmax == 0 || half_dmax == dmax;
  // A backtracking spike of length C keeps any path a (K,C)-quasigeodesic, so
  // deviation up to C/2 is available in every space; only the excess grows.
  for (auto& row : out.rows) {
    double spike = row.c / 2;
    row.slope = out.inconclusive ? 0
                                 : growth_slope(std::max(0.0, row.n - spike),
                                                std::max(0.0, row.n_half - spike), dmax, half_dmax);
    out.slope = std::max(out.slope, row.slope);
  }
  out.morse = out.slope < kGrowthSlope;
  return out;
}

/// Elements of ⟨gens⟩ with their word length in gens, up to `radius`.
std::unordered_map<Word, int, WordHash> h_ball(const Group& g,
                                               const std::vector<Word>& gens,
                                               int radius) {
  std::vector<Word> s;
  for (const auto& x : gens) {
    if (x.is_identity()) continue;
    s.push_back(x);
    s.push_back(g.inverse(x));
  }
  std::unordered_map<Word, int, WordHash> out{{g.identity(), 0}};
  std::vector<Word> frontier{g.identity()};
  for (int r = 1; r <= radius && !frontier.empty(); ++r) {
    std::vector<Word> next;
    for (const auto& f : frontier) {
      for (const auto& x : s) {
        Word y = g.multiply(f, x);
        if (out.emplace(y, r).second) next.push_back(std::move(y));
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::vector<std::pair<Word, int>> sorted_ball(
    const std::unordered_map<Word, int, WordHash>& m) {
  std::vector<std::pair<Word, int>> out(m.begin(), m.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return out;
}

}  // namespace

std::string to_string(PathKind k) {
  switch (k) {
    case PathKind::Geodesic: return "geodesic";
    case PathKind::Quasigeodesic: return "quasigeodesic";
    case PathKind::Axis: return "axis";
    case PathKind::Orbit: return "orbit";
  }
  return "?";
}

double relevance_cutoff(double xi_prime) { return std::max(10 * xi_prime, 2.0); }

namespace {
bool all_in(const CayleyBall* ball, const std::vector<Word>& pts) {
  if (!ball) return false;
  return std::all_of(pts.begin(), pts.end(),
                     [&](const Word& w) { return ball->contains(w); });
}
}  // namespace

PathSample geodesic_sample(const Group& group, const Word& x, const Word& y,
                           const CayleyBall* ball) {
  PathSample s;
  s.kind = PathKind::Geodesic;
  s.label = "[" + group.format(x) + "," + group.format(y) + "]";
  append_path(group, s.points, x, y);
  s.certified = all_in(ball, s.points);
  return s;
}

PathSample axis_sample(const Group& group, const Word& g, int n,
                       const CayleyBall* ball) {
  PathSample s;
  s.kind = PathKind::Axis;
  s.label = "axis(" + group.format(g) + ")^" + std::to_string(n);
  Word at = group.power(g, -n);
  s.points.push_back(at);
  for (int k = -n; k < n; ++k) {
    Word next = group.multiply(at, g);
    append_path(group, s.points, at, next);
    at = next;
  }
  s.certified = all_in(ball, s.points);
  return s;
}

int max_certified_power(const Group& group, const Word& g, int radius) {
  if (g.is_identity()) return 0;
  int n = 0;
  while (n < 64 && group.power(g, n + 1).length() <= radius &&
         group.power(g, -(n + 1)).length() <= radius)
    ++n;
  return n;
}

BoundedProjections bounded_projections(const PathSample& gamma,
                                       const ProjectionTable& t,
                                       double cutoff) {
  BoundedProjections out;
  out.cutoff = cutoff;
  const auto& idx = t.index();
  const Group& g = idx.group();
  auto measure = [&](const std::vector<Word>& pts, std::string* worst,
                     std::size_t* count) {
    double best = 0;
    auto doms = realized(t, pts, false);
    if (count) *count = doms.size();
    for (const auto& u : doms) {
      std::set<std::size_t> nodes;
      for (const auto& p : pts) {
        if (auto n = t.project(u, p)) nodes.insert(*n);
        else ++out.skipped;
      }
      double d = t.diameter(u.type, {nodes.begin(), nodes.end()});
      if (d > best) {
        best = d;
        if (worst) *worst = idx.name(u);
      }
    }
    return best;
  };
  const auto& pts = gamma.points;
  if (pts.size() < 2) return out;
  out.d = measure(pts, &out.worst_domain, &out.domains);
  std::size_t n = pts.size();
  std::vector<Word> half(pts.begin() + n / 4, pts.begin() + (3 * n) / 4 + 1);
  out.d_half = measure(half, nullptr, nullptr);
  double scale = g.distance(pts.front(), pts.back());
  double scale_half = g.distance(half.front(), half.back());
  out.slope = growth_slope(out.d, out.d_half, scale, scale_half);
  out.bounded = out.d <= cutoff && out.slope < kGrowthSlope;
  return out;
}

Contracting is_contracting(const PathSample& gamma, const CayleyBall& ball,
                           double a, std::size_t max_points) {
  Contracting out;
  out.a = a;
  const Group& g = ball.group();
  const auto& pts = gamma.points;
  const std::size_t m = pts.size();
  std::vector<std::vector<int>> pd(m, std::vector<int>(m));
  int span = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) span = std::max(span, pd[i][j] = g.distance(pts[i], pts[j]));
  if (span == 0) return out;
  if (m < 6) {
    out.inconclusive = true;
    return out;
  }

  // Nearest-point set of y as a bitmask over γ, plus d(y, γ). Points are
  // visited by |d(1,y) − |γ_i||, a lower bound for d(y, γ_i).
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pts[i].length() < pts[j].length();
  });
  std::vector<int> lens(m);
  for (std::size_t i = 0; i < m; ++i) lens[i] = pts[order[i]].length();
  std::vector<int> d(m);
  auto project = [&](const Word& y, std::vector<char>& mask) {
    int ly = y.length();
    int best = std::numeric_limits<int>::max();
    std::fill(d.begin(), d.end(), -1);
    auto mid = std::lower_bound(lens.begin(), lens.end(), ly) - lens.begin();
    std::ptrdiff_t lo = mid - 1, hi = mid;
    const auto n = std::ptrdiff_t(m);
    while (lo >= 0 || hi < n) {
      int glo = lo >= 0 ? ly - lens[lo] : std::numeric_limits<int>::max();
      int ghi = hi < n ? lens[hi] - ly : std::numeric_limits<int>::max();
      if (std::min(glo, ghi) > best) break;
      std::size_t k = glo <= ghi ? order[lo--] : order[hi++];
      d[k] = g.distance(y, pts[k]);
      best = std::min(best, d[k]);
    }
    for (std::size_t i = 0; i < m; ++i)
      if (d[i] == best) mask[i] = 1;
    return best;
  };
  auto diam = [&](const std::vector<char>& mask) {
    int best = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!mask[i]) continue;
      for (std::size_t j = i + 1; j < m; ++j)
        if (mask[j]) best = std::max(best, pd[i][j]);
    }
    return double(best);
  };

  for (const auto& p : pts) {
    std::vector<char> mask(m);
    project(p, mask);
    out.identity_defect = std::max(out.identity_defect, diam(mask));
  }
  std::vector<double> profile;
  // Witness ranking: R ≥ 2 first (where the diam ≥ 2R rule applies), then
  // diam/R.
  std::pair<bool, double> best_score{false, -1};
  std::size_t stride = std::max<std::size_t>(1, (ball.size() + max_points - 1) / max_points);
  for (std::size_t xi = 0; xi < ball.size(); xi += stride) {
    const Word& x = ball.element(xi);
    ++out.points_checked;
    std::vector<char> mx(m);
    int dx = project(x, mx);
    for (const auto& l : g.letters()) {
      std::vector<char> mask = mx;
      project(g.multiply(x, l), mask);
      out.lipschitz_defect = std::max(out.lipschitz_defect, diam(mask));
    }
    int r = int(std::floor(a * dx));
    if (r < 1 || r > ball.radius()) continue;
    std::vector<char> mask(m);
    for (const auto& u : ball.elements()) {
      if (u.length() > r) break;
      project(g.multiply(x, u), mask);
    }
    double dm = diam(mask);
    if (profile.size() < std::size_t(r)) profile.resize(r, -1);
    if (dm > profile[r - 1]) profile[r - 1] = dm;
    std::pair<bool, double> score{r >= 2, dm / r};
    if (score > best_score) {
      best_score = score;
      out.witness = x;
      out.witness_r = r;
      out.witness_diam = dm;
    }
  }
  // Fill gaps with the running maximum.
  double run = 0;
  for (auto& v : profile) {
    if (v < 0) v = run;
    run = std::max(run, v);
  }
  out.profile = profile;
  out.d_prime = std::max({out.identity_defect, out.lipschitz_defect, run});
  int rmax = int(profile.size());
  if (rmax < 2) {
    out.inconclusive = true;
    return out;
  }
  int rhalf = (rmax + 1) / 2;
  if (rhalf == rmax) rhalf = rmax - 1;
  out.slope = growth_slope(profile[rmax - 1], profile[rhalf - 1], rmax, rhalf);
  bool wide = false;
  for (int r = 2; r <= rmax; ++r) wide = wide || profile[r - 1] >= 2 * r;
  out.contracting = out.slope < kContractionSlope && !wide;
  return out;
}

MorseGauge morse_gauge(const PathSample& gamma, const CayleyBall& ball,
                       const MorseConfig& config) {
  const Group& g = ball.group();
  const auto& pts = gamma.points;
  std::vector<PairSpec> pairs;
  if (pts.size() >= 2) {
    std::size_t stride = std::max<std::size_t>(1, (pts.size() - 1) / 8);
    std::vector<std::size_t> ends;
    for (std::size_t i = 0; i < pts.size(); i += stride) ends.push_back(i);
    if (ends.back() != pts.size() - 1) ends.push_back(pts.size() - 1);
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = i + 1; j < ends.size(); ++j)
        pairs.push_back({pts[ends[i]], pts[ends[j]], g.distance(pts[ends[i]], pts[ends[j]])});
  }
  return gauge_pairs(g, ball, pairs, ReferenceSet(g, pts), config,
                     "geodesic, 2-leg and 3-leg staircase templates on " + gamma.label);
}

std::string DistanceFormulaFit::to_csv() const {
  std::ostringstream os;
  os << "d,sigma,terms\n";
  for (const auto& p : samples) os << p.d << "," << p.sigma << "," << p.terms << "\n";
  return os.str();
}

DistanceFormulaFit distance_formula_fit(const ProjectionTable& t, double s,
                                        std::size_t pairs, std::uint64_t seed) {
  DistanceFormulaFit out;
  out.s = s;
  const auto& idx = t.index();
  const auto& ball = idx.ball();
  const Group& g = idx.group();
  auto engine = make_engine(seed, 0xdf);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  for (std::size_t n = 0; n < pairs; ++n) {
    DistanceFormulaPair p;
    p.x = ball.element(pick(engine));
    p.y = ball.element(pick(engine));
    p.d = g.distance(p.x, p.y);
    std::vector<Word> path;
    append_path(g, path, p.x, p.y);
    for (const auto& u : realized(t, path, true)) {
      auto du = t.distance(u, p.x, p.y);
      if (!du) {
        ++out.skipped;
        continue;
      }
      if (*du > s) {
        p.sigma += *du;
        ++p.terms;
      }
    }
    out.samples.push_back(std::move(p));
  }
  out.pairs = out.samples.size();
  for (const auto& p : out.samples) {
    if (p.sigma > 0) {
      ++out.informative;
      out.k = std::max({out.k, p.d / p.sigma, p.sigma / std::max(p.d, 1)});
    } else {
      out.c = std::max(out.c, double(p.d));
    }
  }
  out.degenerate = out.informative == 0;
  if (out.k < 1) out.k = 1;
  std::size_t covered = 0;
  out.worst_upper = -kInf;
  out.worst_lower = -kInf;
  for (const auto& p : out.samples) {
    double up = p.d - (out.k * p.sigma + out.c);
    double lo = p.sigma - (out.k * p.d + out.c);
    out.worst_upper = std::max(out.worst_upper, up);
    out.worst_lower = std::max(out.worst_lower, lo);
    if (up <= 1e-9 && lo <= 1e-9) ++covered;
  }
  out.coverage = out.pairs ? double(covered) / out.pairs : 1;
  return out;
}

StabilityReport stability_tritest(const std::vector<Word>& gens,
                                  const ProjectionTable& t, const ConedGraph& ts,
                                  const StabilityConfig& config) {
  StabilityReport out;
  out.gens = gens;
  const auto& idx = t.index();
  const auto& ball = idx.ball();
  const Group& g = idx.group();
  out.ts_algebraic = ts.provenance().empty();
  if (std::all_of(gens.begin(), gens.end(), [](const Word& w) { return w.is_identity(); })) {
    out.trivial = true;
    out.orbit = 1;
    return out;
  }

  int m = config.h_radius;
  if (m <= 0) {
    if (out.ts_algebraic) {
      m = gens.size() == 1 ? 3 : 2;
    } else {
      m = 0;
      while (m < 3) {
        auto hb = h_ball(g, gens, m + 1);
        bool inside = std::all_of(hb.begin(), hb.end(),
                                  [&](const auto& kv) { return ball.contains(kv.first); });
        if (!inside) break;
        ++m;
      }
    }
  }
  out.h_radius = m;
  if (m < 1) {
    out.partial = true;
    out.partial_reason = "orbit escapes the ball at H-radius 1";
    return out;
  }
  auto orbit_map = h_ball(g, gens, m);
  auto diff_map = h_ball(g, gens, 2 * m);
  out.orbit = orbit_map.size();
  auto diffs = sorted_ball(diff_map);
  int kmax = diffs.back().second;
  if (kmax < 2 * m) {
    // H is finite: its ball stopped growing.
    out.trivial = true;
    return out;
  }
  int khalf = (kmax + 1) / 2;

  // (1) Morse: templates between 1 and h stay near the orbit.
  std::vector<Word> ref_pts;
  for (const auto& [w, k] : diffs) ref_pts.push_back(w);
  std::vector<PairSpec> pairs;
  for (const auto& [w, k] : diffs)
    if (k > 0) pairs.push_back({g.identity(), w, w.length()});
  out.gauge = gauge_pairs(g, ball, pairs, ReferenceSet(g, ref_pts), config.morse,
                          "templates between orbit points, excursion to the orbit");
  out.morse = out.gauge.morse;

  // (2) distortion and bounded projections.
  std::vector<double> gmin(kmax + 1, kInf), gmax(kmax + 1, 0);
  out.distortion_k = 1;
  for (const auto& [w, k] : diffs) {
    if (k == 0) continue;
    double len = w.length();
    gmin[k] = std::min(gmin[k], len);
    gmax[k] = std::max(gmax[k], len);
    out.distortion_k = std::max({out.distortion_k, k / len, len / k});
  }
  out.distortion_slope = growth_slope(gmin[kmax], gmin[khalf], kmax, khalf);
  out.undistorted = out.distortion_slope >= kGrowthSlope;

  std::vector<double> dproj(kmax + 1, 0);
  for (const auto& [w, k] : diffs) {
    if (k == 0) continue;
    std::vector<Word> path;
    append_path(g, path, g.identity(), w);
    for (const auto& u : realized(t, path, false)) {
      if (auto du = t.distance(u, g.identity(), w)) dproj[k] = std::max(dproj[k], *du);
    }
  }
  for (int k = 1; k <= kmax; ++k) dproj[k] = std::max(dproj[k], dproj[k - 1]);
  out.projection_d = dproj[kmax];
  out.projection_slope = growth_slope(dproj[kmax], dproj[khalf], gmax[kmax], gmax[khalf]);
  out.bounded_projections =
      out.projection_d <= config.bounded_cutoff && out.projection_slope < kGrowthSlope;

  // (3) orbit map into 𝒯_S.
  std::vector<double> tmin(kmax + 1, kInf);
  out.qi_k = 1;
  auto record = [&](int k, double d) {
    tmin[k] = std::min(tmin[k], d);
    out.qi_k = std::max({out.qi_k, d > 0 ? k / d : kInf, d / k});
  };
  if (out.ts_algebraic) {
    for (const auto& [w, k] : diffs)
      if (k > 0) record(k, w.length());
  } else {
    auto orbit = sorted_ball(orbit_map);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      auto bi = ball.find(orbit[i].first);
      if (!bi) continue;
      auto dist = ts.distances(*bi);
      for (std::size_t j = i + 1; j < orbit.size(); ++j) {
        auto bj = ball.find(orbit[j].first);
        if (!bj) continue;
        Word diff = g.between(orbit[i].first, orbit[j].first);
        auto it = diff_map.find(diff);
        if (it == diff_map.end() || it->second == 0) continue;
        record(it->second, dist[*bj]);
      }
    }
  }
  if (!std::isfinite(tmin[kmax]) || !std::isfinite(tmin[khalf])) {
    out.partial = true;
    out.partial_reason = "no orbit pairs at H-distance " + std::to_string(kmax);
  }
  out.qi_slope = growth_slope(tmin[kmax], tmin[khalf], kmax, khalf);
  out.qi_into_ts = std::isfinite(out.qi_slope) && out.qi_slope >= kGrowthSlope;
  return out;
}

RandomSubgroupReport random_subgroup_experiment(const ProjectionTable& t,
                                                const ConedGraph& ts, int k,
                                                int n, int trials,
                                                std::uint64_t seed,
                                                const StabilityConfig& config,
                                                unsigned threads) {
  RandomSubgroupReport out;
  out.k = k;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  const Group& g = t.index().group();
  if (g.graph().splits_as_infinite_product()) {
    out.refused = true;
    out.reason =
        "the group is a direct product of two infinite groups (the defining "
        "graph is a join of two subgraphs with infinite parabolics), so no "
        "infinite subgroup is stable";
    return out;
  }
  out.runs.resize(std::size_t(std::max(trials, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int trial; (trial = next++) < trials;) {
      auto engine = make_engine(seed, std::uint64_t(trial));
      RandomSubgroupTrial r;
      for (int i = 0; i < k; ++i) r.gens.push_back(random_word(g, n, engine));
      auto rep = stability_tritest(r.gens, t, ts, config);
      r.stable = rep.stable() && !rep.partial;
      r.agree = rep.agree();
      r.partial = rep.partial;
      out.runs[std::size_t(trial)] = std::move(r);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max(trials, 1))));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::size_t stable = 0;
  for (const auto& r : out.runs) {
    stable += r.stable;
    out.disagreements += !r.agree;
  }
  out.frequency = trials > 0 ? double(stable) / trials : 0;
  return out;
}

HierarchyPathReport hierarchy_path_checks(const Word& x, const Word& y,
                                          const ProjectionTable& t,
                                          double cutoff) {
  HierarchyPathReport out;
  out.cutoff = cutoff;
  const auto& idx = t.index();
  const Group& g = idx.group();
  std::vector<Word> path;
  append_path(g, path, x, y);
  out.length = int(path.size()) - 1;
  if (out.length <= 0) return out;

  auto backtrack = [&](VertexSet type, const std::vector<std::size_t>& nodes) {
    double worst = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i; j < nodes.size(); ++j)
        for (std::size_t k = j; k < nodes.size(); ++k)
          worst = std::max(worst, t.node_distance(type, nodes[i], nodes[j]) -
                                      t.node_distance(type, nodes[i], nodes[k]));
    return worst;
  };

  for (const auto& u : realized(t, path, false)) {
    DomainPathCheck c;
    c.domain = idx.name(u);
    std::vector<std::size_t> nodes;
    bool ok = true;
    for (const auto& p : path) {
      auto n = t.project(u, p);
      if (!n) {
        ok = false;
        break;
      }
      nodes.push_back(*n);
    }
    if (!ok) continue;
    c.d = t.node_distance(u.type, nodes.front(), nodes.back());
    c.backtrack = backtrack(u.type, nodes);
    out.max_backtrack = std::max(out.max_backtrack, c.backtrack);
    c.relevant = c.d > cutoff;
    if (c.relevant) {
      ++out.relevant;
      int n = int(nodes.size());
      int b = 0, e = n - 1;
      while (b + 1 < n && nodes[b + 1] == nodes.front()) ++b;
      while (e - 1 >= 0 && nodes[e - 1] == nodes.back()) --e;
      if (b > e) std::swap(b, e);
      c.active_begin = b;
      c.active_end = e;
      VertexSet st = g.graph().star(u.type);
      for (int i = b; i <= e; ++i) {
        Word z = g.between(u.key, path[i]);
        c.nu = std::max(c.nu, g.split_prefix(z, st).second.length());
      }
      out.nu = std::max(out.nu, c.nu);
    }
    out.domains.push_back(std::move(c));
  }

  std::vector<std::size_t> top;
  for (const auto& p : path) {
    auto i = idx.ball().find(p);
    if (!i) {
      out.top_certified = false;
      break;
    }
    top.push_back(*i);
  }
  if (out.top_certified) {
    VertexSet all = g.graph().all();
    out.top_backtrack = backtrack(all, top);
    out.top_diameter = t.diameter(all, top);
  }
  out.pass = out.top_certified;
  return out;
}

}  // namespace hhslab
