#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhslab/ball.hpp"

namespace hhslab {

/// Intersection-closure of {st(v), lk(v), {v}} ∪ {V}, empty set dropped.
/// Ordered V first, then by decreasing size, then by bitmask.
std::vector<VertexSet> factor_family(const DefiningGraph& g);

/// Longest strictly increasing chain in the family (counted in members).
int max_nesting_chain(const std::vector<VertexSet>& family);

/// Index U of the structure: the parallelism class of g·W_A, keyed by the
/// minimal representative of g·W_st(A).
struct Domain {
  VertexSet type = 0;
  Word key;

  int level() const { return set_size(type); }
  friend bool operator==(const Domain&, const Domain&) = default;
};

enum class Relation {
  Equal,
  Nested,      // u ⊊ v
  Contains,    // v ⊊ u
  Orthogonal,
  Transverse,
  Undecidable,  // cosets meet, but only outside the ball
};

std::string_view to_string(Relation r);

struct RelationVerdict {
  Relation relation = Relation::Transverse;
  /// Shortest common point of the two st-cosets, when they meet.
  std::optional<Word> witness;
};

struct Boundedness {
  bool f_bounded = false;
  bool e_bounded = false;
  /// Ball-growth saturation agreed with the clique criterion (only run when
  /// the relevant vertex set has at most 4 vertices).
  bool growth_checked = false;
  bool growth_agrees = true;
};

/// F_U bounded iff W_A is finite; E_U bounded iff W_lk(A) is finite.
Boundedness classify_boundedness(const Group& group, VertexSet a);

inline constexpr std::size_t kDefaultDomainBudget = 1'000'000;

class StructureIndex {
 public:
  StructureIndex(std::shared_ptr<const CayleyBall> ball,
                 std::vector<VertexSet> family,
                 std::size_t budget = kDefaultDomainBudget);

  const CayleyBall& ball() const { return *ball_; }
  const std::shared_ptr<const CayleyBall>& ball_ptr() const { return ball_; }
  const Group& group() const { return ball_->group(); }
  const std::vector<VertexSet>& family() const { return family_; }
  std::optional<std::size_t> type_index(VertexSet a) const;

  const std::vector<Domain>& domains() const { return domains_; }
  std::size_t size() const { return domains_.size(); }
  const Domain& operator[](std::size_t i) const { return domains_[i]; }
  /// The ⊑-maximal domain S = (V, 1).
  std::size_t top() const { return 0; }
  std::optional<std::size_t> find(const Domain& d) const;

  /// Domain of family member `type` realized at ball element `elem`.
  std::size_t at(std::size_t type, std::size_t elem) const {
    return at_[type * ball_->size() + elem];
  }
  /// Domain of type A through g (need not lie in the index).
  Domain domain_of(VertexSet a, const Word& g) const;

  RelationVerdict relate(const Domain& u, const Domain& v) const;
  Relation relation(std::size_t u, std::size_t v) const {
    return relate(domains_[u], domains_[v]).relation;
  }
  bool nested_or_equal(std::size_t u, std::size_t v) const {
    auto r = relation(u, v);
    return r == Relation::Nested || r == Relation::Equal;
  }

  std::string name(const Domain& d) const;
  std::string name(std::size_t i) const { return name(domains_[i]); }

 private:
  std::shared_ptr<const CayleyBall> ball_;
  std::vector<VertexSet> family_;
  std::vector<Domain> domains_;
  std::vector<std::size_t> at_;
  std::vector<std::size_t> type_of_;  // family index per domain
};

/// Type-level membership in 𝔖^M: some B ⊇ A in the family has F_B
/// unbounded and an orthogonal C ⊆ lk(B) in the family with F_C unbounded.
bool in_sm_type(const Group& group, const std::vector<VertexSet>& family,
                VertexSet a);

struct ContainerCheck {
  std::size_t checked = 0;
  std::size_t members_checked = 0;
  std::vector<std::string> failures;
  bool clean() const { return failures.empty(); }
};

struct Restructuring {
  std::vector<std::size_t> sm;       // 𝔖^M
  std::vector<std::size_t> t;        // 𝔗, S first
  std::vector<std::size_t> removed;  // 𝔚
  std::vector<VertexSet> sm_types;
  std::vector<VertexSet> t_types;
  /// Every 𝔖^M member verified through explicit witnesses V ⊒ U, W ⊥ V.
  bool sm_witnessed = true;
  bool sm_nesting_closed = true;
  ContainerCheck containers;

  bool in_t(std::size_t d) const;
  bool in_sm(std::size_t d) const;
};

Restructuring restructure(const StructureIndex& idx);

/// Clean-container verification on every family pair A ⊊ B keyed at each
/// ball point in `points` (indices into the ball).
ContainerCheck check_clean_containers(const StructureIndex& idx,
                                      const std::vector<std::size_t>& points);

/// Largest pairwise-orthogonal family, by Bron–Kerbosch over the
/// orthogonality graph of domains realized at common ball points, optionally
/// restricted to the domains accepted by `keep`.
std::size_t max_orthogonal_family(
    const StructureIndex& idx, std::vector<std::size_t>* witness = nullptr,
    const std::function<bool(std::size_t)>& keep = {});

}  // namespace hhslab
