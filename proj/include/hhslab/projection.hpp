#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhslab/coned.hpp"
#include "hhslab/structure.hpp"

namespace hhslab {

enum class StructureKind {
  Original,           // 𝔖, top space ĈS
  UnboundedProducts,  // 𝔗, top space 𝒯_S
};

std::string to_string(StructureKind k);

/// Projections π_U and relative projections ρ for one structure over an
/// index. Factor spaces and BFS results are built lazily and cached, so a
/// table is not safe to share between threads.
class ProjectionTable {
 public:
  ProjectionTable(const StructureIndex& idx, const Restructuring& r,
                  StructureKind kind);

  const StructureIndex& index() const { return *idx_; }
  const Restructuring& restructuring() const { return *r_; }
  StructureKind kind() const { return kind_; }

  /// Domains of the structure (indices into the index), S first.
  const std::vector<std::size_t>& members() const { return members_; }
  bool contains(std::size_t d) const;
  /// Family types present in the structure.
  const std::vector<VertexSet>& types() const { return types_; }

  const ConedGraph& top_space() const { return *top_; }
  /// ĈU for domains of type A (the top space for A = V).
  const ConedGraph& space_for_type(VertexSet a) const;
  const ConedGraph& space(std::size_t domain) const {
    return space_for_type(idx_->operator[](domain).type);
  }

  /// π_U(x): for U = (A, k) the W_A-part of the gate of x on k·W_st(A),
  /// as a base node of ĈU. nullopt when it falls outside the factor ball.
  std::optional<std::size_t> project(const Domain& u, const Word& x) const;
  std::optional<std::size_t> project(std::size_t domain, const Word& x) const {
    return project(idx_->operator[](domain), x);
  }

  double node_distance(VertexSet type, std::size_t a, std::size_t b) const;
  double node_distance(const Domain& u, std::size_t a, std::size_t b) const {
    return node_distance(u.type, a, b);
  }
  /// d_U(x, y); nullopt if a projection falls outside the factor ball.
  std::optional<double> distance(const Domain& u, const Word& x,
                                 const Word& y) const;
  std::optional<double> distance(std::size_t d, const Word& x,
                                 const Word& y) const {
    return distance(idx_->operator[](d), x, y);
  }

  /// Diameter of a node set in ĈU (exact up to 256 nodes, else a lower
  /// bound from the first 256).
  double diameter(VertexSet type, const std::vector<std::size_t>& nodes) const;
  /// min distance from a node to a set.
  double set_distance(VertexSet type, std::size_t node,
                      const std::vector<std::size_t>& set) const;

  /// ρ^U_V = π_V(P_U ∩ ball). Requires U ⊊ V or U ⋔ V; throws
  /// std::invalid_argument otherwise.
  std::vector<std::size_t> rho(const Domain& u, const Domain& v) const;

  /// Ball indices x with the domain realized at x (P_U ∩ ball).
  const std::vector<std::size_t>& product_region(std::size_t domain) const;

  /// Radius used for the factor balls.
  int factor_radius() const { return factor_radius_; }

 private:
  const std::vector<int>& bfs(VertexSet type, std::size_t node) const;

  const StructureIndex* idx_;
  const Restructuring* r_;
  StructureKind kind_;
  std::vector<std::size_t> members_;
  std::vector<VertexSet> types_;
  std::unique_ptr<ConedGraph> top_;
  int factor_radius_;
  // Lazy caches below are guarded so one table can serve several threads.
  std::unique_ptr<std::recursive_mutex> mu_ = std::make_unique<std::recursive_mutex>();
  mutable std::map<VertexSet, std::unique_ptr<ConedGraph>> factors_;
  mutable std::map<std::pair<VertexSet, std::size_t>, std::vector<int>> bfs_;
  mutable std::vector<std::vector<std::size_t>> regions_;
};

struct LipschitzAudit {
  double k = 0;  // max d_U(x,y) / d(x,y)
  std::size_t pairs = 0;
  std::size_t skipped = 0;
};

/// All pairs in the radius-`radius` sub-ball, every structure domain
/// realized at either point.
LipschitzAudit lipschitz_audit(const ProjectionTable& t, int radius);

/// Recorded projection constant ξ′: max diameter over sampled ρ sets (and of
/// π images, which are single nodes).
struct XiPrime {
  double value = 0;
  std::size_t rho_sets = 0;
};
XiPrime audit_xi_prime(const ProjectionTable& t, std::size_t samples,
                       std::uint64_t seed);

}  // namespace hhslab
