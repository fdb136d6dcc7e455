#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhslab/ball.hpp"
#include "hhslab/metric.hpp"

namespace hhslab {

/// Ball edge tail → tail·v. For infinite-order v the edge is oriented along
/// v^{+1}; for involutions the tail is the endpoint of smaller index.
struct DualEdge {
  CayleyBall::Index tail = 0;
  CayleyBall::Index head = 0;
};

/// Hyperplane of the Davis/Salvetti complex, seen through its ball edges.
///
/// Keys: for an involution v the wall through (g, gv) is the coset g·W_st(v)
/// (which is exactly its carrier); for infinite-order v it is the coset
/// tail·W_lk(v) of tails, the carrier being tail·W_lk(v)·{1, v}.
struct Wall {
  int label = 0;
  ParabolicCoset key;
  std::vector<DualEdge> dual_edges;
  /// Ball vertices on dual edges, sorted.
  std::vector<CayleyBall::Index> carrier;
};

/// Type of the key coset for walls labelled v.
VertexSet wall_key_type(const DefiningGraph& g, int v);
/// Closed-form key of the wall dual to the edge (g, g·l).
ParabolicCoset wall_key(const Group& group, const Word& g, const Letter& l);

class WallSet {
 public:
  /// Union-find over square parallelism, certified against wall_key.
  /// Throws std::logic_error if the two disagree.
  explicit WallSet(const CayleyBall& ball);

  const std::vector<Wall>& walls() const { return walls_; }
  std::size_t size() const { return walls_.size(); }
  const Wall& operator[](std::size_t i) const { return walls_[i]; }

  /// Wall dual to element(i)—element(i)·letters()[l], or -1 outside the ball.
  std::int32_t wall_of(std::size_t i, std::size_t l) const {
    return edge_wall_[i * letters_ + l];
  }
  std::optional<std::size_t> find(int label, const Word& key_base) const;

  /// Walls crossed by the normal-form letter path from 1 to element(i).
  std::vector<std::size_t> crossed_by_path(const CayleyBall& ball,
                                           std::size_t i) const;

 private:
  std::vector<Wall> walls_;
  std::vector<std::int32_t> edge_wall_;
  std::size_t letters_ = 0;
};

/// Ball elements h with h·w = w, by the algebraic criterion
/// key.base⁻¹·h·key.base ∈ W_type.
std::vector<Word> wall_stabilizer(const Wall& w, const CayleyBall& ball);

/// Direct orbit check: h maps every dual edge of w that stays in the ball to
/// a dual edge of w, and some edge does stay in the ball.
bool stabilizes_dual_edges(const Word& h, std::size_t wall,
                           const WallSet& walls, const CayleyBall& ball);

struct ContactGraph {
  /// Sorted adjacency lists over wall indices.
  std::vector<std::vector<std::uint32_t>> adjacency;
  /// Pairs (i < j) of walls dual to two sides of a common square.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> crossings;

  std::size_t edge_count() const;
  MetricGraph metric() const;
};

/// Walls are adjacent when their carriers share a ball vertex.
ContactGraph contact_graph(const WallSet& walls, const CayleyBall& ball);

std::string wall_name(const Group& group, const Wall& w);
std::string to_dot(const ContactGraph& cg, const WallSet& walls,
                   const Group& group);

}  // namespace hhslab
