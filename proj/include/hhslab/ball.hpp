#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hhslab/group.hpp"

namespace hhslab {

class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& stage, std::size_t reached)
      : std::runtime_error(stage + ": budget exceeded after " +
                           std::to_string(reached) + " items"),
        reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

inline constexpr std::size_t kDefaultBallBudget = 2'000'000;

/// All elements of length ≤ radius, indexed in ShortLex order (identity is
/// index 0), with the right-multiplication edges g — g·l that stay inside.
class CayleyBall {
 public:
  using Index = std::uint32_t;
  static constexpr std::int32_t kOutside = -1;

  /// `allowed` restricts the generators, giving the ball of W_allowed.
  static CayleyBall build(const Group& group, int radius,
                          std::size_t budget = kDefaultBallBudget,
                          VertexSet allowed = ~VertexSet{0});

  const Group& group() const { return group_; }
  int radius() const { return radius_; }
  VertexSet generators() const { return allowed_; }
  std::size_t size() const { return elements_.size(); }

  const Word& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Word>& elements() const { return elements_; }
  std::optional<Index> find(const Word& w) const;
  bool contains(const Word& w) const { return find(w).has_value(); }

  /// Letters used for edges (a subset of group().letters()).
  const std::vector<Letter>& letters() const { return letters_; }
  /// Index of element(i)·letters()[l], or kOutside.
  std::int32_t neighbor(std::size_t i, std::size_t l) const {
    return adjacency_[i * letters_.size() + l];
  }

  /// |sphere(k)| for k = 0..radius.
  std::vector<std::size_t> sphere_sizes() const;

  /// d(g,h) = |g^{-1}h|, reported only when a geodesic of that length is
  /// certified to fit (|g^{-1}h| ≤ radius).
  std::optional<int> certified_distance(std::size_t i, std::size_t j) const;

  /// Unit-weight BFS distances inside the ball graph (-1 if unreachable).
  std::vector<int> bfs(std::size_t source, int max_depth = -1) const;

 private:
  CayleyBall(Group group) : group_(std::move(group)) {}

  Group group_;
  int radius_ = 0;
  VertexSet allowed_ = 0;
  std::vector<Letter> letters_;
  std::vector<Word> elements_;
  std::unordered_map<Word, Index, WordHash> index_;
  std::vector<std::int32_t> adjacency_;
};

}  // namespace hhslab
