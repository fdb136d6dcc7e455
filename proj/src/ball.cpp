#include "hhslab/ball.hpp"

#include <algorithm>
#include <deque>

namespace hhslab {

CayleyBall CayleyBall::build(const Group& group, int radius,
                             std::size_t budget, VertexSet allowed) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  CayleyBall ball(group);
  ball.radius_ = radius;
  ball.allowed_ = allowed & group.graph().all();
  for (const auto& l : group.letters()) {
    if (has_vertex(ball.allowed_, l.vertex)) ball.letters_.push_back(l);
  }
  ball.elements_.push_back(group.identity());
  ball.index_.emplace(group.identity(), 0);

  std::size_t sphere_begin = 0;
  for (int k = 0; k < radius; ++k) {
    const std::size_t sphere_end = ball.elements_.size();
    std::vector<Word> next;
    for (std::size_t i = sphere_begin; i < sphere_end; ++i) {
      for (const auto& l : ball.letters_) {
        Word w = group.multiply(ball.elements_[i], l);
        if (w.length() == k + 1) next.push_back(std::move(w));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (ball.elements_.size() + next.size() > budget) {
      throw ResourceError("ball", ball.elements_.size() + next.size());
    }
    for (auto& w : next) {
      ball.index_.emplace(w, static_cast<Index>(ball.elements_.size()));
      ball.elements_.push_back(std::move(w));
    }
    sphere_begin = sphere_end;
    if (next.empty()) break;
  }

  const std::size_t nl = ball.letters_.size();
  ball.adjacency_.assign(ball.elements_.size() * nl, kOutside);
  for (std::size_t i = 0; i < ball.elements_.size(); ++i) {
    for (std::size_t l = 0; l < nl; ++l) {
      if (auto j = ball.find(group.multiply(ball.elements_[i], ball.letters_[l]))) {
        ball.adjacency_[i * nl + l] = static_cast<std::int32_t>(*j);
      }
    }
  }
  return ball;
}

std::optional<CayleyBall::Index> CayleyBall::find(const Word& w) const {
  if (w.length() > radius_) return std::nullopt;
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(radius_) + 1, 0);
  for (const auto& w : elements_) ++out[static_cast<std::size_t>(w.length())];
  return out;
}

std::optional<int> CayleyBall::certified_distance(std::size_t i,
                                                  std::size_t j) const {
  int d = group_.distance(elements_[i], elements_[j]);
  if (d > radius_) return std::nullopt;
  return d;
}

std::vector<int> CayleyBall::bfs(std::size_t source, int max_depth) const {
  std::vector<int> dist(elements_.size(), -1);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  const std::size_t nl = letters_.size();
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (std::size_t l = 0; l < nl; ++l) {
      auto v = adjacency_[u * nl + l];
      if (v != kOutside && dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[u] + 1;
        queue.push_back(static_cast<std::size_t>(v));
      }
    }
  }
  return dist;
}

}  // namespace hhslab
