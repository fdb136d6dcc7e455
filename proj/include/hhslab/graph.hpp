#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hhslab {

/// Subset of the defining graph's vertices, one bit per vertex.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

constexpr VertexSet vertex_bit(int v) { return VertexSet{1} << v; }
constexpr bool has_vertex(VertexSet s, int v) { return (s >> v) & 1U; }
constexpr bool is_subset(VertexSet a, VertexSet b) { return (a & ~b) == 0; }
inline int set_size(VertexSet s) { return std::popcount(s); }

/// Vertex group order. Only involutions (right-angled Coxeter) and infinite
/// cyclic groups (right-angled Artin) are supported.
enum class VertexOrder : std::uint8_t { Involution = 2, Infinite = 0 };

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    NoGenerators,
    DuplicateVertex,
    UnknownVertex,
    LoopEdge,
    DuplicateEdge,
    BadOrder,
    Syntax,
  };

  ParseError(Kind kind, int line, const std::string& what)
      : std::runtime_error(format(line, what)), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  /// 1-based source line, 0 when the input has no line structure.
  int line() const noexcept { return line_; }

 private:
  static std::string format(int line, const std::string& what) {
    return line > 0 ? "line " + std::to_string(line) + ": " + what : what;
  }

  Kind kind_;
  int line_;
};

struct VertexSpec {
  std::string name;
  VertexOrder order = VertexOrder::Involution;
};

/// Finite simplicial graph presenting a graph product of cyclic groups.
/// Adjacent vertices commute.
class DefiningGraph {
 public:
  DefiningGraph() = default;
  DefiningGraph(std::vector<VertexSpec> vertices,
                std::vector<std::pair<int, int>> edges);

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::string& name(int v) const { return vertices_[v].name; }
  VertexOrder order(int v) const { return vertices_[v].order; }
  bool involution(int v) const { return order(v) == VertexOrder::Involution; }
  std::optional<int> find(std::string_view name) const;

  VertexSet all() const { return all_; }
  bool adjacent(int u, int v) const { return has_vertex(adj_[u], v); }

  VertexSet link(int v) const { return adj_[v]; }
  VertexSet star(int v) const { return adj_[v] | vertex_bit(v); }
  /// Vertices adjacent to every vertex of `a` (and hence outside `a`).
  VertexSet link(VertexSet a) const;
  VertexSet star(VertexSet a) const { return a | link(a); }

  bool is_clique(VertexSet a) const;
  /// W_A is finite exactly when A is a clique of involutions.
  bool finite_parabolic(VertexSet a) const;
  /// W_Γ splits as a direct product of two infinite parabolic subgroups
  /// (Γ is a join in which at least two join factors are infinite).
  bool splits_as_infinite_product() const;

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<VertexSpec>& vertices() const { return vertices_; }

  /// Every name is a single character, so words can be written unseparated.
  bool single_letter_names() const;
  std::string format_set(VertexSet a) const;

 private:
  std::vector<VertexSpec> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<VertexSet> adj_;
  VertexSet all_ = 0;
};

/// Parses the line-based `.ggp` format, or the JSON mirror when the text
/// starts with `{`.
DefiningGraph parse_graph(std::string_view text);
DefiningGraph parse_ggp(std::string_view text);
DefiningGraph parse_graph_json(std::string_view text);
DefiningGraph load_graph(const std::filesystem::path& path);

std::string to_ggp(const DefiningGraph& g);

}  // namespace hhslab
