#include "hhslab/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hhslab {

DefiningGraph::DefiningGraph(std::vector<VertexSpec> vertices,
                             std::vector<std::pair<int, int>> edges)
    : vertices_(std::move(vertices)) {
  const int n = static_cast<int>(vertices_.size());
  if (n == 0) {
    throw ParseError(ParseError::Kind::NoGenerators, 0, "no generators");
  }
  if (n > kMaxVertices) {
    throw ParseError(ParseError::Kind::Syntax, 0,
                     "at most " + std::to_string(kMaxVertices) +
                         " vertices are supported");
  }
  adj_.assign(n, 0);
  all_ = n == kMaxVertices ? ~VertexSet{0} : (vertex_bit(n) - 1);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParseError(ParseError::Kind::UnknownVertex, 0,
                       "edge endpoint out of range");
    }
    if (u == v) {
      throw ParseError(ParseError::Kind::LoopEdge, 0,
                       "loop edge at " + vertices_[u].name);
    }
    if (has_vertex(adj_[u], v)) {
      throw ParseError(ParseError::Kind::DuplicateEdge, 0,
                       "duplicate edge " + vertices_[u].name + "-" +
                           vertices_[v].name);
    }
    adj_[u] |= vertex_bit(v);
    adj_[v] |= vertex_bit(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
}

std::optional<int> DefiningGraph::find(std::string_view name) const {
  for (int v = 0; v < size(); ++v) {
    if (vertices_[v].name == name) return v;
  }
  return std::nullopt;
}

VertexSet DefiningGraph::link(VertexSet a) const {
  if (a == 0) return all_;
  VertexSet out = all_;
  for (int v = 0; v < size(); ++v) {
    if (has_vertex(a, v)) out &= adj_[v];
  }
  return out;
}

bool DefiningGraph::is_clique(VertexSet a) const {
  for (int v = 0; v < size(); ++v) {
    if (has_vertex(a, v) && !is_subset(a & ~vertex_bit(v), adj_[v])) {
      return false;
    }
  }
  return true;
}

bool DefiningGraph::finite_parabolic(VertexSet a) const {
  for (int v = 0; v < size(); ++v) {
    if (has_vertex(a, v) && !involution(v)) return false;
  }
  return is_clique(a);
}

bool DefiningGraph::splits_as_infinite_product() const {
  // Join factors are the connected components of the complement graph.
  std::vector<int> comp(size(), -1);
  int components = 0;
  for (int s = 0; s < size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = components;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < size(); ++v) {
        if (v != u && !adjacent(u, v) && comp[v] < 0) {
          comp[v] = components;
          stack.push_back(v);
        }
      }
    }
    ++components;
  }
  int infinite = 0;
  for (int c = 0; c < components; ++c) {
    VertexSet part = 0;
    for (int v = 0; v < size(); ++v) {
      if (comp[v] == c) part |= vertex_bit(v);
    }
    if (!finite_parabolic(part)) ++infinite;
  }
  return infinite >= 2;
}

bool DefiningGraph::single_letter_names() const {
  return std::all_of(vertices_.begin(), vertices_.end(),
                     [](const VertexSpec& s) { return s.name.size() == 1; });
}

std::string DefiningGraph::format_set(VertexSet a) const {
  std::string out = "{";
  bool first = true;
  for (int v = 0; v < size(); ++v) {
    if (!has_vertex(a, v)) continue;
    if (!first) out += ",";
    out += vertices_[v].name;
    first = false;
  }
  return out + "}";
}

namespace {

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
  });
}

VertexOrder parse_order(std::string_view tok, int line) {
  if (tok == "2") return VertexOrder::Involution;
  if (tok == "inf" || tok == "0") return VertexOrder::Infinite;
  throw ParseError(ParseError::Kind::BadOrder, line,
                   "bad order token '" + std::string(tok) +
                       "' (expected 2 or inf)");
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int lookup(const std::vector<VertexSpec>& vs, std::string_view name,
           int line) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].name == name) return static_cast<int>(i);
  }
  throw ParseError(ParseError::Kind::UnknownVertex, line,
                   "unknown vertex '" + std::string(name) + "' in edge");
}

// Re-raises constructor errors with the line where the offending item sits.
DefiningGraph build(std::vector<VertexSpec> vs,
                    std::vector<std::pair<int, int>> es,
                    const std::vector<int>& edge_lines, int vertex_line) {
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < es.size(); ++i) {
    auto [u, v] = es[i];
    if (u == v) {
      throw ParseError(ParseError::Kind::LoopEdge, edge_lines[i],
                       "loop edge at " + vs[u].name);
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw ParseError(ParseError::Kind::DuplicateEdge, edge_lines[i],
                       "duplicate edge " + vs[u].name + "-" + vs[v].name);
    }
  }
  if (vs.empty()) {
    throw ParseError(ParseError::Kind::NoGenerators, vertex_line,
                     "no generators");
  }
  return DefiningGraph(std::move(vs), std::move(es));
}

}  // namespace

DefiningGraph parse_ggp(std::string_view text) {
  std::vector<VertexSpec> vs;
  std::vector<std::pair<int, int>> es;
  std::vector<int> edge_lines;
  bool have_vertices = false;
  int vertex_line = 0;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError(ParseError::Kind::Syntax, line_no,
                       "expected 'vertices:' or 'edges:'");
    }
    std::string key = line.substr(0, colon);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
      key.pop_back();
    }
    auto items = split_ws(std::string_view(line).substr(colon + 1));
    if (key == "vertices") {
      if (have_vertices) {
        throw ParseError(ParseError::Kind::Syntax, line_no,
                         "second 'vertices:' line");
      }
      have_vertices = true;
      vertex_line = line_no;
      for (const auto& item : items) {
        auto sep = item.rfind(':');
        if (sep == std::string::npos) {
          throw ParseError(ParseError::Kind::Syntax, line_no,
                           "vertex '" + item + "' lacks ':order'");
        }
        std::string name = item.substr(0, sep);
        if (!valid_name(name)) {
          throw ParseError(ParseError::Kind::Syntax, line_no,
                           "invalid vertex name '" + name + "'");
        }
        auto order = parse_order(std::string_view(item).substr(sep + 1),
                                 line_no);
        for (const auto& prior : vs) {
          if (prior.name == name) {
            throw ParseError(ParseError::Kind::DuplicateVertex, line_no,
                             "duplicate vertex '" + name + "'");
          }
        }
        vs.push_back({name, order});
      }
    } else if (key == "edges") {
      if (!have_vertices) {
        throw ParseError(ParseError::Kind::Syntax, line_no,
                         "'edges:' before 'vertices:'");
      }
      for (const auto& item : items) {
        auto dash = item.find('-');
        if (dash == std::string::npos) {
          throw ParseError(ParseError::Kind::Syntax, line_no,
                           "edge '" + item + "' is not of the form u-v");
        }
        int u = lookup(vs, std::string_view(item).substr(0, dash), line_no);
        int v = lookup(vs, std::string_view(item).substr(dash + 1), line_no);
        es.emplace_back(u, v);
        edge_lines.push_back(line_no);
      }
    } else {
      throw ParseError(ParseError::Kind::Syntax, line_no,
                       "unknown section '" + key + "'");
    }
  }
  if (!have_vertices || vs.empty()) {
    throw ParseError(ParseError::Kind::NoGenerators, vertex_line,
                     "no generators");
  }
  return build(std::move(vs), std::move(es), edge_lines, vertex_line);
}

DefiningGraph parse_graph_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Kind::Syntax, 0, e.what());
  }
  std::vector<VertexSpec> vs;
  std::vector<std::pair<int, int>> es;
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw ParseError(ParseError::Kind::NoGenerators, 0, "no generators");
  }
  for (const auto& item : doc["vertices"]) {
    std::string name = item.value("name", "");
    if (!valid_name(name)) {
      throw ParseError(ParseError::Kind::Syntax, 0,
                       "invalid vertex name '" + name + "'");
    }
    const auto& ord = item.contains("order") ? item["order"] : nlohmann::json();
    std::string tok = ord.is_string() ? ord.get<std::string>() : ord.dump();
    auto order = parse_order(tok, 0);
    for (const auto& prior : vs) {
      if (prior.name == name) {
        throw ParseError(ParseError::Kind::DuplicateVertex, 0,
                         "duplicate vertex '" + name + "'");
      }
    }
    vs.push_back({name, order});
  }
  std::vector<int> lines;
  if (doc.contains("edges")) {
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) {
        throw ParseError(ParseError::Kind::Syntax, 0, "edge must be a pair");
      }
      es.emplace_back(lookup(vs, e[0].get<std::string>(), 0),
                      lookup(vs, e[1].get<std::string>(), 0));
      lines.push_back(0);
    }
  }
  return build(std::move(vs), std::move(es), lines, 0);
}

DefiningGraph parse_graph(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    return parse_graph_json(text);
  }
  return parse_ggp(text);
}

DefiningGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string to_ggp(const DefiningGraph& g) {
  std::string out = "vertices:";
  for (const auto& v : g.vertices()) {
    out += " " + v.name + ":" +
           (v.order == VertexOrder::Involution ? "2" : "inf");
  }
  out += "\nedges:";
  for (auto [u, v] : g.edges()) out += " " + g.name(u) + "-" + g.name(v);
  return out + "\n";
}

}  // namespace hhslab
