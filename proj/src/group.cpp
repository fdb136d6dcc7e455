#include "hhslab/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <queue>
#include <stdexcept>

namespace hhslab {

Word::Word(std::vector<Syllable> s) : syl_(std::move(s)) {
  for (const auto& x : syl_) length_ += std::abs(x.exponent);
}

std::size_t Word::hash() const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& s : syl_) {
    std::size_t x = (static_cast<std::size_t>(s.vertex) << 32) ^
                    static_cast<std::uint32_t>(s.exponent);
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Group::Group(DefiningGraph graph) : graph_(std::move(graph)) {
  for (int v = 0; v < graph_.size(); ++v) {
    letters_.push_back({v, 1});
    if (!graph_.involution(v)) letters_.push_back({v, -1});
  }
}

int Group::normalize_exponent(int vertex, int exponent) const {
  if (graph_.involution(vertex)) return exponent & 1;
  return exponent;
}

Word Group::generator(int v, int exponent) const {
  if (v < 0 || v >= rank()) throw std::out_of_range("generator index");
  exponent = normalize_exponent(v, exponent);
  if (exponent == 0) return Word();
  return Word({{v, exponent}});
}

// Appends v^e to a reduced sequence, merging with the last syllable on v that
// can be shuffled to the end. The result stays reduced.
void Group::append(std::vector<Syllable>& reduced, int vertex,
                   int exponent) const {
  exponent = normalize_exponent(vertex, exponent);
  if (exponent == 0) return;
  for (std::size_t i = reduced.size(); i-- > 0;) {
    auto& s = reduced[i];
    if (s.vertex == vertex) {
      int merged = normalize_exponent(vertex, s.exponent + exponent);
      if (merged == 0) {
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        s.exponent = merged;
      }
      return;
    }
    if (!commute(s.vertex, vertex)) break;
  }
  reduced.push_back({vertex, exponent});
}

Word Group::canonical(std::vector<Syllable> reduced) const {
  const std::size_t n = reduced.size();
  if (n < 2) return Word(std::move(reduced));
  // Lexicographically least topological order of the "must precede" relation
  // (same vertex or non-commuting), found by repeated minimum selection.
  thread_local std::vector<int> indegree;
  thread_local std::vector<char> done;
  indegree.assign(n, 0);
  done.assign(n, 0);
  auto precedes = [&](std::size_t i, std::size_t j) {
    int u = reduced[i].vertex, v = reduced[j].vertex;
    return u == v || !commute(u, v);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (precedes(i, j)) ++indegree[j];
  std::vector<Syllable> result;
  result.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || indegree[i] != 0) continue;
      if (best == n || reduced[i].vertex < reduced[best].vertex) best = i;
    }
    done[best] = 1;
    result.push_back(reduced[best]);
    for (std::size_t j = best + 1; j < n; ++j)
      if (!done[j] && precedes(best, j)) --indegree[j];
  }
  return Word(std::move(result));
}

int Group::distance(std::span<const Syllable> a,
                    std::span<const Syllable> b) const {
  // The reversed inverse of a reduced word is reduced; the length of a
  // reduced word does not depend on its shuffle, so no canonical form.
  thread_local std::vector<Syllable> acc;
  acc.clear();
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    acc.push_back({it->vertex, normalize_exponent(it->vertex, -it->exponent)});
  for (const auto& s : b) append(acc, s.vertex, s.exponent);
  int len = 0;
  for (const auto& s : acc) len += std::abs(s.exponent);
  return len;
}

Word Group::reduce(std::span<const Syllable> letters) const {
  std::vector<Syllable> acc;
  acc.reserve(letters.size());
  for (const auto& s : letters) append(acc, s.vertex, s.exponent);
  return canonical(std::move(acc));
}

Word Group::multiply(const Word& u, const Word& v) const {
  if (v.is_identity()) return u;
  if (u.is_identity()) return v;
  std::vector<Syllable> acc = u.syllables();
  for (const auto& s : v.syllables()) append(acc, s.vertex, s.exponent);
  return canonical(std::move(acc));
}

Word Group::multiply(const Word& u, const Letter& l) const {
  std::vector<Syllable> acc = u.syllables();
  append(acc, l.vertex, l.exponent);
  return canonical(std::move(acc));
}

Word Group::inverse(const Word& w) const {
  std::vector<Syllable> rev(w.syllables().rbegin(), w.syllables().rend());
  for (auto& s : rev) s.exponent = normalize_exponent(s.vertex, -s.exponent);
  return canonical(std::move(rev));
}

Word Group::between(const Word& a, const Word& b) const {
  std::vector<Syllable> acc;
  acc.reserve(a.syllable_count() + b.syllable_count());
  const auto& sa = a.syllables();
  for (auto it = sa.rbegin(); it != sa.rend(); ++it)
    acc.push_back({it->vertex, normalize_exponent(it->vertex, -it->exponent)});
  for (const auto& s : b.syllables()) append(acc, s.vertex, s.exponent);
  return canonical(std::move(acc));
}

Word Group::power(const Word& w, int n) const {
  Word base = n < 0 ? inverse(w) : w;
  Word acc;
  for (int k = 0; k < std::abs(n); ++k) acc = multiply(acc, base);
  return acc;
}

Word Group::parse(std::string_view text) const {
  std::vector<Syllable> letters;
  auto trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) {
    trimmed.remove_prefix(1);
  }
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.remove_suffix(1);
  }
  if (trimmed.empty() || trimmed == "1") return Word();
  auto push = [&](std::string_view tok) {
    int exponent = 1;
    while (!tok.empty() && tok.back() == '\'') {
      exponent = -exponent;
      tok.remove_suffix(1);
    }
    auto v = graph_.find(tok);
    if (!v) {
      throw std::invalid_argument("unknown generator '" + std::string(tok) +
                                  "'");
    }
    letters.push_back({*v, exponent});
  };
  if (trimmed.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= trimmed.size()) {
      auto dot = trimmed.find('.', start);
      auto tok = trimmed.substr(start, dot == std::string_view::npos
                                           ? std::string_view::npos
                                           : dot - start);
      if (tok.empty()) throw std::invalid_argument("empty generator token");
      push(tok);
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  } else {
    for (std::size_t i = 0; i < trimmed.size();) {
      std::size_t j = i + 1;
      while (j < trimmed.size() && trimmed[j] == '\'') ++j;
      push(trimmed.substr(i, j - i));
      i = j;
    }
  }
  return reduce(letters);
}

std::string Group::format(const Word& w) const {
  if (w.is_identity()) return "1";
  const bool compact = graph_.single_letter_names();
  std::string out;
  for (const auto& l : spell(w)) {
    if (!compact && !out.empty()) out += '.';
    out += graph_.name(l.vertex);
    if (l.exponent < 0) out += '\'';
  }
  return out;
}

std::pair<Word, Word> Group::split_prefix(const Word& w, VertexSet a) const {
  std::vector<Syllable> prefix;
  std::vector<Syllable> rest;
  VertexSet blocked = 0;
  for (const auto& s : w.syllables()) {
    if (has_vertex(a, s.vertex) &&
        is_subset(blocked, graph_.link(s.vertex))) {
      prefix.push_back(s);
    } else {
      rest.push_back(s);
      blocked |= vertex_bit(s.vertex);
    }
  }
  return {canonical(std::move(prefix)), canonical(std::move(rest))};
}

std::pair<Word, Word> Group::split_suffix(const Word& w, VertexSet a) const {
  std::vector<Syllable> suffix;
  std::vector<Syllable> rest;
  VertexSet blocked = 0;
  const auto& syl = w.syllables();
  for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
    if (has_vertex(a, it->vertex) &&
        is_subset(blocked, graph_.link(it->vertex))) {
      suffix.push_back(*it);
    } else {
      rest.push_back(*it);
      blocked |= vertex_bit(it->vertex);
    }
  }
  std::reverse(suffix.begin(), suffix.end());
  std::reverse(rest.begin(), rest.end());
  return {canonical(std::move(rest)), canonical(std::move(suffix))};
}

bool Group::in_parabolic(const Word& w, VertexSet a) const {
  return std::all_of(w.syllables().begin(), w.syllables().end(),
                     [a](const Syllable& s) { return has_vertex(a, s.vertex); });
}

Word Group::restrict_to(const Word& w, VertexSet a) const {
  std::vector<Syllable> kept;
  for (const auto& s : w.syllables()) {
    if (has_vertex(a, s.vertex)) kept.push_back(s);
  }
  return canonical(std::move(kept));
}

Word Group::gate(const Word& x, const ParabolicCoset& c) const {
  auto [p, rest] = split_prefix(between(c.base, x), c.type);
  return multiply(c.base, p);
}

std::optional<Word> Group::coset_intersection(const Word& g1, VertexSet a1,
                                              const Word& g2,
                                              VertexSet a2) const {
  // g1^{-1} g2 = P · w · Q with P ∈ W_A1, Q ∈ W_A2; the cosets meet exactly
  // when the minimal double-coset representative w is trivial.
  Word w = between(g1, g2);
  Word left;
  Word right;
  for (;;) {
    auto [p, w1] = split_prefix(w, a1);
    auto [w2, q] = split_suffix(w1, a2);
    left = multiply(left, p);
    right = multiply(q, right);
    w = std::move(w2);
    if (p.is_identity() && q.is_identity()) break;
  }
  if (!w.is_identity()) return std::nullopt;
  Word meet = multiply(g1, left);
  return min_coset_rep(meet, a1 & a2);
}

std::vector<Letter> Group::spell(const Word& w) const {
  std::vector<Letter> out;
  out.reserve(static_cast<std::size_t>(w.length()));
  for (const auto& s : w.syllables()) {
    int step = s.exponent > 0 ? 1 : -1;
    for (int k = 0; k < std::abs(s.exponent); ++k) {
      out.push_back({s.vertex, step});
    }
  }
  return out;
}

std::vector<Word> Group::letter_path(const Word& w) const {
  std::vector<Word> path{Word()};
  for (const auto& l : spell(w)) path.push_back(multiply(path.back(), l));
  return path;
}

}  // namespace hhslab
