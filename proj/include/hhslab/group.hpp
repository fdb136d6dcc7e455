#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhslab/graph.hpp"

namespace hhslab {

struct Syllable {
  int vertex = 0;
  int exponent = 1;

  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Group element in canonical normal form: a fully reduced syllable sequence
/// that is ShortLex-least among its shuffle class. Instances are produced by
/// Group, which maintains the invariant; equality of Words is equality of
/// group elements.
class Word {
 public:
  Word() = default;

  const std::vector<Syllable>& syllables() const { return syl_; }
  std::size_t syllable_count() const { return syl_.size(); }
  /// Word length with respect to the standard generators.
  int length() const { return length_; }
  bool is_identity() const { return syl_.empty(); }

  friend bool operator==(const Word& a, const Word& b) {
    return a.syl_ == b.syl_;
  }
  /// ShortLex: length first, then syllable sequence.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return a.syl_ <=> b.syl_;
  }

  std::size_t hash() const noexcept;

 private:
  friend class Group;
  explicit Word(std::vector<Syllable> s);

  std::vector<Syllable> syl_;
  int length_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept { return w.hash(); }
};

/// Coset base·W_type with `base` the unique minimal-length representative.
struct ParabolicCoset {
  Word base;
  VertexSet type = 0;

  friend bool operator==(const ParabolicCoset&, const ParabolicCoset&) =
      default;
};

/// A single generator step v^{±1}.
struct Letter {
  int vertex = 0;
  int exponent = 1;
};

/// Graph product of Z/2 and Z vertex groups over a DefiningGraph: the word
/// problem, normal forms, and parabolic coset geometry.
class Group {
 public:
  explicit Group(DefiningGraph graph);

  const DefiningGraph& graph() const { return graph_; }
  int rank() const { return graph_.size(); }

  /// Symmetric generating set: v for involutions, v and v' otherwise.
  const std::vector<Letter>& letters() const { return letters_; }

  Word identity() const { return Word(); }
  Word generator(int v, int exponent = 1) const;
  Word letter(const Letter& l) const { return generator(l.vertex, l.exponent); }

  Word multiply(const Word& u, const Word& v) const;
  Word multiply(const Word& u, const Letter& l) const;
  Word inverse(const Word& w) const;
  /// a⁻¹·b with a single canonicalisation.
  Word between(const Word& a, const Word& b) const;
  Word power(const Word& w, int n) const;
  int distance(const Word& a, const Word& b) const {
    return distance(a.syllables(), b.syllables());
  }
  /// Distance between elements given as reduced (not necessarily
  /// canonical) syllable sequences.
  int distance(std::span<const Syllable> a, std::span<const Syllable> b) const;
  /// Right-multiplies a reduced syllable sequence by a letter, keeping it
  /// reduced but not canonical.
  void extend(std::vector<Syllable>& reduced, const Letter& l) const {
    append(reduced, l.vertex, l.exponent);
  }

  /// Reduces and canonicalises an arbitrary syllable sequence.
  Word reduce(std::span<const Syllable> letters) const;

  /// Parses `acd`, `a.c'.d`, `x'x'`; `1` or an empty string is the identity.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  bool commute(int u, int v) const { return graph_.adjacent(u, v); }

  /// Splits w = p·rest with p the maximal prefix lying in W_A.
  std::pair<Word, Word> split_prefix(const Word& w, VertexSet a) const;
  /// Splits w = rest·s with s the maximal suffix lying in W_A.
  std::pair<Word, Word> split_suffix(const Word& w, VertexSet a) const;

  /// Minimal-length element of g·W_A.
  Word min_coset_rep(const Word& g, VertexSet a) const {
    return split_suffix(g, a).first;
  }
  ParabolicCoset coset(const Word& g, VertexSet a) const {
    return {min_coset_rep(g, a), a};
  }
  bool in_parabolic(const Word& w, VertexSet a) const;
  bool in_coset(const Word& x, const ParabolicCoset& c) const {
    return in_parabolic(between(c.base, x), c.type);
  }

  /// Restriction to the syllables on vertices of A. For w in W_{A ∪ B} with
  /// B ⊆ lk(A) this is the W_A factor.
  Word restrict_to(const Word& w, VertexSet a) const;

  /// Nearest point of the coset to x. Parabolic cosets are convex, so the
  /// gate is unique and d(x,q) = d(x,gate) + d(gate,q) for all q in the coset.
  Word gate(const Word& x, const ParabolicCoset& c) const;

  /// Minimal-length element of g1·W_A1 ∩ g2·W_A2, or nullopt when empty.
  std::optional<Word> coset_intersection(const Word& g1, VertexSet a1,
                                         const Word& g2, VertexSet a2) const;

  /// Vertex path 1, w_1, w_1w_2, ..., w spelled by the normal form.
  std::vector<Word> letter_path(const Word& w) const;
  /// Individual letters of the normal form, in order.
  std::vector<Letter> spell(const Word& w) const;

 private:
  void append(std::vector<Syllable>& reduced, int vertex, int exponent) const;
  Word canonical(std::vector<Syllable> reduced) const;
  int normalize_exponent(int vertex, int exponent) const;

  DefiningGraph graph_;
  std::vector<Letter> letters_;
};

}  // namespace hhslab
