#pragma once

// Lipschitz stretch between marked graphs.
//
// The maximal stretch is realized by a candidate loop of the source graph: an
// embedded circle, a figure eight (two circles meeting in one vertex) or a
// barbell (two disjoint circles joined by an arc).

#include <set>
#include <vector>

#include "freetwist/marked_graph.hpp"

namespace ft {

struct StretchResult {
  Rational factor = 1;
  CyclicWord witness;
  double distance() const { return log_of(factor); }
};

namespace detail {

inline std::vector<std::vector<Letter>> leaving_letters(const MarkedGraph& g) {
  std::vector<std::vector<Letter>> out(static_cast<std::size_t>(g.vertex_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    out[static_cast<std::size_t>(g.edge(e).from)].push_back(letter_for(e));
    out[static_cast<std::size_t>(g.edge(e).to)].push_back(letter_for(e, true));
  }
  return out;
}

/// Oriented embedded circles, each listed once per orientation, starting at its least vertex.
inline std::vector<Word> embedded_circles(const MarkedGraph& g) {
  auto out = leaving_letters(g);
  std::vector<Word> circles;
  std::vector<char> on_path(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<Letter> path;
  for (int s = 0; s < g.vertex_count(); ++s) {
    auto dfs = [&](auto&& self, int at) -> void {
      for (Letter l : out[static_cast<std::size_t>(at)]) {
        if (!path.empty() && generator_of(l) == generator_of(path.back())) continue;
        int next = g.head(l);
        if (next == s) {
          // a two-edge circle through the same edge twice is a backtrack, excluded above
          path.push_back(l);
          circles.emplace_back(path);
          path.pop_back();
          continue;
        }
        if (next < s || on_path[static_cast<std::size_t>(next)]) continue;
        on_path[static_cast<std::size_t>(next)] = 1;
        path.push_back(l);
        self(self, next);
        path.pop_back();
        on_path[static_cast<std::size_t>(next)] = 0;
      }
    };
    on_path[static_cast<std::size_t>(s)] = 1;
    dfs(dfs, s);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  return circles;
}

inline Word rotated_to(const MarkedGraph& g, const Word& circle, int v) {
  for (std::size_t i = 0; i < circle.size(); ++i)
    if (g.tail(circle[i]) == v) return circle.suffix_from(i) * circle.prefix(i);
  throw std::logic_error("vertex not on circle");
}

inline std::vector<int> circle_vertices(const MarkedGraph& g, const Word& c) {
  std::vector<int> vs;
  for (Letter l : c) vs.push_back(g.tail(l));
  std::sort(vs.begin(), vs.end());
  return vs;
}

}  // namespace detail

/// Candidate loops of g, as cyclically reduced edge loops without repeats up to rotation.
inline std::vector<Word> candidate_loops(const MarkedGraph& g) {
  auto circles = detail::embedded_circles(g);
  auto out = detail::leaving_letters(g);
  std::vector<std::vector<int>> verts;
  for (const auto& c : circles) verts.push_back(detail::circle_vertices(g, c));
  std::set<CyclicWord> found;
  for (const auto& c : circles) found.insert(CyclicWord(c));
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = 0; j < circles.size(); ++j) {
      if (i == j) continue;
      std::vector<int> common;
      std::set_intersection(verts[i].begin(), verts[i].end(), verts[j].begin(), verts[j].end(),
                            std::back_inserter(common));
      if (common.size() == 1) {
        Word a = detail::rotated_to(g, circles[i], common[0]), b = detail::rotated_to(g, circles[j], common[0]);
        if (CyclicWord(a) == CyclicWord(b) || CyclicWord(a) == CyclicWord(b.inverse())) continue;
        found.insert(CyclicWord(a * b));
        continue;
      }
      if (!common.empty() || i > j) continue;
      // barbells: simple arcs from circle i to circle j avoiding both elsewhere
      std::vector<char> blocked(static_cast<std::size_t>(g.vertex_count()), 0);
      for (int v : verts[i]) blocked[static_cast<std::size_t>(v)] = 1;
      for (int v : verts[j]) blocked[static_cast<std::size_t>(v)] = 2;
      std::vector<Letter> arc;
      auto dfs = [&](auto&& self, int at) -> void {
        for (Letter l : out[static_cast<std::size_t>(at)]) {
          int next = g.head(l);
          char b = blocked[static_cast<std::size_t>(next)];
          if (b == 2) {
            arc.push_back(l);
            Word p(arc);
            Word c1 = detail::rotated_to(g, circles[i], g.tail(arc.front()));
            Word c2 = detail::rotated_to(g, circles[j], next);
            found.insert(CyclicWord(c1 * p * c2 * p.inverse()));
            arc.pop_back();
            continue;
          }
          if (b) continue;
          blocked[static_cast<std::size_t>(next)] = 3;
          arc.push_back(l);
          self(self, next);
          arc.pop_back();
          blocked[static_cast<std::size_t>(next)] = 0;
        }
      };
      for (int u : verts[i]) dfs(dfs, u);
    }
  }
  std::vector<Word> loops;
  for (const auto& c : found) loops.push_back(c.word());
  return loops;
}

namespace detail {

inline void consider(StretchResult& best, bool& have, const Rational& r, const CyclicWord& w) {
  auto better_witness = [](const CyclicWord& a, const CyclicWord& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  };
  if (!have || r > best.factor || (r == best.factor && better_witness(w, best.witness))) {
    best.factor = r;
    best.witness = w;
    have = true;
  }
}

}  // namespace detail

/// sup ℓ₂(w)/ℓ₁(w) over nontrivial conjugacy classes, realized on candidate loops of g1.
inline StretchResult stretch_factor(const MarkedGraph& g1, const MarkedGraph& g2) {
  if (g1.rank() != g2.rank()) throw Error("stretch needs graphs of the same rank");
  StretchResult best;
  bool have = false;
  for (const auto& loop : candidate_loops(g1)) {
    CyclicWord w(g1.path_word(loop));
    detail::consider(best, have, g2.translation_length(w.word()) / g1.path_length(loop), w);
  }
  return best;
}

inline double lipschitz_distance(const MarkedGraph& g1, const MarkedGraph& g2) {
  return stretch_factor(g1.normalized(), g2.normalized()).distance();
}

/// Oracle: the same ratio maximized over every cyclic word of length ≤ max_len.
inline StretchResult stretch_factor_brute_force(const MarkedGraph& g1, const MarkedGraph& g2, std::size_t max_len = 6) {
  StretchResult best;
  bool have = false;
  for (const auto& w : all_cyclic_words(g1.rank(), max_len)) {
    Word x = w.word();
    detail::consider(best, have, g2.translation_length(x) / g1.translation_length(x), w);
  }
  return best;
}

/// Equal as points of outer space: after normalizing, both stretch factors are 1.
inline bool same_point(const MarkedGraph& g1, const MarkedGraph& g2) {
  auto a = g1.normalized(), b = g2.normalized();
  return stretch_factor(a, b).factor == 1 && stretch_factor(b, a).factor == 1;
}

}  // namespace ft
