#pragma once

// Discrete folding paths between points of outer space.
//
// The change of marking G1 → G2 is realized on a rose (G1 itself, or G1 with
// a spanning tree collapsed): each petal is subdivided along its tightened
// image in G2 and every piece takes the length of the G2 edge it covers.
// Pieces with the same label leaving a common vertex are then folded one pair
// at a time until the labeled graph is an immersion, which for a homotopy
// equivalence means it is G2 itself.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freetwist/lipschitz.hpp"

namespace ft {

struct FoldOptions {
  std::size_t max_steps = 100000;
  /// Samples per fold; values above 1 add partial folds at θ = s/refine.
  int refine = 1;
};

struct FoldPath {
  std::vector<MarkedGraph> points;
  /// How each point arose: source, collapse, pullback, fold, partial.
  std::vector<std::string> steps;

  std::size_t size() const { return points.size(); }
};

namespace detail {

// Working graph of the fold process: a marked graph whose edges ("pieces")
// carry signed labels in the edge alphabet of the target.
struct LabeledGraph {
  Alphabet alphabet;
  int vertices = 0;
  std::vector<GraphEdge> pieces;
  std::vector<Letter> labels;
  std::vector<Word> marking;

  MarkedGraph point() const { return MarkedGraph(alphabet, vertices, pieces, marking).simplified().normalized(); }

  struct Fold {
    int vertex;
    Letter first, second;  // pieces crossed leaving the vertex
  };

  std::optional<Fold> next_fold() const {
    for (int v = 0; v < vertices; ++v) {
      std::vector<std::pair<Letter, Letter>> dirs;  // (label read, piece letter)
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        Letter l = letter_for(static_cast<int>(p));
        if (pieces[p].from == v) dirs.emplace_back(labels[p], l);
        if (pieces[p].to == v) dirs.emplace_back(-labels[p], -l);
      }
      for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
          if (dirs[i].first == dirs[j].first) return Fold{v, dirs[i].second, dirs[j].second};
    }
    return std::nullopt;
  }

  int far_end(Letter l) const {
    const auto& p = pieces[static_cast<std::size_t>(generator_of(l))];
    return l > 0 ? p.to : p.from;
  }

  // Identifies the second piece with the first along their whole length.
  void fold(const Fold& f) {
    int w1 = far_end(f.first), w2 = far_end(f.second);
    if (w1 == w2) throw std::logic_error("fold would kill a loop; the map is not a homotopy equivalence");
    const int dropped = generator_of(f.second);
    std::vector<Word> sub;
    std::vector<GraphEdge> kept;
    std::vector<Letter> kept_labels;
    std::vector<int> slot(pieces.size(), -1);
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      if (static_cast<int>(p) == dropped) continue;
      slot[p] = static_cast<int>(kept.size());
      kept.push_back(pieces[p]);
      kept_labels.push_back(labels[p]);
    }
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      if (static_cast<int>(p) != dropped) {
        sub.push_back(Word{letter_for(slot[p])});
        continue;
      }
      Letter target = f.first > 0 ? letter_for(slot[static_cast<std::size_t>(generator_of(f.first))])
                                  : -letter_for(slot[static_cast<std::size_t>(generator_of(f.first))]);
      sub.push_back(f.second > 0 ? Word{target} : Word{-target});
    }
    // merge the far ends, keeping vertex 0 as the base, then close the gap
    if (w2 == 0) std::swap(w1, w2);
    auto renum = [&](int u) {
      if (u == w2) u = w1;
      return u > w2 ? u - 1 : u;
    };
    for (auto& p : kept) {
      p.from = renum(p.from);
      p.to = renum(p.to);
    }
    for (auto& m : marking) m = Automorphism::substitute(sub, m);
    pieces = std::move(kept);
    labels = std::move(kept_labels);
    --vertices;
  }

  // The graph after folding the first θ of both pieces.
  MarkedGraph partial(const Fold& f, const Rational& theta) const {
    auto es = pieces;
    const int m = vertices;
    const auto p1 = static_cast<std::size_t>(generator_of(f.first));
    const auto p2 = static_cast<std::size_t>(generator_of(f.second));
    const Rational len = es[p1].length;
    int w1 = far_end(f.first), w2 = far_end(f.second);
    const int a = static_cast<int>(es.size());  // shared initial segment v → m
    es[p1] = {m, w1, (1 - theta) * len};
    es[p2] = {m, w2, (1 - theta) * len};
    es.push_back({f.vertex, m, theta * len});
    std::vector<Word> sub;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      Letter l = letter_for(static_cast<int>(p));
      if (p == p1 || p == p2) {
        Letter leaving = p == p1 ? f.first : f.second;
        Word w{letter_for(a), l};  // leaving v along this piece
        sub.push_back(leaving > 0 ? w : w.inverse());
      } else {
        sub.push_back(Word{l});
      }
    }
    std::vector<Word> mk;
    for (const auto& x : marking) mk.push_back(Automorphism::substitute(sub, x));
    return MarkedGraph(alphabet, vertices + 1, std::move(es), std::move(mk)).simplified().normalized();
  }
};

inline MarkedGraph collapse_to_rose(const MarkedGraph& g) {
  std::vector<Word> to_vertex(static_cast<std::size_t>(g.vertex_count()));
  std::vector<char> in_tree(g.edges().size(), 0), seen(static_cast<std::size_t>(g.vertex_count()), 0);
  MarkedGraph::bfs_tree(g.vertex_count(), g.edges(), g.base(), to_vertex, in_tree, seen);
  std::vector<GraphEdge> petals;
  std::vector<Word> sub;
  for (std::size_t e = 0; e < in_tree.size(); ++e) {
    if (in_tree[e]) {
      sub.push_back(Word{});
    } else {
      sub.push_back(Word{letter_for(static_cast<int>(petals.size()))});
      petals.push_back({0, 0, g.edges()[e].length});
    }
  }
  std::vector<Word> marking;
  for (const auto& m : g.marking()) marking.push_back(Automorphism::substitute(sub, m));
  return MarkedGraph(g.alphabet(), 1, std::move(petals), std::move(marking)).normalized();
}

}  // namespace detail

inline FoldPath fold_path(const MarkedGraph& g1, const MarkedGraph& g2, const FoldOptions& opt = {}) {
  if (g1.rank() != g2.rank()) throw Error("fold path needs graphs of the same rank");
  if (opt.refine < 1) throw std::invalid_argument("refine must be at least 1");
  FoldPath path;
  auto push = [&](MarkedGraph g, std::string step) {
    path.points.push_back(std::move(g));
    path.steps.push_back(std::move(step));
  };
  push(g1.normalized(), "source");
  if (same_point(g1, g2)) return path;

  MarkedGraph rose = g1.normalized();
  if (rose.vertex_count() > 1) {
    rose = detail::collapse_to_rose(rose);
    push(rose, "collapse");
  }

  detail::LabeledGraph h{rose.alphabet(), 1, {}, {}, {}};
  std::vector<Word> petal_pieces;
  for (int j = 0; j < rose.edge_count(); ++j) {
    Word target = g2.image(rose.edge_words()[static_cast<std::size_t>(j)]);
    std::vector<Letter> ls;
    for (std::size_t i = 0; i < target.size(); ++i) {
      int from = i == 0 ? 0 : h.vertices - 1;
      int to = i + 1 == target.size() ? 0 : h.vertices++;
      h.pieces.push_back({from, to, g2.edge(generator_of(target[i])).length});
      h.labels.push_back(target[i]);
      ls.push_back(letter_for(static_cast<int>(h.pieces.size()) - 1));
    }
    petal_pieces.emplace_back(std::move(ls));
  }
  for (const auto& m : rose.marking()) h.marking.push_back(Automorphism::substitute(petal_pieces, m));

  MarkedGraph pulled = h.point();
  if (!(pulled.edges() == rose.edges())) push(pulled, "pullback");

  std::size_t steps = 0;
  while (auto f = h.next_fold()) {
    if (++steps > opt.max_steps) throw ResourceError("fold path exceeds the step budget");
    for (int s = 1; s < opt.refine; ++s) push(h.partial(*f, Rational(s, opt.refine)), "partial");
    h.fold(*f);
    push(h.point(), "fold");
  }
  if (static_cast<int>(h.pieces.size()) != g2.edge_count())
    throw std::logic_error("fold process stopped away from the target");
  return path;
}

/// First index where ℓ(a) is smallest along the path, with that value.
inline std::pair<std::size_t, Rational> min_length_along_path(const FoldPath& p, const Word& a) {
  if (p.points.empty()) throw std::invalid_argument("empty path");
  std::size_t best = 0;
  Rational value = p.points[0].translation_length(a);
  for (std::size_t i = 1; i < p.points.size(); ++i) {
    Rational v = p.points[i].translation_length(a);
    if (v < value) {
      value = v;
      best = i;
    }
  }
  return {best, value};
}

}  // namespace ft
