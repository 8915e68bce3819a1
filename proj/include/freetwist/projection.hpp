#pragma once

// Coarse projection from outer space to the free factor complex, and the
// distance bounds built on it.

#include <algorithm>
#include <set>
#include <vector>

#include "freetwist/fold_path.hpp"
#include "freetwist/free_factor.hpp"

namespace ft {

/// Smallest free factor carrying the subgraph on `edges`: π1 of each
/// component, joined to the base by tree paths and read through the marking.
inline FreeFactor project_to_ff(const MarkedGraph& g, const std::vector<int>& edges) {
  const int nv = g.vertex_count();
  std::vector<Word> to_vertex(static_cast<std::size_t>(nv));
  std::vector<char> in_tree(g.edges().size(), 0), seen(static_cast<std::size_t>(nv), 0);
  MarkedGraph::bfs_tree(nv, g.edges(), g.base(), to_vertex, in_tree, seen);

  std::vector<char> chosen(g.edges().size(), 0);
  for (int e : edges) {
    if (e < 0 || e >= g.edge_count()) throw Error("subgraph edge out of range");
    chosen[static_cast<std::size_t>(e)] = 1;
  }
  // BFS forest inside the subgraph; anchor(v) runs from the base to v through
  // the root of v's component
  std::vector<std::vector<Letter>> out(static_cast<std::size_t>(nv));
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!chosen[static_cast<std::size_t>(e)]) continue;
    out[static_cast<std::size_t>(g.edge(e).from)].push_back(letter_for(e));
    out[static_cast<std::size_t>(g.edge(e).to)].push_back(letter_for(e, true));
  }
  std::vector<Word> anchor(static_cast<std::size_t>(nv));
  std::vector<char> reached(static_cast<std::size_t>(nv), 0), forest(g.edges().size(), 0);
  for (int root = 0; root < nv; ++root) {
    if (reached[static_cast<std::size_t>(root)] || out[static_cast<std::size_t>(root)].empty()) continue;
    reached[static_cast<std::size_t>(root)] = 1;
    anchor[static_cast<std::size_t>(root)] = to_vertex[static_cast<std::size_t>(root)];
    std::vector<int> queue{root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (Letter l : out[static_cast<std::size_t>(u)]) {
        int w = g.head(l);
        if (reached[static_cast<std::size_t>(w)]) continue;
        reached[static_cast<std::size_t>(w)] = 1;
        forest[static_cast<std::size_t>(generator_of(l))] = 1;
        anchor[static_cast<std::size_t>(w)] = anchor[static_cast<std::size_t>(u)] * Word{l};
        queue.push_back(w);
      }
    }
  }
  std::vector<Word> gens;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!chosen[static_cast<std::size_t>(e)] || forest[static_cast<std::size_t>(e)]) continue;
    Word loop = anchor[static_cast<std::size_t>(g.edge(e).from)] * Word{letter_for(e)} *
                anchor[static_cast<std::size_t>(g.edge(e).to)].inverse();
    gens.push_back(g.path_word(loop));
  }
  if (gens.empty()) throw Error("subgraph is a forest");
  return FreeFactor::from_generators(gens, g.rank());
}

/// Edges of the shortest embedded circle (ties: lexicographically least edge set).
inline std::vector<int> shortest_circle(const MarkedGraph& g) {
  std::vector<int> best;
  Rational best_len = -1;
  const int ne = g.edge_count(), nv = g.vertex_count();
  for (int e = 0; e < ne; ++e) {
    const auto& ed = g.edge(e);
    std::vector<int> cycle;
    Rational len = ed.length;
    if (ed.from != ed.to) {
      // Dijkstra from ed.to to ed.from avoiding e, with exact lengths
      std::vector<Rational> dist(static_cast<std::size_t>(nv), -1);
      std::vector<int> via(static_cast<std::size_t>(nv), -1);
      std::vector<char> done(static_cast<std::size_t>(nv), 0);
      dist[static_cast<std::size_t>(ed.to)] = 0;
      for (;;) {
        int u = -1;
        for (int v = 0; v < nv; ++v)
          if (!done[static_cast<std::size_t>(v)] && dist[static_cast<std::size_t>(v)] >= 0 &&
              (u < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(u)]))
            u = v;
        if (u < 0) break;
        done[static_cast<std::size_t>(u)] = 1;
        for (int f = 0; f < ne; ++f) {
          if (f == e) continue;
          const auto& fe = g.edge(f);
          for (auto [a, b] : {std::pair{fe.from, fe.to}, std::pair{fe.to, fe.from}}) {
            if (a != u) continue;
            Rational d = dist[static_cast<std::size_t>(u)] + fe.length;
            auto& db = dist[static_cast<std::size_t>(b)];
            if (db < 0 || d < db) {
              db = d;
              via[static_cast<std::size_t>(b)] = f;
            }
          }
        }
      }
      if (dist[static_cast<std::size_t>(ed.from)] < 0) continue;
      len += dist[static_cast<std::size_t>(ed.from)];
      for (int v = ed.from; v != ed.to;) {
        int f = via[static_cast<std::size_t>(v)];
        cycle.push_back(f);
        v = g.edge(f).from == v ? g.edge(f).to : g.edge(f).from;
      }
    }
    cycle.push_back(e);
    std::sort(cycle.begin(), cycle.end());
    if (best_len < 0 || len < best_len || (len == best_len && cycle < best)) {
      best_len = len;
      best = cycle;
    }
  }
  return best;
}

/// The projection used along paths: the factor of the shortest embedded circle.
inline FreeFactor projection(const MarkedGraph& g) { return project_to_ff(g, shortest_circle(g)); }

/// Every proper free factor carried by a subgraph with a circle.
inline std::vector<FreeFactor> all_projections(const MarkedGraph& g) {
  const int ne = g.edge_count();
  if (ne > 20) throw ResourceError("too many edges to enumerate subgraphs");
  std::set<FreeFactor> out;
  for (unsigned mask = 1; mask < (1u << ne); ++mask) {
    std::vector<int> es;
    for (int e = 0; e < ne; ++e)
      if (mask >> e & 1u) es.push_back(e);
    try {
      out.insert(project_to_ff(g, es));
    } catch (const Error&) {
    } catch (const std::invalid_argument&) {
    }
  }
  return {out.begin(), out.end()};
}

/// Upper bound for the free factor distance between the ends of a path:
/// consecutive projections are within 4 of each other.
inline long ff_chain_upper_bound(const FoldPath& p) {
  long changes = 0;
  for (std::size_t i = 1; i < p.points.size(); ++i)
    if (!(projection(p.points[i]) == projection(p.points[i - 1]))) ++changes;
  return 4 * changes;
}

inline long ff_chain_upper_bound(const MarkedGraph& g1, const MarkedGraph& g2, const FoldOptions& opt = {}) {
  return ff_chain_upper_bound(fold_path(g1, g2, opt));
}

/// A loop crossing some edge at most m times projects within 6m+13 of the graph.
inline long crossing_bound_to_ff_distance(long m) {
  if (m < 0) throw std::invalid_argument("crossing count must be nonnegative");
  return 6 * m + 13;
}

/// Edges of a volume-one graph of rank k have length at least 1/(3k+3), so a
/// loop of length ℓ crosses any edge at most ⌈(3k+3)ℓ⌉ times.
inline long length_to_ff_distance(const Rational& ell, int k) {
  if (k < 3) throw std::invalid_argument("rank must be at least 3");
  if (ell < 0) throw std::invalid_argument("length must be nonnegative");
  Rational x = ell * (3 * k + 3);
  Integer m = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
  if (Rational(m) < x) ++m;
  return crossing_bound_to_ff_distance(m.convert_to<long>());
}

struct TwistConstants {
  Rational A;        // 6(3k+3)
  Rational C_prime;  // 2(A + C + H + 13)
  Rational N;        // 2C′ + C₁
};

inline TwistConstants twist_constants(const Rational& C, int k, const Rational& H, const Rational& C1 = 0) {
  if (C < 0 || H < 0 || C1 < 0) throw std::invalid_argument("constants must be nonnegative");
  if (k < 3) throw std::invalid_argument("rank must be at least 3");
  TwistConstants t;
  t.A = 6 * (3 * k + 3);
  t.C_prime = 2 * (t.A + C + H + 13);
  t.N = 2 * t.C_prime + C1;
  return t;
}

}  // namespace ft
