#pragma once

// Seeded random marked graphs for sweeps and oracle comparisons.

#include <cstdint>
#include <random>

#include "freetwist/marked_graph.hpp"
#include "freetwist/whitehead.hpp"

namespace ft {

/// Uniform in [0, n) with a fixed reduction, so streams agree across standard libraries.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

/// A connected graph of the alphabet's rank with every valence ≥ 3 and at most
/// `max_edges` edges, integer lengths in [1, 6] scaled to volume one, marked
/// from a spanning tree and then re-marked by `moves` random Whitehead moves.
inline MarkedGraph random_marked_graph(const Alphabet& al, std::mt19937_64& rng, int max_edges, int moves = 0) {
  const int k = al.rank();
  const int max_v = std::min(max_edges - k + 1, 2 * k - 2);
  if (max_v < 1) throw std::invalid_argument("edge budget below the rank");
  for (;;) {
    const int v = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(max_v)));
    const int e = v + k - 1;
    std::vector<GraphEdge> edges;
    for (int i = 0; i < e; ++i) {
      int a = static_cast<int>(draw(rng, static_cast<std::uint64_t>(v)));
      int b = static_cast<int>(draw(rng, static_cast<std::uint64_t>(v)));
      edges.push_back({a, b, Rational(static_cast<long>(1 + draw(rng, 6)))});
    }
    std::vector<int> val(static_cast<std::size_t>(v), 0);
    for (const auto& ed : edges) {
      ++val[static_cast<std::size_t>(ed.from)];
      ++val[static_cast<std::size_t>(ed.to)];
    }
    if (*std::min_element(val.begin(), val.end()) < 3) continue;
    std::vector<Word> to_vertex(static_cast<std::size_t>(v));
    std::vector<char> in_tree(edges.size(), 0), seen(static_cast<std::size_t>(v), 0);
    MarkedGraph::bfs_tree(v, edges, 0, to_vertex, in_tree, seen);
    if (std::count(seen.begin(), seen.end(), 0)) continue;
    MarkedGraph g = MarkedGraph::from_spanning_tree(al, v, std::move(edges)).normalized();
    if (moves > 0) {
      auto all = whitehead_moves(k);
      Automorphism psi = Automorphism::identity(al);
      for (int i = 0; i < moves; ++i) psi = compose(psi, all[draw(rng, all.size())].automorphism(al));
      g = g.remarked(psi);
    }
    return g;
  }
}

}  // namespace ft
