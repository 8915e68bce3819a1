#pragma once

// Stallings folding of finitely generated subgroups of F_k.
//
// FoldedGraph is the fast path (union-find coincidence processing) used for
// membership, generation and conjugacy tests. express_generators() is a slow
// tagged variant that additionally records, for every edge, a word in the
// input generators; it is used to invert automorphisms and to re-express
// ambient generators through a generating set.

#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "freetwist/word.hpp"

namespace ft {

class FoldedGraph {
 public:
  explicit FoldedGraph(int rank) : rank_(rank) { new_vertex(); }

  FoldedGraph(int rank, const std::vector<Word>& generators) : FoldedGraph(rank) {
    for (const auto& g : generators) add_loop(g);
    compact();
  }

  int rank_of_ambient() const { return rank_; }

  /// Adds the closed path spelling w at the base vertex.
  void add_loop(const Word& w) {
    if (w.empty()) return;
    for (Letter l : w)
      if (generator_of(l) >= rank_) throw std::out_of_range("letter outside ambient rank");
    int prev = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? 0 : new_vertex();
      add_edge(prev, letter_key(w[i]), next);
      prev = find(next);
    }
    compacted_ = false;
  }

  /// Renumbers live vertices densely (base stays 0). Called automatically by queries.
  void compact() {
    if (compacted_) return;
    const int dirs = 2 * rank_;
    std::vector<int> id(parent_.size(), -1);
    int n = 0;
    for (std::size_t v = 0; v < parent_.size(); ++v)
      if (find(static_cast<int>(v)) == static_cast<int>(v)) id[v] = n++;
    std::vector<int> adj(static_cast<std::size_t>(n) * dirs, -1);
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (id[v] < 0) continue;
      for (int d = 0; d < dirs; ++d) {
        int t = adj_[v * dirs + d];
        if (t >= 0) adj[static_cast<std::size_t>(id[v]) * dirs + d] = id[find(t)];
      }
    }
    parent_.resize(static_cast<std::size_t>(n));
    std::iota(parent_.begin(), parent_.end(), 0);
    adj_ = std::move(adj);
    compacted_ = true;
  }

  int vertex_count() {
    compact();
    return static_cast<int>(parent_.size());
  }
  int edge_count() {
    compact();
    int filled = 0;
    for (int t : adj_) filled += (t >= 0);
    return filled / 2;
  }
  /// Rank of the subgroup represented (Euler characteristic of the folded graph).
  int subgroup_rank() { return edge_count() - vertex_count() + 1; }

  int target(int v, int dir) {
    compact();
    return adj_[static_cast<std::size_t>(v) * 2 * rank_ + dir];
  }

  /// Whether w lies in the subgroup: read from the base and return to it.
  bool contains(const Word& w) {
    compact();
    int v = 0;
    for (Letter l : w) {
      if (generator_of(l) >= rank_) return false;
      v = adj_[static_cast<std::size_t>(v) * 2 * rank_ + letter_key(l)];
      if (v < 0) return false;
    }
    return v == 0;
  }

  /// The subgroup is all of F_k exactly when the folded graph is the rose.
  bool is_full() {
    compact();
    if (parent_.size() != 1) return false;
    for (int t : adj_)
      if (t != 0) return false;
    return true;
  }

  /// Free basis read off a BFS spanning tree (a Nielsen-reduced generating set).
  std::vector<Word> basis() {
    compact();
    return basis_from(0, std::vector<char>(parent_.size(), 1));
  }

  /// Basis of the loops at `start` inside the subgraph `mask` (e.g. the core).
  std::vector<Word> basis_from(int start, const std::vector<char>& mask) {
    compact();
    const int dirs = 2 * rank_;
    const std::size_t n = parent_.size();
    std::vector<Word> path(n);
    std::vector<char> seen(n, 0);
    std::vector<char> tree(n * static_cast<std::size_t>(dirs), 0);
    auto at = [&](int v, int d) { return adj_[static_cast<std::size_t>(v) * dirs + d]; };
    std::queue<int> q;
    q.push(start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int d = 0; d < dirs; ++d) {
        int t = at(v, d);
        if (t < 0 || !mask[static_cast<std::size_t>(t)] || seen[static_cast<std::size_t>(t)]) continue;
        seen[static_cast<std::size_t>(t)] = 1;
        tree[static_cast<std::size_t>(v) * dirs + d] = 1;
        tree[static_cast<std::size_t>(t) * dirs + (d ^ 1)] = 1;
        path[static_cast<std::size_t>(t)] = path[static_cast<std::size_t>(v)] * Word{letter_from_dir(d)};
        q.push(t);
      }
    }
    std::vector<Word> out;
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v]) continue;
      for (int d = 0; d < dirs; d += 2) {  // positive directions: each edge once
        int t = at(static_cast<int>(v), d);
        if (t < 0 || !seen[static_cast<std::size_t>(t)] || tree[v * dirs + d]) continue;
        out.push_back(path[v] * Word{letter_from_dir(d)} * path[static_cast<std::size_t>(t)].inverse());
      }
    }
    return out;
  }

  /// Vertices surviving after repeatedly deleting valence-one vertices (base included).
  std::vector<char> core_mask() {
    compact();
    const int dirs = 2 * rank_;
    const std::size_t n = parent_.size();
    std::vector<int> deg(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      for (int d = 0; d < dirs; ++d) deg[v] += (adj_[v * dirs + d] >= 0);
    std::vector<char> alive(n, 1);
    std::vector<int> stack;
    for (std::size_t v = 0; v < n; ++v)
      if (deg[v] <= 1) stack.push_back(static_cast<int>(v));
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (!alive[static_cast<std::size_t>(v)]) continue;
      alive[static_cast<std::size_t>(v)] = 0;
      for (int d = 0; d < dirs; ++d) {
        int t = adj_[static_cast<std::size_t>(v) * dirs + d];
        if (t < 0 || !alive[static_cast<std::size_t>(t)]) continue;
        if (--deg[static_cast<std::size_t>(t)] <= 1) stack.push_back(t);
      }
    }
    return alive;
  }

  /// Canonical code of the labeled graph explored from `start`, restricted to `mask`.
  std::vector<int> code_from(int start, const std::vector<char>& mask, std::size_t limit_vertices = SIZE_MAX) {
    compact();
    const int dirs = 2 * rank_;
    std::vector<int> number(parent_.size(), -1);
    std::vector<int> order{start};
    number[static_cast<std::size_t>(start)] = 0;
    std::vector<int> code;
    for (std::size_t i = 0; i < order.size() && i < limit_vertices; ++i) {
      int v = order[i];
      for (int d = 0; d < dirs; ++d) {
        int t = adj_[static_cast<std::size_t>(v) * dirs + d];
        if (t < 0 || !mask[static_cast<std::size_t>(t)]) {
          code.push_back(-1);
          continue;
        }
        if (number[static_cast<std::size_t>(t)] < 0) {
          number[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
          order.push_back(t);
        }
        code.push_back(number[static_cast<std::size_t>(t)]);
      }
    }
    return code;
  }

  /// Canonical form of the conjugacy class of the subgroup: least core code over all starts.
  std::vector<int> conjugacy_code() {
    auto mask = core_mask();
    std::vector<int> best;
    bool have = false;
    for (std::size_t v = 0; v < mask.size(); ++v) {
      if (!mask[v]) continue;
      auto c = code_from(static_cast<int>(v), mask);
      if (!have || c < best) {
        best = std::move(c);
        have = true;
      }
    }
    return best;
  }

  /// Canonical form of the subgroup itself (based graph).
  std::vector<int> based_code() {
    compact();
    std::vector<char> all(parent_.size(), 1);
    return code_from(0, all);
  }

 private:
  static Letter letter_from_dir(int d) { return letter_for(d / 2, (d & 1) != 0); }

  int new_vertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    adj_.resize(adj_.size() + static_cast<std::size_t>(2 * rank_), -1);
    return static_cast<int>(parent_.size()) - 1;
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }

  int& slot(int v, int d) { return adj_[static_cast<std::size_t>(v) * 2 * rank_ + d]; }

  void add_edge(int u, int d, int v) {
    u = find(u);
    v = find(v);
    int a = slot(u, d);
    int b = slot(v, d ^ 1);
    if (a >= 0) {
      merge(a, v);
    } else if (b >= 0) {
      merge(b, u);
    } else {
      slot(u, d) = v;
      slot(v, d ^ 1) = u;
    }
  }

  void merge(int x, int y) {
    std::vector<std::pair<int, int>> pending{{x, y}};
    const int dirs = 2 * rank_;
    while (!pending.empty()) {
      auto [p, q] = pending.back();
      pending.pop_back();
      p = find(p);
      q = find(q);
      if (p == q) continue;
      int keep = std::min(p, q), gone = std::max(p, q);
      parent_[static_cast<std::size_t>(gone)] = keep;
      for (int d = 0; d < dirs; ++d) {
        int t = slot(gone, d);
        if (t < 0) continue;
        t = find(t);
        int& mine = slot(keep, d);
        if (mine < 0)
          mine = t;
        else if (find(mine) != t)
          pending.emplace_back(find(mine), t);
      }
    }
  }

  int rank_;
  std::vector<int> parent_;
  std::vector<int> adj_;
  bool compacted_ = false;
};

inline bool generates_free_group(const std::vector<Word>& words, int rank) {
  FoldedGraph g(rank, words);
  return g.is_full();
}

inline bool subgroup_contains(const std::vector<Word>& generators, const Word& w, int rank) {
  FoldedGraph g(rank, generators);
  return g.contains(w);
}

inline bool same_subgroup(const std::vector<Word>& a, const std::vector<Word>& b, int rank) {
  FoldedGraph ga(rank, a), gb(rank, b);
  return ga.based_code() == gb.based_code();
}

/// Conjugacy of two subgroups by isomorphism of their labeled core graphs.
inline bool conjugate_subgroups(FoldedGraph& a, FoldedGraph& b) {
  auto ma = a.core_mask();
  auto mb = b.core_mask();
  auto count = [](const std::vector<char>& m) { return std::count(m.begin(), m.end(), 1); };
  if (count(ma) != count(mb)) return false;
  int sa = -1;
  for (std::size_t v = 0; v < ma.size(); ++v)
    if (ma[v]) {
      sa = static_cast<int>(v);
      break;
    }
  if (sa < 0) return count(mb) == 0;
  auto ref = a.code_from(sa, ma);
  for (std::size_t v = 0; v < mb.size(); ++v) {
    if (!mb[v]) continue;
    // cheap early exit on the first explored vertex
    if (b.code_from(static_cast<int>(v), mb, 1) != std::vector<int>(ref.begin(), ref.begin() + 2 * a.rank_of_ambient()))
      continue;
    if (b.code_from(static_cast<int>(v), mb) == ref) return true;
  }
  return false;
}

/// Tagged folding of the wedge of `petals`. When the folded graph is the rose,
/// returns for every ambient generator x_i a word t_i in the petal alphabet
/// (petal j is letter j+1) with t_i(petals) = x_i. Returns nullopt otherwise.
inline std::optional<std::vector<Word>> express_generators(const std::vector<Word>& petals, int rank) {
  struct Edge {
    int from, to, gen;
    Word tag;
    bool alive = true;
  };
  std::vector<Edge> edges;
  int vertices = 1;
  for (std::size_t j = 0; j < petals.size(); ++j) {
    const Word& w = petals[j];
    if (w.empty()) continue;
    int prev = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? 0 : vertices++;
      Word tag = i == 0 ? Word{static_cast<Letter>(j + 1)} : Word{};
      if (w[i] > 0)
        edges.push_back({prev, next, generator_of(w[i]), tag});
      else
        edges.push_back({next, prev, generator_of(w[i]), tag.inverse()});
      prev = next;
    }
  }
  const int dirs = 2 * rank;
  for (;;) {
    // locate a fold: two live edges leaving one vertex in the same direction
    std::vector<int> seen(static_cast<std::size_t>(vertices) * dirs, -1);
    int u = -1, e1 = -1, e2 = -1, d = -1;
    for (int e = 0; e < static_cast<int>(edges.size()) && u < 0; ++e) {
      const auto& ed = edges[static_cast<std::size_t>(e)];
      if (!ed.alive) continue;
      std::pair<int, int> ends[2] = {{ed.from, 2 * ed.gen}, {ed.to, 2 * ed.gen + 1}};
      for (auto [v, dir] : ends) {
        int& s = seen[static_cast<std::size_t>(v) * dirs + dir];
        if (s >= 0 && s != e) {
          u = v;
          e1 = s;
          e2 = e;
          d = dir;
          break;
        }
        s = e;
      }
    }
    if (u < 0) break;
    // traversal of edge e out of u in direction d: (far end, tag read along it)
    auto leaving = [&](int e) {
      const auto& ed = edges[static_cast<std::size_t>(e)];
      if (ed.from == u && d == 2 * ed.gen) return std::pair{ed.to, ed.tag};
      return std::pair{ed.from, ed.tag.inverse()};
    };
    auto [v1, t1] = leaving(e1);
    auto [v2, t2] = leaving(e2);
    if (v1 != v2) {
      int g = v2 != 0 ? v2 : v1;
      Word h = g == v2 ? t1.inverse() * t2 : t2.inverse() * t1;
      for (auto& ed : edges) {
        if (!ed.alive) continue;
        if (ed.from == g && ed.to == g)
          ed.tag = h * ed.tag * h.inverse();
        else if (ed.from == g)
          ed.tag = h * ed.tag;
        else if (ed.to == g)
          ed.tag = ed.tag * h.inverse();
      }
      int keep = g == v2 ? v1 : v2;
      for (auto& ed : edges) {
        if (ed.from == g) ed.from = keep;
        if (ed.to == g) ed.to = keep;
      }
    }
    edges[static_cast<std::size_t>(e2)].alive = false;
  }
  std::vector<Word> out(static_cast<std::size_t>(rank));
  std::vector<char> have(static_cast<std::size_t>(rank), 0);
  for (const auto& ed : edges) {
    if (!ed.alive) continue;
    if (ed.from != 0 || ed.to != 0) return std::nullopt;
    if (have[static_cast<std::size_t>(ed.gen)]) return std::nullopt;
    have[static_cast<std::size_t>(ed.gen)] = 1;
    out[static_cast<std::size_t>(ed.gen)] = ed.tag;
  }
  for (char h : have)
    if (!h) return std::nullopt;
  return out;
}

}  // namespace ft
