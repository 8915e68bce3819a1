#pragma once

// Metric backends and the δ-hyperbolic toolkit: Gromov products, four-point
// δ, hulls, quasi-projections and concatenation checks.
//
// Toolkit functions are templates over a space type providing `Point`,
// `distance(a, b)` and `geodesic(a, b)` (consecutive points at distance 1).

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "freetwist/rational.hpp"

namespace ft {

/// Shortest-path metric of a finite connected graph with positive integer weights.
class FiniteGraphSpace {
 public:
  using Point = int;
  using Isometry = std::vector<int>;

  struct WeightedEdge {
    int u, v;
    long w = 1;
  };

  FiniteGraphSpace() = default;

  FiniteGraphSpace(int n, std::vector<WeightedEdge> edges) : n_(n), adj_(static_cast<std::size_t>(n)) {
    if (n < 1) throw Error("space needs a vertex");
    for (const auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
      if (e.w <= 0) throw Error("edge weights must be positive");
      if (e.u == e.v) continue;
      adj_[static_cast<std::size_t>(e.u)].push_back({e.v, e.w});
      adj_[static_cast<std::size_t>(e.v)].push_back({e.u, e.w});
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    dist_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreached);
    for (int s = 0; s < n; ++s) dijkstra(s);
    for (long d : dist_)
      if (d == kUnreached) throw Error("space graph is disconnected");
  }

  static FiniteGraphSpace cycle(int n) {
    std::vector<WeightedEdge> es;
    for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n, 1});
    return FiniteGraphSpace(n, std::move(es));
  }

  static FiniteGraphSpace path(int n) {
    std::vector<WeightedEdge> es;
    for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1, 1});
    return FiniteGraphSpace(n, std::move(es));
  }

  static FiniteGraphSpace grid(int w, int h) {
    std::vector<WeightedEdge> es;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (x + 1 < w) es.push_back({y * w + x, y * w + x + 1, 1});
        if (y + 1 < h) es.push_back({y * w + x, (y + 1) * w + x, 1});
      }
    return FiniteGraphSpace(w * h, std::move(es));
  }

  /// Ball of radius r in the (d)-regular tree, vertices in BFS order from the center 0.
  static FiniteGraphSpace regular_tree_ball(int degree, int radius) {
    std::vector<WeightedEdge> es;
    std::vector<int> frontier{0};
    int next = 1;
    for (int r = 0; r < radius; ++r) {
      std::vector<int> grown;
      for (int v : frontier) {
        int children = v == 0 ? degree : degree - 1;
        for (int c = 0; c < children; ++c) {
          es.push_back({v, next, 1});
          grown.push_back(next++);
        }
      }
      frontier = std::move(grown);
    }
    return FiniteGraphSpace(next, std::move(es));
  }

  int size() const { return n_; }
  std::vector<int> points() const {
    std::vector<int> p(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) p[static_cast<std::size_t>(i)] = i;
    return p;
  }

  long distance(int a, int b) const { return dist_[index(a, b)]; }

  long diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

  /// Vertices lying on some geodesic from a to b.
  std::vector<int> interval(int a, int b) const {
    std::vector<int> out;
    for (int w = 0; w < n_; ++w)
      if (distance(a, w) + distance(w, b) == distance(a, b)) out.push_back(w);
    return out;
  }

  /// A deterministic geodesic: from a, always step to the least neighbour closer to b.
  std::vector<int> geodesic(int a, int b) const {
    std::vector<int> out{a};
    while (a != b) {
      for (auto [w, len] : adj_[static_cast<std::size_t>(a)]) {
        if (len + distance(w, b) == distance(a, b)) {
          a = w;
          break;
        }
      }
      out.push_back(a);
    }
    return out;
  }

  const std::vector<std::pair<int, long>>& neighbours(int v) const { return adj_.at(static_cast<std::size_t>(v)); }

  /// Checks that the vertex map is a bijection preserving every distance.
  Isometry make_isometry(std::vector<int> perm) const {
    if (static_cast<int>(perm.size()) != n_) throw Error("isometry needs one image per vertex");
    std::vector<char> hit(static_cast<std::size_t>(n_), 0);
    for (int p : perm) {
      if (p < 0 || p >= n_ || hit[static_cast<std::size_t>(p)]) throw Error("isometry is not a bijection");
      hit[static_cast<std::size_t>(p)] = 1;
    }
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (distance(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]) != distance(a, b))
          throw Error("map does not preserve distances (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    return perm;
  }

  int apply(const Isometry& g, int x) const { return g[static_cast<std::size_t>(x)]; }

  /// Text form: `vertices N` then `edge u v [w]` lines.
  static FiniteGraphSpace parse(std::istream& in) {
    int n = -1;
    std::vector<WeightedEdge> es;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      std::string head;
      if (!(ls >> head)) continue;
      if (head == "vertices") {
        if (!(ls >> n) || n < 1) throw ParseError("line " + std::to_string(lineno) + ": bad vertex count");
      } else if (head == "edge") {
        WeightedEdge e{0, 0, 1};
        if (!(ls >> e.u >> e.v)) throw ParseError("line " + std::to_string(lineno) + ": expected 'edge u v [w]'");
        if (!(ls >> e.w)) e.w = 1;
        es.push_back(e);
      } else {
        throw ParseError("line " + std::to_string(lineno) + ": unknown directive '" + head + "'");
      }
    }
    if (n < 0) throw ParseError("missing 'vertices' line");
    return FiniteGraphSpace(n, std::move(es));
  }

  /// Isometry file: lines `<name> p0 p1 ... p(N-1)`, validated against the space.
  std::vector<std::pair<std::string, Isometry>> parse_isometries(std::istream& in) const {
    std::vector<std::pair<std::string, Isometry>> out;
    std::string line;
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ls(line);
      std::string name;
      if (!(ls >> name)) continue;
      std::vector<int> perm;
      int p;
      while (ls >> p) perm.push_back(p);
      if (!ls.eof()) throw ParseError("isometry '" + name + "': bad vertex index");
      out.emplace_back(name, make_isometry(std::move(perm)));
    }
    return out;
  }

 private:
  static constexpr long kUnreached = std::numeric_limits<long>::max();

  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  void dijkstra(int s) {
    using Item = std::pair<long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[index(s, s)] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist_[index(s, u)]) continue;
      for (auto [w, len] : adj_[static_cast<std::size_t>(u)]) {
        if (d + len < dist_[index(s, w)]) {
          dist_[index(s, w)] = d + len;
          pq.push({d + len, w});
        }
      }
    }
  }

  int n_ = 0;
  std::vector<std::vector<std::pair<int, long>>> adj_;
  std::vector<long> dist_;
};

/// The 3-regular tree as the Cayley graph of Z/2 * Z/2 * Z/2, held implicitly:
/// a vertex is a reduced word in s0, s1, s2 (no letter repeated twice in a row).
class CubicTree {
 public:
  using Point = std::vector<std::uint8_t>;

  /// x ↦ u·π^turn(u⁻¹x) with π: s0 → s1 → s2 → s0, an order-3 rotation about u.
  struct Isometry {
    Point center;
    int turn = 1;
  };

  static Point multiply(const Point& a, const Point& b) {
    Point out = a;
    for (auto l : b) {
      if (!out.empty() && out.back() == l)
        out.pop_back();
      else
        out.push_back(l);
    }
    return out;
  }

  static Point inverse(const Point& a) { return Point(a.rbegin(), a.rend()); }

  static std::size_t common_prefix(const Point& a, const Point& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
  }

  long distance(const Point& a, const Point& b) const {
    return static_cast<long>(a.size() + b.size() - 2 * common_prefix(a, b));
  }

  std::vector<Point> geodesic(const Point& a, const Point& b) const {
    std::size_t p = common_prefix(a, b);
    std::vector<Point> out;
    Point cur = a;
    out.push_back(cur);
    while (cur.size() > p) {
      cur.pop_back();
      out.push_back(cur);
    }
    for (std::size_t i = p; i < b.size(); ++i) {
      cur.push_back(b[i]);
      out.push_back(cur);
    }
    return out;
  }

  Point apply(const Isometry& g, const Point& x) const {
    Point y = multiply(inverse(g.center), x);
    int t = ((g.turn % 3) + 3) % 3;
    for (auto& l : y) l = static_cast<std::uint8_t>((l + t) % 3);
    return multiply(g.center, y);
  }

  /// Vertices within distance r of c.
  std::vector<Point> ball(const Point& c, int r) const {
    std::vector<Point> out{Point{}};
    std::size_t begin = 0;
    for (int d = 0; d < r; ++d) {
      std::size_t end = out.size();
      for (std::size_t i = begin; i < end; ++i)
        for (std::uint8_t l = 0; l < 3; ++l)
          if (out[i].empty() || out[i].back() != l) {
            Point p = out[i];
            p.push_back(l);
            out.push_back(std::move(p));
          }
      begin = end;
    }
    for (auto& p : out) p = multiply(c, p);
    return out;
  }

  /// A vertex at distance n from the identity: s0 s1 s0 s1 ...
  static Point zigzag(int n) {
    Point p;
    for (int i = 0; i < n; ++i) p.push_back(static_cast<std::uint8_t>(i % 2));
    return p;
  }

  static std::string format(const Point& p) {
    if (p.empty()) return "1";
    std::string s;
    for (auto l : p) s += static_cast<char>('0' + l);
    return s;
  }
};

/// The integers with |a − b|; isometries are x ↦ sign·x + shift.
struct IntegerLine {
  using Point = long;
  struct Isometry {
    long shift = 0;
    int sign = 1;
  };

  long distance(long a, long b) const { return a > b ? a - b : b - a; }
  std::vector<long> geodesic(long a, long b) const {
    std::vector<long> out{a};
    while (a != b) out.push_back(a += a < b ? 1 : -1);
    return out;
  }
  long apply(const Isometry& g, long x) const { return g.sign * x + g.shift; }
};

/// (y,z)_x = ½(d(y,x) + d(z,x) − d(y,z)).
template <class Space, class P>
Rational gromov_product(const Space& s, const P& x, const P& y, const P& z) {
  return Rational(s.distance(y, x) + s.distance(z, x) - s.distance(y, z), 2);
}

/// Least δ with d(x,z)+d(y,w) ≤ max{d(x,y)+d(z,w), d(x,w)+d(y,z)} + 2δ for all quadruples of `pts`.
template <class Space, class P>
Rational delta_from_quadruples(const Space& s, const std::vector<P>& pts) {
  const std::size_t n = pts.size();
  std::vector<long> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = s.distance(pts[i], pts[j]);
  long worst = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t e = c + 1; e < n; ++e) {
          long s1 = d[a * n + b] + d[c * n + e], s2 = d[a * n + c] + d[b * n + e], s3 = d[a * n + e] + d[b * n + c];
          long hi = std::max({s1, s2, s3}), lo = std::min({s1, s2, s3});
          long mid = s1 + s2 + s3 - hi - lo;
          worst = std::max(worst, hi - mid);
        }
  return Rational(worst, 2);
}

inline Rational delta_from_quadruples(const FiniteGraphSpace& s) { return delta_from_quadruples(s, s.points()); }

/// Smallest and largest d(x, γ) over all geodesics γ from y to z.
inline std::pair<long, long> distance_to_geodesics(const FiniteGraphSpace& s, int x, int y, int z) {
  auto iv = s.interval(y, z);
  std::sort(iv.begin(), iv.end(), [&](int a, int b) { return s.distance(y, a) < s.distance(y, b); });
  long lo = std::numeric_limits<long>::max();
  std::map<int, long> best;  // max over geodesics y → v of the min distance to x along it
  for (int v : iv) {
    lo = std::min(lo, s.distance(x, v));
    long b = v == y ? s.distance(x, y) : -1;
    for (auto [w, len] : s.neighbours(v)) {
      auto it = best.find(w);
      if (it != best.end() && s.distance(y, w) + len == s.distance(y, v))
        b = std::max(b, std::min(it->second, s.distance(x, v)));
    }
    best[v] = b;
  }
  return {lo, best.at(z)};
}

/// Union of all geodesics between points of Y.
inline std::vector<int> hull(const FiniteGraphSpace& s, const std::vector<int>& ys) {
  std::vector<char> in(static_cast<std::size_t>(s.size()), 0);
  for (int a : ys)
    for (int b : ys)
      for (int w : s.interval(a, b)) in[static_cast<std::size_t>(w)] = 1;
  std::vector<int> out;
  for (int v = 0; v < s.size(); ++v)
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

template <class P>
struct QuasiProjection {
  P point;
  long distance = 0;  // d(x, Y)
  long gap = 0;       // largest distance between two ε-quasi projections
  Rational bound;     // 2c + 4δ + 2ε
  bool within() const { return Rational(gap) <= bound; }
};

/// A nearest point of Y to x (first in the order of Y), with the spread of all ε-quasi projections.
template <class Space, class P>
QuasiProjection<P> quasi_projection(const Space& s, const P& x, const std::vector<P>& ys, long eps, const Rational& delta,
                                    const Rational& c) {
  if (ys.empty()) throw std::invalid_argument("projection onto an empty set");
  long dmin = std::numeric_limits<long>::max();
  for (const auto& y : ys) dmin = std::min(dmin, s.distance(x, y));
  std::vector<const P*> near;
  const P* nearest = nullptr;
  for (const auto& y : ys) {
    if (s.distance(x, y) <= dmin + eps) near.push_back(&y);
    if (!nearest && s.distance(x, y) == dmin) nearest = &y;
  }
  QuasiProjection<P> q{*nearest, dmin, 0, 2 * c + 4 * delta + 2 * Rational(eps)};
  for (auto* a : near)
    for (auto* b : near) q.gap = std::max(q.gap, s.distance(*a, *b));
  return q;
}

enum class QuasiGeodesicVerdict { Holds, Fails, HypothesisViolated };

/// Whether [p, x_p]·[x_p, x_q]·[x_q, q] is a (1, 30δ)-quasigeodesic, under the
/// hypotheses that x_p and x_q are the closest points of [x_p, x_q] to p and q
/// and that d(x_p, x_q) > 100δ.
template <class Space, class P>
QuasiGeodesicVerdict concat_quasigeodesic_check(const Space& s, const P& p, const P& xp, const P& xq, const P& q,
                                                const Rational& delta) {
  if (!(Rational(s.distance(xp, xq)) > 100 * delta)) return QuasiGeodesicVerdict::HypothesisViolated;
  auto mid = s.geodesic(xp, xq);
  for (const auto& m : mid) {
    if (s.distance(p, m) < s.distance(p, xp)) return QuasiGeodesicVerdict::HypothesisViolated;
    if (s.distance(q, m) < s.distance(q, xq)) return QuasiGeodesicVerdict::HypothesisViolated;
  }
  std::vector<P> path = s.geodesic(p, xp);
  for (std::size_t i = 1; i < mid.size(); ++i) path.push_back(mid[i]);
  auto tail = s.geodesic(xq, q);
  for (std::size_t i = 1; i < tail.size(); ++i) path.push_back(tail[i]);
  // arc-length parameters
  std::vector<long> t(path.size(), 0);
  for (std::size_t i = 1; i < path.size(); ++i) t[i] = t[i - 1] + s.distance(path[i - 1], path[i]);
  const Rational eps = 30 * delta;
  for (std::size_t i = 0; i < path.size(); ++i)
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      Rational d = s.distance(path[i], path[j]), len = t[j] - t[i];
      if (d < len - eps || d > len + eps) return QuasiGeodesicVerdict::Fails;
    }
  return QuasiGeodesicVerdict::Holds;
}

}  // namespace ft
