#pragma once

// Bass–Serre trees of marked roses, ends partitions and the intersection criterion.
//
// Every tree here is the Cayley tree R of F_k with the standard basis, possibly
// with a twisted action: T_φ is R with g acting as φ⁻¹(g), the tree of the
// rose re-marked by φ. Vertices are reduced words, and the tree itself is
// never materialized. A boundary point ξ of F_k sits in T_φ at the R-end φ⁻¹(ξ).
//
// An edge is an oriented pair (tail, head) with head = tail·x. Its + side is
// the head side: the ends whose ray from tail starts with x.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "freetwist/automorphism.hpp"
#include "freetwist/boundary.hpp"

namespace ft {

struct TreeEdge {
  Word tail;
  Word head;

  static TreeEdge from(const Word& tail, Letter x) { return {tail, tail * Word{x}}; }

  /// Whether the R-end lies on the head side: the deeper endpoint is a prefix of it iff the end is below.
  bool head_side(const End& xi) const {
    if (head.size() > tail.size()) return xi.has_prefix(head);
    return !xi.has_prefix(tail);
  }

  TreeEdge translate(const Word& g) const { return {g * tail, g * head}; }
  TreeEdge reversed() const { return {head, tail}; }

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
  friend bool operator<(const TreeEdge& a, const TreeEdge& b) {
    if (!(a.tail == b.tail)) return a.tail < b.tail;
    return a.head < b.head;
  }
};

/// Finite radius-W window of the Cayley tree of the rose (vertex count by formula,
/// enumeration guarded by a budget).
class TreeWindow {
 public:
  TreeWindow(int rank, int radius, std::size_t vertex_budget = 5'000'000)
      : rank_(rank), radius_(radius), budget_(vertex_budget) {
    if (radius < 1) throw std::invalid_argument("window radius must be >= 1");
  }

  int rank() const { return rank_; }
  int radius() const { return radius_; }

  /// 1 + 2k((2k−1)^W − 1)/(2k − 2), saturating at SIZE_MAX.
  std::size_t vertex_count() const {
    const unsigned long long q = 2ULL * static_cast<unsigned>(rank_) - 1;
    unsigned long long layer = 2ULL * static_cast<unsigned>(rank_), total = 1;
    for (int r = 1; r <= radius_; ++r) {
      if (total > SIZE_MAX - layer) return SIZE_MAX;
      total += layer;
      if (r < radius_) {
        if (layer > SIZE_MAX / q) return SIZE_MAX;
        layer *= q;
      }
    }
    return total;
  }

  std::vector<Word> vertices() const {
    auto n = vertex_count();
    if (n > budget_)
      throw ResourceError("window of radius " + std::to_string(radius_) + " has " + std::to_string(n) +
                          " vertices, over the budget of " + std::to_string(budget_));
    return all_reduced_words(rank_, static_cast<std::size_t>(radius_));
  }

  /// Edges oriented away from the base vertex.
  std::vector<TreeEdge> edges() const {
    std::vector<TreeEdge> out;
    for (const auto& v : vertices()) {
      if (v.empty()) continue;
      out.push_back({v.prefix(v.size() - 1), v});
    }
    return out;
  }

 private:
  int rank_;
  int radius_;
  std::size_t budget_;
};

/// The tree of the rose re-marked by φ.
class TwistedTree {
 public:
  explicit TwistedTree(Automorphism phi) : phi_(std::move(phi)) {
    if (!phi_.verified()) throw std::logic_error("twisted tree needs a verified automorphism");
    inv_ = phi_.inverse();
  }
  static TwistedTree rose(const Alphabet& al) { return TwistedTree(Automorphism::identity(al)); }

  const Automorphism& phi() const { return phi_; }
  const Automorphism& phi_inverse() const { return inv_; }
  int rank() const { return phi_.rank(); }

  /// Position of ξ in R coordinates.
  End locate(const End& xi) const { return xi.apply(inv_); }
  /// The boundary point at R-position η.
  End unlocate(const End& eta) const { return eta.apply(phi_); }

  /// + iff ξ lies on the head side of e.
  bool side(const TreeEdge& e, const End& xi) const { return e.head_side(locate(xi)); }

  /// The element of F_k acting on R as g acts on this tree.
  Word acting(const Word& g) const { return inv_.apply(g); }

 private:
  Automorphism phi_;
  Automorphism inv_;
};

/// Invariant line of g in a tree: R-line of b = φ⁻¹(g) = p·r·p⁻¹ through p.
struct Axis {
  Word element;
  Word conjugator;  // p
  Word core;        // r, cyclically reduced
  End plus;         // g^{+∞}
  End minus;        // g^{−∞}

  std::size_t period() const { return core.size(); }

  /// Vertex at signed position i along the line (position 0 is p).
  Word vertex(long i) const {
    Word w;
    const long n = static_cast<long>(core.size());
    if (i >= 0) {
      for (long s = 0; s < i; ++s) w.push(core[static_cast<std::size_t>(s % n)]);
    } else {
      Word inv = core.inverse();
      for (long s = 0; s < -i; ++s) w.push(inv[static_cast<std::size_t>(s % n)]);
    }
    return conjugator * w;
  }

  /// Edge between positions i and i+1, + side toward g^{+∞}.
  TreeEdge edge(long i) const { return {vertex(i), vertex(i + 1)}; }

  /// Vertices of the line within distance W of the base.
  std::vector<Word> clipped(int W) const {
    std::vector<Word> out;
    long span = W + static_cast<long>(conjugator.size()) + 1;
    for (long i = -span; i <= span; ++i) {
      Word v = vertex(i);
      if (static_cast<int>(v.size()) <= W) out.push_back(v);
    }
    return out;
  }
};

inline Axis axis(const TwistedTree& T, const Word& g, int W) {
  if (g.empty()) throw std::invalid_argument("axis of the identity");
  Word b = T.acting(g);
  auto cr = cyclic_reduce(b);
  if (cr.conjugator.size() + cr.core.size() > static_cast<std::size_t>(W))
    throw ResourceError("window too small for one period of the axis: need W >= " +
                        std::to_string(cr.conjugator.size() + cr.core.size()));
  return Axis{g, cr.conjugator, cr.core, End::forward(g), End::backward(g)};
}

inline bool edge_separates_axis(const TwistedTree& T, const TreeEdge& e, const Axis& A) {
  return T.side(e, A.plus) != T.side(e, A.minus);
}

/// Signed position of the nearest-point projection of an R-end onto the line of
/// the cyclically reduced r through the base; ±kInfinite at the line's own ends.
inline long line_projection(const Word& r, const End& eta) {
  constexpr long kInf = static_cast<long>(End::kInfinite >> 2);
  std::size_t fwd = common_prefix(eta, End::forward(r));
  if (fwd == End::kInfinite) return kInf;
  if (fwd > 0) return static_cast<long>(fwd);
  std::size_t bwd = common_prefix(eta, End::backward(r));
  if (bwd == End::kInfinite) return -kInf;
  return -static_cast<long>(bwd);
}

/// Projection index of a boundary point onto the axis in T.
inline long axis_projection(const TwistedTree& T, const Axis& A, const End& xi) {
  return line_projection(A.core, T.locate(xi).translate(A.conjugator.inverse()));
}

struct CoreSquareCertificate {
  TreeEdge e1;
  TreeEdge e2;
  // corners (+,+), (+,−), (−,+), (−,−)
  std::array<End, 4> witness;

  std::string to_text(const Alphabet& al) const {
    std::string s = "e1 " + al.format(e1.tail) + " -> " + al.format(e1.head) + "\ne2 " + al.format(e2.tail) +
                    " -> " + al.format(e2.head) + "\n";
    const char* names[4] = {"++", "+-", "-+", "--"};
    for (int c = 0; c < 4; ++c) s += std::string(names[c]) + " " + witness[static_cast<std::size_t>(c)].to_string(al) + "\n";
    return s;
  }
};

inline int corner_index(bool s1, bool s2) { return (s1 ? 0 : 2) + (s2 ? 0 : 1); }

/// Intersection criterion on a finite witness pool: a certificate iff every corner has a witness.
inline std::optional<CoreSquareCertificate> core_square(const TwistedTree& T1, const TreeEdge& e1,
                                                        const TwistedTree& T2, const TreeEdge& e2,
                                                        const std::vector<End>& pool) {
  std::array<std::optional<End>, 4> found;
  int missing = 4;
  for (const auto& xi : pool) {
    int c = corner_index(T1.side(e1, xi), T2.side(e2, xi));
    if (!found[static_cast<std::size_t>(c)]) {
      found[static_cast<std::size_t>(c)] = xi;
      if (--missing == 0) break;
    }
  }
  if (missing) return std::nullopt;
  return CoreSquareCertificate{e1, e2, {*found[0], *found[1], *found[2], *found[3]}};
}

/// Re-checks a certificate by tracing each witness ray from the edge's tail.
inline bool verify_certificate(const TwistedTree& T1, const TwistedTree& T2, const CoreSquareCertificate& cert) {
  auto traced_side = [](const TwistedTree& T, const TreeEdge& e, const End& xi) {
    Word step = e.tail.inverse() * e.head;
    if (step.size() != 1) return false;
    End from_tail = T.locate(xi).translate(e.tail.inverse());
    return from_tail.at(0) == step[0];
  };
  for (int c = 0; c < 4; ++c) {
    const End& xi = cert.witness[static_cast<std::size_t>(c)];
    bool s1 = traced_side(T1, cert.e1, xi), s2 = traced_side(T2, cert.e2, xi);
    if (corner_index(s1, s2) != c) return false;
  }
  return true;
}

/// Endpoints ω^{±∞} of all nontrivial reduced words of length ≤ L, deduplicated.
inline std::vector<End> word_endpoints(int rank, std::size_t L) {
  std::set<End> s;
  for (const auto& w : all_reduced_words(rank, L, 1)) s.insert(End::forward(w));
  return {s.begin(), s.end()};
}

/// Default pool: endpoints of words ≤ L, placed in each tree's own coordinates.
inline std::vector<End> default_pool(const TwistedTree& T1, const TwistedTree& T2, std::size_t L) {
  std::set<End> s;
  for (const auto& eta : word_endpoints(T1.rank(), L)) {
    s.insert(T1.unlocate(eta));
    s.insert(T2.unlocate(eta));
  }
  return {s.begin(), s.end()};
}

struct CoreVolumeResult {
  std::size_t squares = 0;
  std::vector<CoreSquareCertificate> certificates;
};

/// Orbit-distinct certified squares: e1 runs over the k base edges of T1 (one per
/// edge orbit, stabilizers are trivial), e2 over the edges of the radius-W window.
inline CoreVolumeResult core_volume_lower_bound(const TwistedTree& T1, const TwistedTree& T2, int W, std::size_t L) {
  TreeWindow win(T1.rank(), W);
  auto pool = default_pool(T1, T2, L);
  // precompute positions once
  std::vector<End> in1, in2;
  for (const auto& xi : pool) {
    in1.push_back(T1.locate(xi));
    in2.push_back(T2.locate(xi));
  }
  CoreVolumeResult res;
  auto e2s = win.edges();
  for (int x = 0; x < T1.rank(); ++x) {
    TreeEdge e1 = TreeEdge::from(Word{}, letter_for(x));
    std::vector<char> side1(pool.size());
    for (std::size_t p = 0; p < pool.size(); ++p) side1[p] = e1.head_side(in1[p]);
    for (const auto& e2 : e2s) {
      std::array<int, 4> wit{-1, -1, -1, -1};
      int missing = 4;
      for (std::size_t p = 0; p < pool.size() && missing; ++p) {
        int c = corner_index(side1[p], e2.head_side(in2[p]));
        if (wit[static_cast<std::size_t>(c)] < 0) {
          wit[static_cast<std::size_t>(c)] = static_cast<int>(p);
          --missing;
        }
      }
      if (missing) continue;
      ++res.squares;
      CoreSquareCertificate cert{e1, e2, {}};
      for (int c = 0; c < 4; ++c) cert.witness[static_cast<std::size_t>(c)] = pool[static_cast<std::size_t>(wit[static_cast<std::size_t>(c)])];
      res.certificates.push_back(std::move(cert));
    }
  }
  return res;
}

struct RelativeTwistResult {
  long value = 0;                    // certified lower bound for tw_a
  long edge1 = 0, edge2 = 0;         // axis positions i (T1) and j (T2) of the witnessing pair
  long shift = 0;                    // k: (a^k e1, e2) is also a square
  std::size_t squares = 0;           // squares found among axis edge pairs
  std::optional<CoreSquareCertificate> first, translated;
};

/// Witness pool for the relative twist: for each tree, ends that leave its axis at
/// a vertex within L of the base along short rays w^{±∞} (|w| ≤ branch_len),
/// mapped to boundary points; plus the axis endpoints.
inline std::vector<End> axis_pool(const TwistedTree& T, const Axis& A, long L, std::size_t branch_len) {
  std::vector<End> rays;
  for (const auto& w : all_cyclic_words(T.rank(), branch_len)) {
    rays.push_back(End::forward(w.word()));
    rays.push_back(End::backward(w.word()));
  }
  std::set<End> s;
  for (long i = -L; i <= L; ++i) {
    Word v = A.vertex(i);
    for (const auto& ray : rays) s.insert(T.unlocate(ray.translate(v)));
  }
  return {s.begin(), s.end()};
}

/// Largest k such that for some axis edges e1 = edge i of T1 and e2 = edge j of
/// T2 (|i|, |j| < W) both (e1, e2) and (a^k e1, e2) satisfy the intersection
/// criterion on the witness pool. Sound lower bound for tw_a(T1, T2).
inline RelativeTwistResult relative_twist_lower_bound(const TwistedTree& T1, const TwistedTree& T2, const Word& a,
                                                      int W, long L, std::size_t branch_len = 2) {
  Axis A1 = axis(T1, a, W), A2 = axis(T2, a, W);
  std::set<End> pool_set;
  for (const auto& xi : axis_pool(T1, A1, L, branch_len)) pool_set.insert(xi);
  for (const auto& xi : axis_pool(T2, A2, L, branch_len)) pool_set.insert(xi);
  pool_set.insert(A1.plus);
  pool_set.insert(A1.minus);
  std::vector<End> pool(pool_set.begin(), pool_set.end());

  struct Proj {
    long p1, p2;
    std::size_t idx;
  };
  std::vector<Proj> pr;
  pr.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    pr.push_back({axis_projection(T1, A1, pool[i]), axis_projection(T2, A2, pool[i]), i});
  std::sort(pr.begin(), pr.end(), [](const Proj& x, const Proj& y) { return x.p1 < y.p1; });

  // For edge i the + side of T1 is {p1 > i}. Prefix/suffix extrema of p2 give the corners.
  const std::size_t m = pr.size();
  std::vector<long> pre_min(m + 1), pre_max(m + 1), suf_min(m + 1), suf_max(m + 1);
  std::vector<std::size_t> pre_min_at(m + 1, 0), pre_max_at(m + 1, 0), suf_min_at(m + 1, 0), suf_max_at(m + 1, 0);
  constexpr long kBig = static_cast<long>(End::kInfinite >> 1);
  pre_min[0] = kBig;
  pre_max[0] = -kBig;
  for (std::size_t t = 0; t < m; ++t) {
    pre_min[t + 1] = pre_min[t], pre_min_at[t + 1] = pre_min_at[t];
    pre_max[t + 1] = pre_max[t], pre_max_at[t + 1] = pre_max_at[t];
    if (pr[t].p2 < pre_min[t + 1]) pre_min[t + 1] = pr[t].p2, pre_min_at[t + 1] = pr[t].idx;
    if (pr[t].p2 > pre_max[t + 1]) pre_max[t + 1] = pr[t].p2, pre_max_at[t + 1] = pr[t].idx;
  }
  suf_min[m] = kBig;
  suf_max[m] = -kBig;
  for (std::size_t t = m; t-- > 0;) {
    suf_min[t] = suf_min[t + 1], suf_min_at[t] = suf_min_at[t + 1];
    suf_max[t] = suf_max[t + 1], suf_max_at[t] = suf_max_at[t + 1];
    if (pr[t].p2 < suf_min[t]) suf_min[t] = pr[t].p2, suf_min_at[t] = pr[t].idx;
    if (pr[t].p2 > suf_max[t]) suf_max[t] = pr[t].p2, suf_max_at[t] = pr[t].idx;
  }
  auto split = [&](long i) {  // first position with p1 > i
    return static_cast<std::size_t>(
        std::upper_bound(pr.begin(), pr.end(), i, [](long v, const Proj& x) { return v < x.p1; }) - pr.begin());
  };
  auto square = [&](long i, long j, std::array<std::size_t, 4>* wit) {
    std::size_t s = split(i);
    bool pp = suf_max[s] > j, pm = suf_min[s] <= j, mp = pre_max[s] > j, mm = pre_min[s] <= j;
    if (!(pp && pm && mp && mm)) return false;
    if (wit) *wit = {suf_max_at[s], suf_min_at[s], pre_max_at[s], pre_min_at[s]};
    return true;
  };

  RelativeTwistResult res;
  const long period = static_cast<long>(A1.period());
  bool any = false;
  for (long j = -W; j < W; ++j) {
    std::map<long, std::pair<long, long>> span;  // residue of i mod period -> (min i, max i)
    for (long i = -W; i < W; ++i) {
      if (!square(i, j, nullptr)) continue;
      ++res.squares;
      long r = ((i % period) + period) % period;
      auto it = span.find(r);
      if (it == span.end())
        span[r] = {i, i};
      else
        it->second.second = i;
    }
    for (auto& [r, mm] : span) {
      long k = (mm.second - mm.first) / period;
      if (!any || k > res.value) {
        any = true;
        res.value = k;
        res.edge1 = mm.first;
        res.edge2 = j;
        res.shift = k;
      }
    }
  }
  if (!any) return res;
  std::array<std::size_t, 4> w1{}, w2{};
  square(res.edge1, res.edge2, &w1);
  square(res.edge1 + res.shift * period, res.edge2, &w2);
  auto cert = [&](long i, const std::array<std::size_t, 4>& w) {
    return CoreSquareCertificate{A1.edge(i), A2.edge(res.edge2), {pool[w[0]], pool[w[1]], pool[w[2]], pool[w[3]]}};
  };
  res.first = cert(res.edge1, w1);
  res.translated = cert(res.edge1 + res.shift * period, w2);
  return res;
}

}  // namespace ft
