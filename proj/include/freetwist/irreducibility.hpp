#pragma once

// Evidence for full irreducibility and atoroidality: transition matrices with
// Perron-Frobenius data, and bounded searches for periodic free factors and
// periodic conjugacy classes. A witness is a proof of reducibility (or of a
// periodic class); finding none only means none exists within the bounds.
//
// Periodicity φ^p(X) ~ X is tested as φ^a(X) ~ φ^-b(X) with a + b = p and
// a, b about p/2, so images never grow beyond the half power.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "freetwist/free_factor.hpp"
#include "freetwist/marked_graph.hpp"
#include "freetwist/splitting.hpp"
#include "freetwist/whitehead.hpp"

namespace ft {

/// Entry (i, j) counts occurrences of generator i (either sign) in φ(x_j).
struct TransitionMatrix {
  int k = 0;
  std::vector<long long> entries;

  long long operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * k + j)]; }
  long long& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * k + j)]; }

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

  static TransitionMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    TransitionMatrix m{static_cast<int>(rows.size()), {}};
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw std::invalid_argument("transition matrix must be square");
      for (auto x : r) {
        if (x < 0) throw std::invalid_argument("transition matrix entries must be nonnegative");
        m.entries.push_back(x);
      }
    }
    return m;
  }

  TransitionMatrix operator*(const TransitionMatrix& o) const {
    TransitionMatrix out{k, std::vector<long long>(entries.size(), 0)};
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        for (int j = 0; j < k; ++j) out(i, j) += (*this)(i, l) * o(l, j);
    return out;
  }

  std::string to_text() const {
    std::ostringstream os;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) os << (j ? " " : "") << (*this)(i, j);
      os << '\n';
    }
    return os.str();
  }
};

inline TransitionMatrix transition_matrix(const Automorphism& phi) {
  const int k = phi.rank();
  TransitionMatrix m{k, std::vector<long long>(static_cast<std::size_t>(k * k), 0)};
  for (int j = 0; j < k; ++j)
    for (Letter l : phi.image(j)) ++m(generator_of(l), j);
  return m;
}

/// M^e > 0 for some e ≤ (k−1)² + 1.
inline bool is_primitive_matrix(const TransitionMatrix& m) {
  const int k = m.k;
  if (k == 0 || std::all_of(m.entries.begin(), m.entries.end(), [](long long x) { return x == 0; }))
    throw std::invalid_argument("zero matrix");
  std::vector<char> pattern(m.entries.size()), power(m.entries.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) pattern[i] = power[i] = m.entries[i] != 0;
  const int bound = (k - 1) * (k - 1) + 1;
  for (int e = 1; e <= bound; ++e) {
    if (std::all_of(power.begin(), power.end(), [](char c) { return c != 0; })) return true;
    std::vector<char> next(power.size(), 0);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        if (power[static_cast<std::size_t>(i * k + l)])
          for (int j = 0; j < k; ++j)
            if (pattern[static_cast<std::size_t>(l * k + j)]) next[static_cast<std::size_t>(i * k + j)] = 1;
    power = std::move(next);
  }
  return false;
}

/// Spectral radius: power iteration for primitive matrices, a dense eigensolver otherwise.
inline double pf_eigenvalue(const TransitionMatrix& m) {
  const int k = m.k;
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = static_cast<double>(m(i, j));
  if (is_primitive_matrix(m)) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(k);
    double lambda = 0;
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd w = a * v;
      double next = w.norm() / v.norm();
      v = w / w.norm();
      if (it > 0 && std::abs(next - lambda) <= 1e-12 * next) return next;
      lambda = next;
    }
    return lambda;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

enum class ObstructionKind { ReducibleWitness, PeriodicClassWitness, NoObstructionFound };

inline const char* to_string(ObstructionKind k) {
  switch (k) {
    case ObstructionKind::ReducibleWitness: return "reducible";
    case ObstructionKind::PeriodicClassWitness: return "periodic-class";
    default: return "no-obstruction";
  }
}

struct SearchBounds {
  int rank_bound = 2;
  std::size_t len_bound = 4;
  int pow_bound = 4;
};

struct SearchOptions {
  int jobs = 1;
  bool first_only = false;
};

struct FactorWitness {
  FreeFactor factor;
  int power = 0;  // least p ≤ pow_bound with φ^p(F) conjugate to F
};

struct ClassWitness {
  CyclicWord word;
  int power = 0;
};

struct ObstructionVerdict {
  ObstructionKind kind = ObstructionKind::NoObstructionFound;
  SearchBounds bounds;
  std::vector<FactorWitness> factors;  // in enumeration order
  std::vector<ClassWitness> classes;
  std::size_t candidates = 0;  // distinct candidates tested
  std::size_t unverified = 0;  // periodic subgroups not certified as free factors
  bool primitive = false;      // of the transition matrix
  double pf = 0;

  bool has_factor(const FreeFactor& f, int power) const {
    return std::any_of(factors.begin(), factors.end(),
                       [&](const FactorWitness& w) { return w.factor == f && w.power == power; });
  }
  bool has_class(const CyclicWord& c, int power) const {
    return std::any_of(classes.begin(), classes.end(),
                       [&](const ClassWitness& w) { return w.word == c && w.power == power; });
  }

  std::string to_text(const Alphabet& al) const {
    std::ostringstream os;
    os << "verdict " << to_string(kind) << '\n';
    os << "bounds rank " << bounds.rank_bound << " len " << bounds.len_bound << " pow " << bounds.pow_bound << '\n';
    os << "candidates " << candidates << '\n';
    for (const auto& w : factors) {
      os << "factor power " << w.power << " basis";
      for (const auto& b : w.factor.basis()) os << ' ' << al.format(b);
      os << '\n';
    }
    for (const auto& w : classes) os << "class power " << w.power << " word " << al.format(w.word.word()) << '\n';
    if (unverified) os << "unverified " << unverified << '\n';
    os << "primitive " << (primitive ? "yes" : "no") << "\npf ";
    os.precision(12);
    os << pf << '\n';
    return os.str();
  }
};

namespace detail {

// φ^j for j ∈ [−back, fwd], computed once.
struct PowerTable {
  std::vector<Automorphism> fwd, back;  // fwd[j] = φ^j, back[j] = φ^−j

  PowerTable(const Automorphism& phi, int pow_bound) {
    const int a = (pow_bound + 1) / 2, b = pow_bound / 2;
    fwd.push_back(Automorphism::identity(phi.alphabet()));
    back.push_back(fwd.front());
    const Automorphism inv = phi.inverse();
    for (int j = 1; j <= a; ++j) fwd.push_back(compose(phi, fwd.back()));
    for (int j = 1; j <= b; ++j) back.push_back(compose(inv, back.back()));
  }

  // Least p ≤ pow_bound with same(φ^a X, φ^−(p−a) X) for some split, or 0.
  template <class Make, class Same>
  int least_period(int pow_bound, const std::vector<char>& allowed, Make make, Same same) const {
    if (std::none_of(allowed.begin(), allowed.end(), [](char c) { return c != 0; })) return 0;
    std::vector<decltype(make(fwd[0]))> f, b;
    for (const auto& g : fwd) f.push_back(make(g));
    for (const auto& g : back) b.push_back(make(g));
    for (int p = 1; p <= pow_bound; ++p)
      for (int a = 0; a <= p && allowed[static_cast<std::size_t>(p)]; ++a) {
        const auto c = static_cast<std::size_t>(p - a);
        if (static_cast<std::size_t>(a) < f.size() && c < b.size() && same(f[static_cast<std::size_t>(a)], b[c])) return p;
      }
    return 0;
  }
};

// Homology: exponent sums, and the action of φ on Z^k.
inline std::vector<long long> abelianize(const Word& w, int k) {
  std::vector<long long> v(static_cast<std::size_t>(k), 0);
  for (Letter l : w) v[static_cast<std::size_t>(generator_of(l))] += l > 0 ? 1 : -1;
  return v;
}

inline std::vector<std::vector<long long>> apply_matrix(const std::vector<std::vector<long long>>& cols,
                                                        const std::vector<std::vector<long long>>& vs) {
  std::vector<std::vector<long long>> out;
  for (const auto& v : vs) {
    std::vector<long long> w(v.size(), 0);
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) w[i] += cols[j][i] * v[j];
    out.push_back(std::move(w));
  }
  return out;
}

inline int lattice_rank(const std::vector<std::vector<long long>>& vs) {
  if (vs.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& v : vs) m.emplace_back(v.begin(), v.end());
  const std::size_t cols = m[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    const auto& top = m[static_cast<std::size_t>(rank)];
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
      Rational f = m[r][c] / top[c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * top[j];
    }
    ++rank;
  }
  return rank;
}

// Integer determinant by Bareiss elimination.
inline Integer determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      sign = -sign;
    }
    for (std::size_t r = c + 1; r < n; ++r)
      for (std::size_t j = c + 1; j < n; ++j) m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
    prev = m[c][c];
  }
  return sign * m[n - 1][n - 1];
}

// The vectors span a direct summand of rank = their number: the maximal minors are coprime.
inline bool spans_summand(const std::vector<std::vector<long long>>& vs) {
  const std::size_t r = vs.size(), k = vs.empty() ? 0 : vs[0].size();
  if (r == 0 || r > k) return false;
  Integer g = 0;
  std::vector<std::size_t> cols(r);
  for (std::size_t i = 0; i < r; ++i) cols[i] = i;
  for (;;) {
    std::vector<std::vector<Integer>> minor(r, std::vector<Integer>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) minor[i][j] = vs[i][cols[j]];
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(determinant(std::move(minor))));
    if (g == 1) return true;
    int p = static_cast<int>(r) - 1;
    while (p >= 0 && cols[static_cast<std::size_t>(p)] == k - r + static_cast<std::size_t>(p)) --p;
    if (p < 0) return false;
    ++cols[static_cast<std::size_t>(p)];
    for (std::size_t q = static_cast<std::size_t>(p) + 1; q < r; ++q) cols[q] = cols[q - 1] + 1;
  }
}

// Powers p ≤ pow_bound for which φ^p preserves the rational span of vs (sending
// each vector to itself when `exact`).
inline std::vector<char> homology_periods(const std::vector<std::vector<long long>>& phi_cols,
                                          const std::vector<std::vector<long long>>& vs, int pow_bound, bool exact) {
  std::vector<char> ok(static_cast<std::size_t>(pow_bound) + 1, 0);
  const int r = lattice_rank(vs);
  auto cur = vs;
  for (int p = 1; p <= pow_bound; ++p) {
    cur = apply_matrix(phi_cols, cur);
    if (exact) {
      ok[static_cast<std::size_t>(p)] = cur == vs;
    } else {
      auto both = vs;
      both.insert(both.end(), cur.begin(), cur.end());
      ok[static_cast<std::size_t>(p)] = lattice_rank(both) == r;
    }
  }
  return ok;
}

inline std::vector<std::vector<long long>> homology_action(const Automorphism& phi) {
  std::vector<std::vector<long long>> cols;
  for (const auto& w : phi.images()) cols.push_back(abelianize(w, phi.rank()));
  return cols;
}

inline CyclicWord class_key(const CyclicWord& w) {
  CyclicWord inv(w.word().inverse());
  return std::min(w, inv);
}

// Runs test(i) for i in [0, n) and keeps results in index order.
template <class Result, class Test>
std::vector<std::optional<Result>> run_indexed(std::size_t n, const SearchOptions& opt, Test test) {
  std::vector<std::optional<Result>> out(n);
  std::atomic<std::size_t> next{0}, first_hit{n};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      if (opt.first_only && i > first_hit.load()) continue;
      out[i] = test(i);
      if (out[i] && opt.first_only) {
        std::size_t cur = first_hit.load();
        while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = test(i);
      if (out[i] && opt.first_only) break;
    }
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (opt.first_only) {
    bool seen = false;
    for (auto& r : out) {
      if (seen) r.reset();
      seen = seen || r.has_value();
    }
  }
  return out;
}

// One of w, w⁻¹ per reduced word of length 1..len, in shortlex order.
inline std::vector<Word> generator_pool(int rank, std::size_t len) {
  std::vector<Word> pool;
  for (const auto& w : all_reduced_words(rank, len, 1))
    if (!(w.inverse() < w)) pool.push_back(w);
  return pool;
}

inline bool certified_free_factor(const FreeFactor& f) {
  if (f.rank() == 1) return is_primitive(f.basis()[0], f.ambient_rank());
  return free_factor_complement(f.basis(), f.ambient_rank(), 2).has_value();
}

}  // namespace detail

/// Conjugacy classes of free factors of rank ≤ rank_bound generated by words of
/// length ≤ len_bound, tested for φ^p-periodicity up to conjugacy.
inline ObstructionVerdict periodic_factor_search(const Automorphism& phi, const SearchBounds& bounds,
                                                 const SearchOptions& opt = {}) {
  if (bounds.rank_bound < 1 || bounds.len_bound < 1 || bounds.pow_bound < 1)
    throw std::invalid_argument("search bounds must be positive");
  const int k = phi.rank();
  ObstructionVerdict v;
  v.bounds = bounds;
  const auto tm = transition_matrix(phi);
  v.primitive = is_primitive_matrix(tm);
  v.pf = pf_eigenvalue(tm);

  // distinct subgroup classes in order of first appearance
  const auto pool = detail::generator_pool(k, bounds.len_bound);
  std::vector<FreeFactor> subgroups;
  std::set<std::vector<int>> seen;
  const int max_rank = std::min(bounds.rank_bound, k - 1);
  for (int r = 1; r <= max_rank; ++r) {
    if (pool.size() < static_cast<std::size_t>(r)) break;
    std::vector<std::size_t> idx(static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (;;) {
      std::vector<Word> gens;
      for (auto i : idx) gens.push_back(pool[i]);
      std::vector<std::vector<long long>> hom;
      for (const auto& g : gens) hom.push_back(detail::abelianize(g, k));
      try {
        if (detail::spans_summand(hom)) {
          auto f = FreeFactor::from_generators(gens, k);
          if (f.rank() == r && seen.insert(f.code()).second) subgroups.push_back(std::move(f));
        }
      } catch (const std::invalid_argument&) {
        // full rank
      }
      int p = r - 1;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == pool.size() - static_cast<std::size_t>(r - p)) --p;
      if (p < 0) break;
      ++idx[static_cast<std::size_t>(p)];
      for (int q = p + 1; q < r; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  v.candidates = subgroups.size();

  const detail::PowerTable powers(phi, bounds.pow_bound);
  const auto action = detail::homology_action(phi);
  std::atomic<std::size_t> unverified{0};
  auto results = detail::run_indexed<FactorWitness>(subgroups.size(), opt, [&](std::size_t i) -> std::optional<FactorWitness> {
    const auto& f = subgroups[i];
    std::vector<std::vector<long long>> hom;
    for (const auto& b : f.basis()) hom.push_back(detail::abelianize(b, k));
    auto allowed = detail::homology_periods(action, hom, bounds.pow_bound, false);
    int p = powers.least_period(
        bounds.pow_bound, allowed,
        [&](const Automorphism& g) {
          std::vector<Word> img;
          for (const auto& b : f.basis()) img.push_back(g.apply(b));
          return FoldedGraph(k, img);
        },
        [](FoldedGraph& x, FoldedGraph& y) { return conjugate_subgroups(x, y); });
    if (p == 0) return std::nullopt;
    if (!detail::certified_free_factor(f)) {
      ++unverified;
      return std::nullopt;
    }
    return FactorWitness{f, p};
  });
  for (auto& r : results)
    if (r) v.factors.push_back(std::move(*r));
  v.unverified = unverified;
  if (!v.factors.empty()) v.kind = ObstructionKind::ReducibleWitness;
  return v;
}

/// Conjugacy classes of non-powers up to length len_bound with φ^p(w) ~ w.
inline ObstructionVerdict periodic_class_search(const Automorphism& phi, std::size_t len_bound, int pow_bound,
                                                const SearchOptions& opt = {}) {
  if (len_bound < 1 || pow_bound < 1) throw std::invalid_argument("search bounds must be positive");
  ObstructionVerdict v;
  v.bounds = {0, len_bound, pow_bound};
  const auto tm = transition_matrix(phi);
  v.primitive = is_primitive_matrix(tm);
  v.pf = pf_eigenvalue(tm);
  std::vector<CyclicWord> words;
  for (auto& c : all_cyclic_words(phi.rank(), len_bound))
    if (!detail::is_proper_power(c.word())) words.push_back(std::move(c));
  v.candidates = words.size();
  const detail::PowerTable powers(phi, pow_bound);
  const auto action = detail::homology_action(phi);
  auto results = detail::run_indexed<ClassWitness>(words.size(), opt, [&](std::size_t i) -> std::optional<ClassWitness> {
    auto allowed = detail::homology_periods(action, {detail::abelianize(words[i].word(), phi.rank())}, pow_bound, true);
    int p = powers.least_period(
        pow_bound, allowed, [&](const Automorphism& g) { return g.apply(words[i]); },
        [](const CyclicWord& x, const CyclicWord& y) { return x == y; });
    if (p == 0) return std::nullopt;
    return ClassWitness{words[i], p};
  });
  for (auto& r : results)
    if (r) v.classes.push_back(std::move(*r));
  if (!v.classes.empty()) v.kind = ObstructionKind::PeriodicClassWitness;
  return v;
}

/// Direct re-check: φ^p(F) is conjugate to F.
inline bool validate_witness(const Automorphism& phi, const FactorWitness& w) {
  auto g = phi.power(w.power);
  std::vector<Word> img;
  for (const auto& b : w.factor.basis()) img.push_back(g.apply(b));
  return FreeFactor::from_generators(img, phi.rank()) == w.factor;
}

/// Direct re-check: φ^p(w) is conjugate to w.
inline bool validate_witness(const Automorphism& phi, const ClassWitness& w) {
  return phi.power(w.power).apply(w.word) == w.word;
}

/// Whether two marked roses are adjacent in the free bases graph: some petal
/// of one is conjugate to a petal of the other or its inverse.
inline bool shared_edge_adjacent(const MarkedGraph& r1, const MarkedGraph& r2) {
  if (r1.vertex_count() != 1 || r2.vertex_count() != 1) throw Error("shared-edge adjacency needs marked roses");
  if (r1.rank() != r2.rank()) throw Error("roses of different rank");
  std::set<CyclicWord> petals;
  for (const auto& w : r1.edge_words()) petals.insert(detail::class_key(CyclicWord(w)));
  for (const auto& w : r2.edge_words())
    if (petals.count(detail::class_key(CyclicWord(w)))) return true;
  return false;
}

}  // namespace ft
