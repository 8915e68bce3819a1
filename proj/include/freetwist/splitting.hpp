#pragma once

// Cyclic splittings of F_k and their Dehn twists.
//
// Amalgam: F_k = A *_<c> B with bases of A and B (|A| + |B| = k + 1) and c in both.
// HNN:     F_k = A *_<c> with stable letter t, t c t⁻¹ = c′, c and c′ in A.
//          A has rank k here (Euler characteristic of a one-loop graph of groups).

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "freetwist/automorphism.hpp"
#include "freetwist/folding.hpp"
#include "freetwist/free_factor.hpp"

namespace ft {

enum class SplittingKind { Amalgam, Hnn };

struct ZSplitting {
  SplittingKind kind = SplittingKind::Amalgam;
  Alphabet alphabet;
  std::vector<Word> A;
  std::vector<Word> B;  // amalgam only
  Word c;
  Word c_prime;     // hnn only
  int stable = -1;  // hnn only: generator index of t

  int rank() const { return alphabet.rank(); }

  /// Line-oriented `key=value` form; see samples/ for examples.
  static ZSplitting parse(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](const std::string& s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
      kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
      std::optional<std::string> out;
      for (auto& [k, v] : kv)
        if (k == key) {
          if (out) throw ParseError("duplicate key '" + key + "'");
          out = v;
        }
      return out;
    };
    static const std::vector<std::string> known{"rank", "kind", "gens", "A", "B", "edge", "edge_image", "stable"};
    for (auto& [k, v] : kv)
      if (std::find(known.begin(), known.end(), k) == known.end()) throw ParseError("unknown key '" + k + "'");
    auto need = [&](const std::string& key) {
      auto v = get(key);
      if (!v) throw ParseError("missing key '" + key + "'");
      return *v;
    };
    auto split = [&](const std::string& s) {
      std::vector<std::string> parts;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) parts.push_back(trim(item));
      return parts;
    };

    ZSplitting z;
    int rank = 0;
    try {
      rank = std::stoi(need("rank"));
    } catch (const std::logic_error&) {
      throw ParseError("rank is not an integer");
    }
    std::string kind = need("kind");
    if (kind == "amalgam")
      z.kind = SplittingKind::Amalgam;
    else if (kind == "hnn")
      z.kind = SplittingKind::Hnn;
    else
      throw ParseError("kind must be amalgam or hnn");
    if (rank < 2 || rank > 25) throw ParseError("rank out of range");

    if (auto g = get("gens")) {
      try {
        z.alphabet = Alphabet(split(*g));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
      if (z.alphabet.rank() != rank) throw ParseError("gens does not list rank names");
    } else if (z.kind == SplittingKind::Amalgam) {
      z.alphabet = Alphabet::standard(rank);
    } else {
      auto names = Alphabet::standard(rank).names();
      names.back() = get("stable").value_or("t");
      z.alphabet = Alphabet(names);
    }
    auto words = [&](const std::string& s) {
      std::vector<Word> out;
      for (auto& p : split(s)) out.push_back(z.alphabet.parse(p));
      return out;
    };
    z.A = words(need("A"));
    z.c = z.alphabet.parse(need("edge"));
    if (z.kind == SplittingKind::Amalgam) {
      z.B = words(need("B"));
      if (get("edge_image") || get("stable")) throw ParseError("edge_image/stable only apply to hnn splittings");
    } else {
      if (get("B")) throw ParseError("B only applies to amalgam splittings");
      z.c_prime = z.alphabet.parse(need("edge_image"));
      std::string t = need("stable");
      z.stable = z.alphabet.index_of(t);
      if (z.stable < 0) throw ParseError("stable letter '" + t + "' is not a generator");
    }
    return z;
  }

  static ZSplitting parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse(in);
  }

  std::string to_text() const {
    std::ostringstream os;
    auto list = [&](const std::vector<Word>& ws) {
      std::string s;
      for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? ", " : "") + alphabet.format(ws[i]);
      return s;
    };
    std::string gens;
    for (int i = 0; i < rank(); ++i) gens += (i ? "," : "") + alphabet.name(i);
    os << "rank=" << rank() << "\nkind=" << (kind == SplittingKind::Amalgam ? "amalgam" : "hnn") << "\ngens=" << gens
       << "\nA=" << list(A) << '\n';
    if (kind == SplittingKind::Amalgam)
      os << "B=" << list(B) << "\nedge=" << alphabet.format(c) << '\n';
    else
      os << "edge=" << alphabet.format(c) << "\nedge_image=" << alphabet.format(c_prime)
         << "\nstable=" << alphabet.name(stable) << '\n';
    return os.str();
  }
};

struct SplittingBounds {
  std::size_t witness_length = 8;  // ambient length bound for witness candidates
};

struct SplittingReport {
  bool generates = false;
  bool rank_arithmetic = false;
  bool edge_membership = false;
  bool edge_proper_power = false;
  /// Side whose vertex group is certified to be a proper free factor ("A", "B"); empty if unverified.
  std::string factor_side;
  /// Amalgam: B0 with (twisted side) = <c> * <B0>. HNN: A0 with A = <A0, c′>, F_k = <A0> * <t>.
  std::vector<Word> witness;
  std::vector<std::string> notes;

  bool witnessed() const { return !factor_side.empty(); }

  std::string to_text(const Alphabet& al) const {
    std::ostringstream os;
    os << "generation: " << (generates ? "ok" : "FAIL") << '\n'
       << "rank arithmetic: " << (rank_arithmetic ? "ok" : "FAIL") << '\n'
       << "edge membership: " << (edge_membership ? "ok" : "FAIL") << '\n'
       << "edge word proper power: " << (edge_proper_power ? "yes" : "no") << '\n';
    if (witnessed()) {
      os << "witness: factor side " << factor_side << ", complement {";
      for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? ", " : "") << al.format(witness[i]);
      os << "}\n";
    } else {
      os << "witness: unverified within bounds\n";
    }
    for (const auto& n : notes) os << "note: " << n << '\n';
    return os.str();
  }
};

/// A splitting that passed validation. Twists and projections take this type.
class ValidatedSplitting {
 public:
  const ZSplitting& data() const { return z_; }
  const SplittingReport& report() const { return report_; }
  /// Amalgam: the conjugated side's basis. HNN: empty.
  const std::vector<Word>& twisted_side() const { return z_.kind == SplittingKind::Amalgam && swapped_ ? z_.A : z_.B; }
  const std::vector<Word>& fixed_side() const { return z_.kind == SplittingKind::Amalgam && swapped_ ? z_.B : z_.A; }
  bool swapped() const { return swapped_; }

 private:
  friend ValidatedSplitting validate_splitting(const ZSplitting&, const SplittingBounds&);
  ZSplitting z_;
  SplittingReport report_;
  bool swapped_ = false;
};

namespace detail {

inline bool is_proper_power(const Word& w) {
  auto core = cyclic_reduce(w).core.letters();
  const std::size_t n = core.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = core[i] == core[i - p];
    if (periodic) return true;
  }
  return false;
}

/// Candidate elements of <gens>: the generators, then products of two, as ambient words ≤ max_len.
inline std::vector<Word> subgroup_pool(const std::vector<Word>& gens, std::size_t max_len) {
  std::vector<Word> pool;
  auto add = [&](const Word& w) {
    if (w.empty() || w.size() > max_len) return;
    for (const auto& p : pool)
      if (p == w || p == w.inverse()) return;
    pool.push_back(w);
  };
  for (const auto& g : gens) add(g);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (i == j) continue;
      add(gens[i] * gens[j]);
      add(gens[i] * gens[j].inverse());
    }
  return pool;
}

/// Enumerates size-`need` subsets of `pool`, basis-deletions first.
template <class Pred>
std::optional<std::vector<Word>> search_subsets(const std::vector<Word>& pool, int need, Pred ok) {
  if (need < 0 || static_cast<std::size_t>(need) > pool.size()) return std::nullopt;
  std::vector<std::size_t> idx(static_cast<std::size_t>(need));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (;;) {
    std::vector<Word> pick;
    for (auto i : idx) pick.push_back(pool[i]);
    if (ok(pick)) return pick;
    int p = need - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == pool.size() - static_cast<std::size_t>(need - p)) --p;
    if (p < 0) return std::nullopt;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < need; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
}

inline std::vector<Word> concat(std::vector<Word> a, const std::vector<Word>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// B0 with <{c} ∪ B0> = <side> and <other ∪ B0> = F_k (so other is a free factor).
inline std::optional<std::vector<Word>> shenitzer_witness(const std::vector<Word>& side, const std::vector<Word>& other,
                                                          const Word& c, int rank, std::size_t max_len) {
  const int need = static_cast<int>(side.size()) - 1;
  return search_subsets(subgroup_pool(side, max_len), need, [&](const std::vector<Word>& b0) {
    return same_subgroup(concat({c}, b0), side, rank) && generates_free_group(concat(other, b0), rank);
  });
}

}  // namespace detail

inline ValidatedSplitting validate_splitting(const ZSplitting& z, const SplittingBounds& bounds = {}) {
  ValidatedSplitting v;
  v.z_ = z;
  auto& r = v.report_;
  const int k = z.rank();
  if (z.c.empty()) throw Error("edge word is trivial");
  if (!(cyclic_reduce(z.c).core == z.c)) throw Error("edge word is not cyclically reduced");
  r.edge_proper_power = detail::is_proper_power(z.c);
  if (r.edge_proper_power) r.notes.push_back("edge word is a proper power");

  if (z.kind == SplittingKind::Amalgam) {
    r.generates = generates_free_group(detail::concat(z.A, z.B), k);
    if (!r.generates) throw Error("A and B do not generate F_k");
    FoldedGraph ga(k, z.A), gb(k, z.B);
    r.rank_arithmetic = static_cast<int>(z.A.size() + z.B.size()) == k + 1 &&
                        ga.subgroup_rank() == static_cast<int>(z.A.size()) &&
                        gb.subgroup_rank() == static_cast<int>(z.B.size());
    if (!r.rank_arithmetic) throw Error("rank arithmetic fails: need |A| + |B| = k + 1 with free bases");
    r.edge_membership = ga.contains(z.c) && gb.contains(z.c);
    if (!r.edge_membership) throw Error("edge word is not in both vertex groups");
    if (auto w = detail::shenitzer_witness(z.B, z.A, z.c, k, bounds.witness_length)) {
      r.factor_side = "A";
      r.witness = *w;
    } else if (auto w2 = detail::shenitzer_witness(z.A, z.B, z.c, k, bounds.witness_length)) {
      r.factor_side = "B";
      r.witness = *w2;
      v.swapped_ = true;
      r.notes.push_back("roles of A and B swapped: twist conjugates A");
    }
  } else {
    if (z.stable < 0 || z.stable >= k) throw Error("stable letter missing");
    Word t = Word::generator(z.stable);
    r.generates = generates_free_group(detail::concat(z.A, {t}), k);
    if (!r.generates) throw Error("A and t do not generate F_k");
    FoldedGraph ga(k, z.A);
    r.rank_arithmetic = static_cast<int>(z.A.size()) == k && ga.subgroup_rank() == k;
    if (!r.rank_arithmetic) throw Error("rank arithmetic fails: HNN vertex group needs a free basis of k elements");
    r.edge_membership = ga.contains(z.c) && ga.contains(z.c_prime) && t * z.c * t.inverse() == z.c_prime;
    if (!r.edge_membership) throw Error("edge words not in A or t c t' != c'");
    // Swarup form: a basis A0 of k−1 elements with c ∈ ⟨A0⟩ and F_k = ⟨A0⟩ * ⟨t⟩
    auto pool = detail::subgroup_pool(z.A, bounds.witness_length);
    auto a0 = detail::search_subsets(pool, k - 1, [&](const std::vector<Word>& cand) {
      FoldedGraph g0(k, cand);
      return g0.contains(z.c) && same_subgroup(detail::concat(cand, {z.c_prime}), z.A, k) &&
             generates_free_group(detail::concat(cand, {t}), k);
    });
    if (a0) {
      r.factor_side = "A0";
      r.witness = *a0;
    }
  }
  if (!r.witnessed()) r.notes.push_back("no free-factor witness within bounds");
  return v;
}

/// D^n: fixes the fixed side (or A), conjugates the other side by c^n (or t ↦ t c^n).
inline Automorphism twist_power(const ValidatedSplitting& vs, long n) {
  const ZSplitting& z = vs.data();
  const int k = z.rank();
  auto images_for = [&](long m) {
    Word cm = z.c.power(m);
    std::vector<Word> petals, petal_images;
    if (z.kind == SplittingKind::Amalgam) {
      for (const auto& a : vs.fixed_side()) {
        petals.push_back(a);
        petal_images.push_back(a);
      }
      for (const auto& b : vs.twisted_side()) {
        petals.push_back(b);
        petal_images.push_back(cm * b * cm.inverse());
      }
    } else {
      for (const auto& a : z.A) {
        petals.push_back(a);
        petal_images.push_back(a);
      }
      Word t = Word::generator(z.stable);
      petals.push_back(t);
      petal_images.push_back(t * cm);
    }
    auto coords = express_generators(petals, k);
    if (!coords) throw Error("vertex bases do not generate F_k");
    std::vector<Word> out;
    for (const auto& t : *coords) out.push_back(Automorphism::substitute(petal_images, t));
    return out;
  };
  return Automorphism::with_inverse(z.alphabet, images_for(n), images_for(-n));
}

inline Automorphism dehn_twist(const ValidatedSplitting& vs) { return twist_power(vs, 1); }

/// The vertex group certified as a proper free factor (amalgam), or the Swarup A0 (HNN).
inline std::optional<FreeFactor> projected_factor(const ValidatedSplitting& vs) {
  const auto& r = vs.report();
  if (!r.witnessed()) return std::nullopt;
  const int k = vs.data().rank();
  if (vs.data().kind == SplittingKind::Amalgam) return FreeFactor::from_generators(vs.fixed_side(), k);
  return FreeFactor::from_generators(r.witness, k);
}

/// Basis words of the projected factor as stored in the splitting (fixed elementwise by the twist).
inline std::vector<Word> projected_factor_basis(const ValidatedSplitting& vs) {
  if (vs.data().kind == SplittingKind::Amalgam) return vs.fixed_side();
  return vs.report().witness;
}

}  // namespace ft
