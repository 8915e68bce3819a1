#pragma once

// Ping-pong certificates for a pair of isometries with far-apart, bounded
// almost fixed sets.

#include <atomic>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "freetwist/hyperbolic.hpp"

namespace ft {

/// Word in two letters as alternating (letter, exponent) syllables; letter is 0 or 1.
using SyllableWord = std::vector<std::pair<int, int>>;

inline int syllable_length(const SyllableWord& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].first != 0 && w[i].first != 1) throw std::invalid_argument("letters are 0 and 1");
    if (w[i].second == 0) throw std::invalid_argument("zero exponent in normal form");
    if (i > 0 && w[i].first == w[i - 1].first) throw std::invalid_argument("syllables must alternate");
  }
  return static_cast<int>(w.size());
}

inline std::string format_syllables(const SyllableWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (auto [l, e] : w) {
    if (!s.empty()) s += ' ';
    s += l == 0 ? "f1" : "f2";
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

struct PingPongConfig {
  long C = 4;                            // radius of almost fixed sets
  std::optional<Rational> delta;         // computed from the sample when absent
  std::optional<Rational> local_length;  // ℓ_loc; defaults to 100δ
  int max_syllables = 8;                 // L_w
  int max_power = 3;                     // n_max
  std::optional<long> diameter_bound;    // C′, when the caller wants it enforced
  int jobs = 1;
  bool keep_words = false;
};

struct WordRecord {
  SyllableWord word;
  int syllables = 0;
  long displacement = 0;               // d(ωx, x)
  std::optional<Rational> translation;  // min over m ∈ {1,2,4} of d(ω^m x, x)/m, mixed words only
};

enum class PingPongVerdict { Certified, Failed, HypothesesNotMet };

inline const char* to_string(PingPongVerdict v) {
  switch (v) {
    case PingPongVerdict::Certified: return "certified";
    case PingPongVerdict::Failed: return "failed";
    default: return "hypotheses-not-met";
  }
}

struct PingPongCertificate {
  PingPongVerdict verdict = PingPongVerdict::HypothesesNotMet;
  std::string reason;
  Rational delta, C1;
  long C = 0;
  std::size_t sample_size = 0;
  std::size_t fixed_count[2] = {0, 0};
  long diameter[2] = {0, 0};
  long separation = 0;
  std::string base_point;
  std::vector<int> skipped_powers[2];  // powers acting trivially on the sample
  std::size_t words_tested = 0;
  long min_excess = 0;                       // min of d(ωx,x) − syllable length
  std::optional<Rational> min_translation;  // over mixed words
  std::optional<WordRecord> witness;         // first failure
  std::vector<WordRecord> words;

  std::string to_text() const {
    std::ostringstream os;
    os << "verdict " << to_string(verdict) << '\n';
    if (!reason.empty()) os << "reason " << reason << '\n';
    os << "delta " << ft::to_string(delta) << "\nC " << C << "\nC1 " << ft::to_string(C1) << '\n';
    os << "sample " << sample_size << '\n';
    for (int i = 0; i < 2; ++i) {
      os << "fixed" << i + 1 << " " << fixed_count[i] << " diameter " << diameter[i] << " skipped_powers";
      for (int p : skipped_powers[i]) os << ' ' << p;
      os << '\n';
    }
    os << "separation " << separation << "\nbase " << base_point << '\n';
    os << "words " << words_tested << "\nmin_excess " << min_excess << '\n';
    if (min_translation) os << "min_translation " << ft::to_string(*min_translation) << '\n';
    if (witness) os << "witness " << format_syllables(witness->word) << " displacement " << witness->displacement << '\n';
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "word,syllables,displacement,translation\n";
    for (const auto& w : words)
      os << format_syllables(w.word) << ',' << w.syllables << ',' << w.displacement << ','
         << (w.translation ? ft::to_string(*w.translation) : std::string{}) << '\n';
    return os.str();
  }
};

inline FiniteGraphSpace::Isometry inverse_of(const FiniteGraphSpace&, const FiniteGraphSpace::Isometry& g) {
  FiniteGraphSpace::Isometry inv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) inv[static_cast<std::size_t>(g[i])] = static_cast<int>(i);
  return inv;
}

inline IntegerLine::Isometry inverse_of(const IntegerLine&, const IntegerLine::Isometry& g) {
  return {-g.sign * g.shift, g.sign};
}

inline CubicTree::Isometry inverse_of(const CubicTree&, const CubicTree::Isometry& g) { return {g.center, -g.turn}; }

namespace detail {

inline std::string point_name(const int& p) { return std::to_string(p); }
inline std::string point_name(const long& p) { return std::to_string(p); }
inline std::string point_name(const CubicTree::Point& p) { return CubicTree::format(p); }

}  // namespace detail

template <class P>
struct AlmostFixedSample {
  std::vector<P> members;
  long diameter = 0;
  /// Powers acting as the identity on the sample (only when some power does not).
  std::vector<int> skipped_powers;
};

/// {x in pts : d(x, φⁿx) ≤ C for some 1 ≤ n ≤ n_max}, negative powers being
/// covered by symmetry. For a finite-order φ the powers that act trivially
/// are left out, since they would put every point in the set.
template <class Space, class Iso, class P = typename Space::Point>
AlmostFixedSample<P> almost_fixed_sample(const Space& s, const Iso& phi, const std::vector<P>& pts, long C, int n_max) {
  AlmostFixedSample<P> out;
  std::vector<std::vector<P>> images(static_cast<std::size_t>(n_max) + 1, pts);
  for (int n = 1; n <= n_max; ++n)
    for (std::size_t i = 0; i < pts.size(); ++i)
      images[static_cast<std::size_t>(n)][i] = s.apply(phi, images[static_cast<std::size_t>(n) - 1][i]);
  std::vector<int> live;
  for (int n = 1; n <= n_max; ++n) {
    bool trivial = true;
    for (std::size_t i = 0; i < pts.size() && trivial; ++i)
      trivial = s.distance(images[static_cast<std::size_t>(n)][i], pts[i]) == 0;
    (trivial ? out.skipped_powers : live).push_back(n);
  }
  if (live.empty()) std::swap(live, out.skipped_powers);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int n : live)
      if (s.distance(images[static_cast<std::size_t>(n)][i], pts[i]) <= C) {
        out.members.push_back(pts[i]);
        break;
      }
  for (const auto& a : out.members)
    for (const auto& b : out.members) out.diameter = std::max(out.diameter, s.distance(a, b));
  return out;
}

/// Runs the ping-pong checks for φ₁, φ₂ over the finite sample `pts`.
template <class Space, class Iso, class P = typename Space::Point>
PingPongCertificate pingpong_certify(const Space& s, const Iso& f1, const Iso& f2, const std::vector<P>& pts,
                                     const PingPongConfig& cfg = {}) {
  if (cfg.max_syllables < 1 || cfg.max_power < 1 || cfg.C < 0) throw std::invalid_argument("budgets must be positive");
  PingPongCertificate cert;
  cert.C = cfg.C;
  cert.sample_size = pts.size();
  cert.delta = cfg.delta ? *cfg.delta : delta_from_quadruples(s, pts);
  const Rational hundred_delta = 100 * cert.delta;
  const Rational ell = cfg.local_length ? *cfg.local_length : hundred_delta;
  cert.C1 = std::max(hundred_delta, ell);
  if (!(Rational(cfg.C) > hundred_delta)) {
    cert.reason = "C must exceed 100 delta";
    return cert;
  }

  const Iso iso[2][2] = {{f1, inverse_of(s, f1)}, {f2, inverse_of(s, f2)}};
  auto power = [&](int which, int e, P x) {
    const Iso& g = iso[which][e < 0 ? 1 : 0];
    for (int i = 0; i < std::abs(e); ++i) x = s.apply(g, x);
    return x;
  };

  std::vector<std::vector<P>> fixed(2);
  for (int w = 0; w < 2; ++w) {
    auto sample = almost_fixed_sample(s, w == 0 ? f1 : f2, pts, cfg.C, cfg.max_power);
    cert.fixed_count[w] = sample.members.size();
    cert.diameter[w] = sample.diameter;
    cert.skipped_powers[w] = sample.skipped_powers;
    fixed[static_cast<std::size_t>(w)] = std::move(sample.members);
  }
  if (fixed[0].empty() || fixed[1].empty()) {
    cert.reason = "empty almost fixed set";
    return cert;
  }
  if (cfg.diameter_bound && (cert.diameter[0] > *cfg.diameter_bound || cert.diameter[1] > *cfg.diameter_bound)) {
    cert.reason = "almost fixed set too large";
    return cert;
  }
  const P* base = nullptr;
  cert.separation = std::numeric_limits<long>::max();
  for (const auto& a : fixed[0])
    for (const auto& b : fixed[1])
      if (s.distance(a, b) < cert.separation) {
        cert.separation = s.distance(a, b);
        base = &a;
      }
  cert.base_point = detail::point_name(*base);
  if (Rational(cert.separation) < std::max(cert.C1, Rational(1))) {
    cert.reason = "almost fixed sets closer than C1";
    return cert;
  }

  // live exponents: nonzero, |e| ≤ n_max, skipping powers that act trivially
  std::vector<int> exps[2];
  for (int w = 0; w < 2; ++w)
    for (int e = -cfg.max_power; e <= cfg.max_power; ++e) {
      if (e == 0) continue;
      auto& sk = cert.skipped_powers[w];
      if (std::find(sk.begin(), sk.end(), std::abs(e)) != sk.end()) continue;
      exps[w].push_back(e);
    }

  const P x = *base;
  auto act = [&](const SyllableWord& word, P y) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = power(it->first, it->second, y);
    return y;
  };
  auto evaluate = [&](const SyllableWord& word) {
    WordRecord r{word, static_cast<int>(word.size()), s.distance(act(word, x), x), std::nullopt};
    if (word.size() % 2 == 0) {
      // cyclically alternating, hence contains both letters
      Rational best;
      bool have = false;
      P y = x;
      int done = 0;
      for (int m : {1, 2, 4}) {
        while (done < m) {
          y = act(word, y);
          ++done;
        }
        Rational t(s.distance(y, x), m);
        if (!have || t < best) best = t;
        have = true;
      }
      r.translation = best;
    }
    return r;
  };

  // enumerate by first syllable blocks so jobs can split the work
  struct Block {
    std::vector<WordRecord> records;
  };
  std::vector<SyllableWord> seeds;
  for (int l = 0; l < 2; ++l)
    for (int e : exps[l]) seeds.push_back({{l, e}});
  std::vector<Block> blocks(seeds.size());
  auto run_block = [&](std::size_t bi) {
    SyllableWord word = seeds[bi];
    auto rec = [&](auto&& self) -> void {
      blocks[bi].records.push_back(evaluate(word));
      if (static_cast<int>(word.size()) == cfg.max_syllables) return;
      int l = 1 - word.back().first;
      for (int e : exps[l]) {
        word.push_back({l, e});
        self(self);
        word.pop_back();
      }
    };
    rec(rec);
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_block(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < seeds.size();) run_block(i);
      });
    for (auto& t : pool) t.join();
  }

  bool have_excess = false;
  for (auto& b : blocks)
    for (auto& r : b.records) {
      ++cert.words_tested;
      long excess = r.displacement - r.syllables;
      if (!have_excess || excess < cert.min_excess) cert.min_excess = excess;
      have_excess = true;
      if (r.translation && (!cert.min_translation || *r.translation < *cert.min_translation))
        cert.min_translation = r.translation;
      bool bad = excess < 0 || r.displacement == 0 || (r.translation && *r.translation <= 0);
      if (bad && !cert.witness) cert.witness = r;
      if (cfg.keep_words) cert.words.push_back(std::move(r));
    }
  cert.verdict = cert.witness ? PingPongVerdict::Failed : PingPongVerdict::Certified;
  if (cert.witness) cert.reason = "word " + format_syllables(cert.witness->word) + " fails";
  return cert;
}

/// Sample window for two tree rotations: balls of radius r about both centers
/// and the geodesic between them.
inline std::vector<CubicTree::Point> rotation_window(const CubicTree& t, const CubicTree::Point& u,
                                                     const CubicTree::Point& v, int r) {
  std::vector<CubicTree::Point> pts = t.ball(u, r);
  for (auto& p : t.ball(v, r)) pts.push_back(std::move(p));
  for (auto& p : t.geodesic(u, v)) pts.push_back(std::move(p));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace ft
