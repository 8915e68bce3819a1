#pragma once

// Whitehead automorphisms and greedy length descent on tuples of cyclic words.
//
// A type-2 Whitehead automorphism is given by a letter `a` and, for every other
// generator x, one of four actions: x, x·a, a⁻¹·x, a⁻¹·x·a. Moves are
// enumerated with `a` in letter_key order and the actions as base-4 digits.

#include <numeric>
#include <vector>

#include "freetwist/automorphism.hpp"

namespace ft {

struct WhiteheadMove {
  Letter a = 1;
  std::vector<int> action;  // per generator, 0..3; ignored at generator_of(a)

  std::vector<Word> images(int rank) const {
    std::vector<Word> out;
    Word aw{a};
    for (int x = 0; x < rank; ++x) {
      Word g = Word::generator(x);
      if (x == generator_of(a)) {
        out.push_back(g);
        continue;
      }
      switch (action[static_cast<std::size_t>(x)]) {
        case 1: g = g * aw; break;
        case 2: g = aw.inverse() * g; break;
        case 3: g = aw.inverse() * g * aw; break;
        default: break;
      }
      out.push_back(std::move(g));
    }
    return out;
  }

  /// The inverse move uses the same actions with a⁻¹.
  WhiteheadMove inverse() const { return {-a, action}; }

  Automorphism automorphism(const Alphabet& alphabet) const {
    return Automorphism::with_inverse(alphabet, images(alphabet.rank()), inverse().images(alphabet.rank()));
  }
};

/// All nontrivial type-2 Whitehead moves of F_k in the fixed enumeration order.
inline std::vector<WhiteheadMove> whitehead_moves(int rank) {
  std::vector<WhiteheadMove> out;
  long combos = 1;
  for (int i = 1; i < rank; ++i) combos *= 4;
  for (int key = 0; key < 2 * rank; ++key) {
    Letter a = letter_for(key / 2, key & 1);
    for (long code = 1; code < combos; ++code) {
      WhiteheadMove m{a, std::vector<int>(static_cast<std::size_t>(rank), 0)};
      long c = code;
      for (int x = 0; x < rank; ++x) {
        if (x == generator_of(a)) continue;
        m.action[static_cast<std::size_t>(x)] = static_cast<int>(c % 4);
        c /= 4;
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

inline std::size_t total_length(const std::vector<CyclicWord>& tuple) {
  return std::accumulate(tuple.begin(), tuple.end(), std::size_t{0},
                         [](std::size_t s, const CyclicWord& w) { return s + w.size(); });
}

struct WhiteheadResult {
  std::vector<CyclicWord> minimized;
  std::vector<WhiteheadMove> moves;  // applied in order
};

inline std::vector<CyclicWord> apply_move(const WhiteheadMove& m, const std::vector<CyclicWord>& tuple, int rank) {
  auto imgs = m.images(rank);
  std::vector<CyclicWord> out;
  out.reserve(tuple.size());
  for (const auto& w : tuple) out.emplace_back(Automorphism::substitute(imgs, w.word()));
  return out;
}

/// First strictly reducing move, repeatedly, until none reduces the total length.
inline WhiteheadResult whitehead_minimize(std::vector<CyclicWord> tuple, int rank) {
  if (tuple.empty()) throw std::invalid_argument("whitehead_minimize needs a nonempty tuple");
  for (const auto& w : tuple)
    if (w.empty()) throw std::invalid_argument("whitehead_minimize: trivial word in tuple");
  const auto moves = whitehead_moves(rank);
  WhiteheadResult res{std::move(tuple), {}};
  std::size_t len = total_length(res.minimized);
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& m : moves) {
      auto next = apply_move(m, res.minimized, rank);
      std::size_t l = total_length(next);
      if (l < len) {
        res.minimized = std::move(next);
        res.moves.push_back(m);
        len = l;
        improved = true;
        break;
      }
    }
  }
  return res;
}

inline bool is_primitive(const Word& w, int rank) {
  if (w.empty()) throw std::invalid_argument("is_primitive: trivial word");
  return total_length(whitehead_minimize({CyclicWord(w)}, rank).minimized) == 1;
}

}  // namespace ft
