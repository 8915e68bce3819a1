#pragma once

// Conjugacy classes of subgroups (intended: proper free factors) in canonical form.
//
// The canonical representative is read off the labeled core graph: the start
// vertex is the one with the least exploration code, and the basis is the BFS
// spanning-tree basis of loops at that vertex. Two factors compare equal exactly
// when they are conjugate.

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "freetwist/folding.hpp"
#include "freetwist/word.hpp"

namespace ft {

class FreeFactor {
 public:
  FreeFactor() = default;

  static FreeFactor from_generators(const std::vector<Word>& generators, int ambient_rank) {
    FoldedGraph g(ambient_rank, generators);
    auto mask = g.core_mask();
    int start = -1;
    std::vector<int> best;
    for (std::size_t v = 0; v < mask.size(); ++v) {
      if (!mask[v]) continue;
      auto c = g.code_from(static_cast<int>(v), mask);
      if (start < 0 || c < best) {
        best = std::move(c);
        start = static_cast<int>(v);
      }
    }
    if (start < 0) throw std::invalid_argument("free factor of rank 0");
    FreeFactor f;
    f.ambient_rank_ = ambient_rank;
    f.basis_ = g.basis_from(start, mask);
    std::sort(f.basis_.begin(), f.basis_.end(), [](const Word& x, const Word& y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    f.code_ = std::move(best);
    if (f.rank() >= ambient_rank) throw std::invalid_argument("subgroup of full rank is not a proper free factor");
    return f;
  }

  int rank() const { return static_cast<int>(basis_.size()); }
  int ambient_rank() const { return ambient_rank_; }
  const std::vector<Word>& basis() const { return basis_; }
  const std::vector<int>& code() const { return code_; }

  friend bool operator==(const FreeFactor& a, const FreeFactor& b) {
    return a.ambient_rank_ == b.ambient_rank_ && a.code_ == b.code_;
  }
  friend bool operator<(const FreeFactor& a, const FreeFactor& b) {
    return std::tie(a.ambient_rank_, a.code_) < std::tie(b.ambient_rank_, b.code_);
  }

 private:
  int ambient_rank_ = 0;
  std::vector<Word> basis_;
  std::vector<int> code_;
};

/// Searches for words completing `basis` to a basis of F_k: first standard
/// generators, then reduced words of length ≤ max_len. A returned completion
/// certifies that ⟨basis⟩ is a free factor; nullopt is inconclusive.
inline std::optional<std::vector<Word>> free_factor_complement(const std::vector<Word>& basis, int rank,
                                                               std::size_t max_len = 2) {
  const int need = rank - static_cast<int>(basis.size());
  if (need < 0) return std::nullopt;
  if (need == 0) {
    if (generates_free_group(basis, rank)) return std::vector<Word>{};
    return std::nullopt;
  }
  std::vector<Word> pool;
  for (int i = 0; i < rank; ++i) pool.push_back(Word::generator(i));
  for (const auto& w : all_reduced_words(rank, max_len, 2))
    if (w.front() > 0) pool.push_back(w);  // one of w, w⁻¹ suffices
  // pool indices in increasing lexicographic combination order
  std::vector<std::size_t> idx(static_cast<std::size_t>(need));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (pool.size() < idx.size()) return std::nullopt;
  for (;;) {
    std::vector<Word> trial = basis;
    for (auto i : idx) trial.push_back(pool[i]);
    if (generates_free_group(trial, rank)) {
      std::vector<Word> comp;
      for (auto i : idx) comp.push_back(pool[i]);
      return comp;
    }
    int p = need - 1;
    while (p >= 0 && idx[static_cast<std::size_t>(p)] == pool.size() - static_cast<std::size_t>(need - p)) --p;
    if (p < 0) break;
    ++idx[static_cast<std::size_t>(p)];
    for (int q = p + 1; q < need; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return std::nullopt;
}

}  // namespace ft
