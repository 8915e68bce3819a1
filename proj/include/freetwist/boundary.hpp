#pragma once

// Eventually periodic boundary points u·v^∞ of the Cayley tree of F_k.

#include <limits>
#include <string>

#include "freetwist/automorphism.hpp"
#include "freetwist/word.hpp"

namespace ft {

class End {
 public:
  static constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

  End() = default;

  /// u·v^∞ for any u and nontrivial v, normalized: v primitive and cyclically
  /// reduced, no cancellation between u and v^∞, and u as short as possible.
  End(const Word& u, const Word& v) {
    if (v.empty()) throw std::invalid_argument("end needs a nontrivial period");
    auto cr = cyclic_reduce(v);
    std::vector<Letter> r = cr.core.letters();
    std::vector<Letter> x = (u * cr.conjugator).letters();
    while (!x.empty() && x.back() == -r.front()) {
      x.pop_back();
      std::rotate(r.begin(), r.begin() + 1, r.end());
    }
    while (!x.empty() && x.back() == r.back()) {
      x.pop_back();
      std::rotate(r.rbegin(), r.rbegin() + 1, r.rend());
    }
    r = primitive_root(r);
    prefix_ = Word(std::move(x));
    period_ = Word(std::move(r));
  }

  /// w^{+∞}.
  static End forward(const Word& w) { return End(Word{}, w); }
  /// w^{−∞}.
  static End backward(const Word& w) { return End(Word{}, w.inverse()); }

  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }

  Letter at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return period_[(i - prefix_.size()) % period_.size()];
  }

  bool has_prefix(const Word& w) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (at(i) != w[i]) return false;
    return true;
  }

  /// g·ξ.
  End translate(const Word& g) const { return End(g * prefix_, period_); }

  /// φ(ξ), exact: φ(u v^∞) = φ(u)·φ(v)^∞.
  End apply(const Automorphism& phi) const { return End(phi.apply(prefix_), phi.apply(period_)); }

  friend std::size_t common_prefix(const End& x, const End& y) {
    // past max prefix both are periodic; agreement over |v1|+|v2| more letters is equality
    std::size_t bound = std::max(x.prefix_.size(), y.prefix_.size()) + x.period_.size() + y.period_.size();
    for (std::size_t i = 0; i < bound; ++i)
      if (x.at(i) != y.at(i)) return i;
    return kInfinite;
  }

  friend bool operator==(const End&, const End&) = default;
  friend bool operator<(const End& a, const End& b) {
    if (a.prefix_ == b.prefix_) return a.period_ < b.period_;
    return a.prefix_ < b.prefix_;
  }

  std::string to_string(const Alphabet& al) const {
    return (prefix_.empty() ? std::string{} : al.format(prefix_) + " ") + "(" + al.format(period_) + ")^inf";
  }

 private:
  static std::vector<Letter> primitive_root(const std::vector<Letter>& r) {
    const std::size_t n = r.size();
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p) continue;
      bool ok = true;
      for (std::size_t i = p; i < n && ok; ++i) ok = r[i] == r[i - p];
      if (ok) return {r.begin(), r.begin() + static_cast<std::ptrdiff_t>(p)};
    }
    return r;
  }

  Word prefix_;
  Word period_;
};

}  // namespace ft
