#pragma once

// Reduced words in a free group of finite rank.
//
// A letter is a signed generator index: generator i (0-based) is the letter
// i+1, its inverse is -(i+1). Words are flat letter arrays kept freely
// reduced at all times; every mutating operation re-reduces with a single
// stack pass.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ft {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Raised when a requested window or search does not fit the configured budget.
struct ResourceError : Error {
  using Error::Error;
};

using Letter = int;

inline int generator_of(Letter l) { return std::abs(l) - 1; }
inline Letter letter_for(int generator, bool inverse = false) {
  return inverse ? -(generator + 1) : generator + 1;
}

/// Total order on letters: a < a' < b < b' < ...
inline int letter_key(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : Word(std::vector<Letter>(letters)) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) { normalize(); }

  static Word generator(int i) { return Word{letter_for(i)}; }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  const std::vector<Letter>& letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = -l;
    Word w;
    w.letters_ = std::move(out);
    return w;
  }

  Word& operator*=(const Word& rhs) {
    letters_.reserve(letters_.size() + rhs.size());
    for (Letter l : rhs.letters_) push(l);
    return *this;
  }

  friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

  Word power(long n) const {
    Word base = n < 0 ? inverse() : *this;
    Word out;
    for (long i = 0; i < std::labs(n); ++i) out *= base;
    return out;
  }

  /// Appends a single letter with free cancellation.
  void push(Letter l) {
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  Word prefix(std::size_t n) const {
    Word w;
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
    return w;
  }
  Word suffix_from(std::size_t n) const {
    Word w;
    if (n < size()) w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(n), letters_.end());
    return w;
  }

  int max_generator() const {
    int m = -1;
    for (Letter l : letters_) m = std::max(m, generator_of(l));
    return m;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) {
    return std::lexicographical_compare(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                        b.letters_.end(),
                                        [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
  }

 private:
  void normalize() {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (Letter l : letters_) {
      if (l == 0) throw std::invalid_argument("letter 0 is not a generator");
      if (!out.empty() && out.back() == -l)
        out.pop_back();
      else
        out.push_back(l);
    }
    letters_ = std::move(out);
  }

  std::vector<Letter> letters_;
};

inline Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }

/// Freely reduces a raw letter sequence, rejecting letters outside the rank.
inline Word reduce(std::span<const Letter> raw, int rank) {
  for (Letter l : raw)
    if (l == 0 || generator_of(l) >= rank)
      throw std::out_of_range("letter " + std::to_string(l) + " outside alphabet of rank " + std::to_string(rank));
  return Word(std::vector<Letter>(raw.begin(), raw.end()));
}

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  Word core;
  Word conjugator;
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  std::vector<Letter> core(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
  return {Word(std::move(core)), w.prefix(i)};
}

inline std::size_t cyclic_length(const Word& w) { return cyclic_reduce(w).core.size(); }

/// Index of the lexicographically least rotation (letter_key order).
inline std::size_t least_rotation(const std::vector<Letter>& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    int a = letter_key(s[(i + k) % n]);
    int b = letter_key(s[(j + k) % n]);
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

/// Cyclically reduced word considered up to rotation. Stored in its least
/// rotation, so equality is conjugacy of the underlying elements.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(const Word& w) {
    auto core = cyclic_reduce(w).core.letters();
    std::size_t r = least_rotation(core);
    letters_.reserve(core.size());
    for (std::size_t t = 0; t < core.size(); ++t) letters_.push_back(core[(r + t) % core.size()]);
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Word word() const { return Word(letters_); }
  const std::vector<Letter>& letters() const { return letters_; }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend bool operator<(const CyclicWord& a, const CyclicWord& b) { return a.word() < b.word(); }

 private:
  std::vector<Letter> letters_;
};

inline bool are_conjugate(const Word& u, const Word& v) { return CyclicWord(u) == CyclicWord(v); }

/// Generator names and the text notation for words: names separated by
/// optional whitespace or '.', a trailing `'` inverts, `1` is the identity.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw std::invalid_argument("alphabet needs rank >= 2");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw std::invalid_argument("empty generator name");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate generator name " + names_[i]);
    }
  }

  static Alphabet standard(int rank) {
    static constexpr std::string_view kNames = "abcdefghijklmnopqrsuvwxyz";
    if (rank < 2 || rank > static_cast<int>(kNames.size())) throw std::invalid_argument("unsupported rank");
    std::vector<std::string> names;
    for (int i = 0; i < rank; ++i) names.emplace_back(1, kNames[static_cast<std::size_t>(i)]);
    return Alphabet(std::move(names));
  }

  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }

  int index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  Word parse(std::string_view text) const {
    std::vector<Letter> raw;
    std::size_t pos = 0;
    bool saw_one = false;
    while (pos < text.size()) {
      char ch = text[pos];
      if (ch == ' ' || ch == '\t' || ch == '.' || ch == '*') {
        ++pos;
        continue;
      }
      if (ch == '1') {
        saw_one = true;
        ++pos;
        continue;
      }
      // longest matching generator name
      int best = -1;
      std::size_t best_len = 0;
      for (std::size_t i = 0; i < names_.size(); ++i) {
        const auto& n = names_[i];
        if (n.size() > best_len && text.substr(pos, n.size()) == n) {
          best = static_cast<int>(i);
          best_len = n.size();
        }
      }
      if (best < 0) throw ParseError("unknown generator at '" + std::string(text.substr(pos)) + "'");
      pos += best_len;
      bool inv = false;
      while (pos < text.size() && text[pos] == '\'') {
        inv = !inv;
        ++pos;
      }
      raw.push_back(letter_for(best, inv));
    }
    if (saw_one && !raw.empty()) throw ParseError("identity marker '1' mixed with letters");
    return Word(std::move(raw));
  }

  std::string format(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += name(generator_of(w[i]));
      if (w[i] < 0) out += '\'';
    }
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

/// Enumerates all reduced words over `rank` generators with length in [min_len, max_len],
/// in shortlex order.
inline std::vector<Word> all_reduced_words(int rank, std::size_t max_len, std::size_t min_len = 0) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  if (min_len == 0) out.push_back(Word{});
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (int g = 0; g < rank; ++g)
        for (int s = 0; s < 2; ++s) {
          Letter l = letter_for(g, s == 1);
          if (!w.empty() && w.back() == -l) continue;
          Word x = w;
          x.push(l);
          next.push_back(std::move(x));
        }
    }
    layer = std::move(next);
    if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// One representative per conjugacy class of nontrivial cyclic words up to length max_len.
inline std::vector<CyclicWord> all_cyclic_words(int rank, std::size_t max_len) {
  std::vector<CyclicWord> out;
  for (const auto& w : all_reduced_words(rank, max_len, 1)) {
    if (w.front() == -w.back() && w.size() > 1) continue;
    CyclicWord c(w);
    if (c.word() == w) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace ft
