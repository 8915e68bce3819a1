#pragma once

// Automorphisms of F_k given by generator images.

#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "freetwist/folding.hpp"
#include "freetwist/word.hpp"

namespace ft {

/// True iff the images generate F_k (their folded wedge is the rose); with
/// exactly k images this is equivalent to being an automorphism (Hopfian).
inline bool is_automorphism(const std::vector<Word>& images, int rank) {
  if (static_cast<int>(images.size()) != rank) return false;
  for (const auto& w : images)
    if (w.empty()) return false;
  return generates_free_group(images, rank);
}

class Automorphism {
 public:
  Automorphism() = default;

  /// Builds and verifies; unverifiable maps are kept with verified() == false.
  Automorphism(Alphabet alphabet, std::vector<Word> images)
      : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != alphabet_.rank())
      throw std::invalid_argument("automorphism needs one image per generator");
    for (const auto& w : images_)
      if (w.max_generator() >= alphabet_.rank()) throw std::out_of_range("image uses a letter outside the alphabet");
    if (is_automorphism(images_, alphabet_.rank())) {
      if (auto inv = express_generators(images_, alphabet_.rank())) {
        inverse_ = std::make_shared<const std::vector<Word>>(std::move(*inv));
        verified_ = true;
      }
    }
  }

  /// Trusted constructor used when the inverse is known in closed form.
  static Automorphism with_inverse(Alphabet alphabet, std::vector<Word> images, std::vector<Word> inverse_images) {
    Automorphism a;
    a.alphabet_ = std::move(alphabet);
    a.images_ = std::move(images);
    a.inverse_ = std::make_shared<const std::vector<Word>>(std::move(inverse_images));
    a.verified_ = true;
    return a;
  }

  static Automorphism identity(const Alphabet& alphabet) {
    std::vector<Word> gens;
    for (int i = 0; i < alphabet.rank(); ++i) gens.push_back(Word::generator(i));
    return with_inverse(alphabet, gens, gens);
  }

  bool verified() const { return verified_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int rank() const { return alphabet_.rank(); }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }

  Word apply(const Word& w) const {
    require_verified();
    return substitute(images_, w);
  }

  /// Image of a conjugacy class.
  CyclicWord apply(const CyclicWord& w) const { return CyclicWord(apply(w.word())); }

  Automorphism inverse() const {
    require_verified();
    return with_inverse(alphabet_, *inverse_, images_);
  }

  Automorphism power(long n) const {
    require_verified();
    Automorphism base = n < 0 ? inverse() : *this;
    Automorphism out = identity(alphabet_);
    for (long i = 0; i < std::labs(n); ++i) out = compose(base, out);
    return out;
  }

  /// (lhs ∘ rhs)(x) = lhs(rhs(x)).
  friend Automorphism compose(const Automorphism& lhs, const Automorphism& rhs) {
    if (!(lhs.alphabet_ == rhs.alphabet_)) throw std::invalid_argument("alphabet mismatch in compose");
    lhs.require_verified();
    rhs.require_verified();
    std::vector<Word> img, inv;
    for (const auto& w : rhs.images_) img.push_back(substitute(lhs.images_, w));
    for (const auto& w : *lhs.inverse_) inv.push_back(substitute(*rhs.inverse_, w));
    return with_inverse(lhs.alphabet_, std::move(img), std::move(inv));
  }

  bool is_identity() const {
    for (int i = 0; i < rank(); ++i)
      if (!(images_[static_cast<std::size_t>(i)] == Word::generator(i))) return false;
    return true;
  }

  friend bool operator==(const Automorphism& a, const Automorphism& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

  static Word substitute(const std::vector<Word>& images, const Word& w) {
    Word out;
    for (Letter l : w) {
      const Word& img = images.at(static_cast<std::size_t>(generator_of(l)));
      if (l > 0)
        out *= img;
      else
        out *= img.inverse();
    }
    return out;
  }

  /// Text form: one `<gen> -> <word>` line per generator.
  std::string to_text() const {
    std::ostringstream os;
    for (int i = 0; i < rank(); ++i)
      os << alphabet_.name(i) << " -> " << alphabet_.format(images_[static_cast<std::size_t>(i)]) << '\n';
    return os.str();
  }

  /// Parses the text form. The alphabet is the left-hand sides in order of
  /// appearance unless one is supplied.
  static Automorphism parse(std::istream& in, std::optional<Alphabet> alphabet = std::nullopt) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto arrow = line.find("->");
      if (arrow == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected '<gen> -> <word>'");
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      rows.emplace_back(trim(line.substr(0, arrow)), trim(line.substr(arrow + 2)));
    }
    if (!alphabet) {
      std::vector<std::string> names;
      for (auto& r : rows) names.push_back(r.first);
      alphabet = Alphabet(names);
    }
    std::vector<Word> images(static_cast<std::size_t>(alphabet->rank()));
    std::vector<char> seen(images.size(), 0);
    for (auto& [lhs, rhs] : rows) {
      int idx = alphabet->index_of(lhs);
      if (idx < 0) throw ParseError("unknown generator '" + lhs + "'");
      if (seen[static_cast<std::size_t>(idx)]) throw ParseError("generator '" + lhs + "' defined twice");
      seen[static_cast<std::size_t>(idx)] = 1;
      images[static_cast<std::size_t>(idx)] = alphabet->parse(rhs);
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw ParseError("missing image for generator '" + alphabet->name(static_cast<int>(i)) + "'");
    return Automorphism(*alphabet, std::move(images));
  }

 private:
  void require_verified() const {
    if (!verified_) throw std::logic_error("operation requires a verified automorphism");
  }

  Alphabet alphabet_;
  std::vector<Word> images_;
  std::shared_ptr<const std::vector<Word>> inverse_;
  bool verified_ = false;
};

}  // namespace ft
