#pragma once

// Marked metric graphs: points of outer space.
//
// Edge paths reuse Word with the edge alphabet: letter +(e+1) crosses edge e
// from its tail to its head, -(e+1) crosses it backwards. Free reduction of
// such a word is exactly tightening of the path.

#include <algorithm>
#include <istream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "freetwist/automorphism.hpp"
#include "freetwist/rational.hpp"

namespace ft {

struct GraphEdge {
  int from = 0;
  int to = 0;
  Rational length = 1;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class MarkedGraph {
 public:
  MarkedGraph() = default;

  /// Validates the paths and that the marking is a homotopy equivalence; the
  /// homotopy inverse is computed by tagged folding.
  MarkedGraph(Alphabet alphabet, int vertices, std::vector<GraphEdge> edges, std::vector<Word> marking, int base = 0)
      : alphabet_(std::move(alphabet)), vertices_(vertices), base_(base), edges_(std::move(edges)),
        marking_(std::move(marking)) {
    if (vertices_ < 1 || base_ < 0 || base_ >= vertices_) throw Error("graph needs a base vertex");
    for (const auto& e : edges_) {
      if (e.from < 0 || e.to < 0 || e.from >= vertices_ || e.to >= vertices_) throw Error("edge endpoint out of range");
      if (e.length <= 0) throw Error("edge lengths must be positive");
    }
    if (static_cast<int>(marking_.size()) != alphabet_.rank()) throw Error("marking needs one path per generator");
    for (const auto& p : marking_) {
      if (p.empty()) throw Error("marking path is empty");
      check_closed_path(p);
    }
    compute_inverse();
  }

  static MarkedGraph rose(const Alphabet& alphabet, const std::vector<Rational>& lengths) {
    if (static_cast<int>(lengths.size()) != alphabet.rank()) throw Error("rose needs one length per petal");
    std::vector<GraphEdge> edges;
    std::vector<Word> marking;
    for (int i = 0; i < alphabet.rank(); ++i) {
      edges.push_back({0, 0, lengths[static_cast<std::size_t>(i)]});
      marking.push_back(Word::generator(i));
    }
    return MarkedGraph(alphabet, 1, std::move(edges), std::move(marking));
  }

  /// The volume-one rose with the identity marking.
  static MarkedGraph uniform_rose(const Alphabet& alphabet) {
    return rose(alphabet, std::vector<Rational>(static_cast<std::size_t>(alphabet.rank()), Rational(1, alphabet.rank())));
  }

  /// Uniform rose whose petal for x spells φ(x).
  static MarkedGraph twisted_rose(const Automorphism& phi) { return uniform_rose(phi.alphabet()).remarked(phi); }

  /// Marking read off a BFS spanning tree from vertex 0: the i-th non-tree
  /// edge becomes the i-th generator.
  static MarkedGraph from_spanning_tree(const Alphabet& alphabet, int vertices, std::vector<GraphEdge> edges) {
    std::vector<Word> to_vertex(static_cast<std::size_t>(vertices));
    std::vector<char> in_tree(edges.size(), 0), seen(static_cast<std::size_t>(vertices), 0);
    bfs_tree(vertices, edges, 0, to_vertex, in_tree, seen);
    std::vector<Word> marking;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (in_tree[e]) continue;
      Letter l = static_cast<Letter>(e + 1);
      marking.push_back(to_vertex[static_cast<std::size_t>(edges[e].from)] * Word{l} *
                        to_vertex[static_cast<std::size_t>(edges[e].to)].inverse());
    }
    if (static_cast<int>(marking.size()) != alphabet.rank()) throw Error("graph rank does not match the alphabet");
    return MarkedGraph(alphabet, vertices, std::move(edges), std::move(marking));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  int rank() const { return alphabet_.rank(); }
  int vertex_count() const { return vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int base() const { return base_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<Word>& marking() const { return marking_; }
  /// Homotopy inverse on edges: the F_k word read when crossing edge e forwards.
  const std::vector<Word>& edge_words() const { return edge_words_; }

  int tail(Letter l) const {
    const auto& e = edges_[static_cast<std::size_t>(generator_of(l))];
    return l > 0 ? e.from : e.to;
  }
  int head(Letter l) const { return tail(-l); }

  std::vector<int> valences() const {
    std::vector<int> v(static_cast<std::size_t>(vertices_), 0);
    for (const auto& e : edges_) {
      ++v[static_cast<std::size_t>(e.from)];
      ++v[static_cast<std::size_t>(e.to)];
    }
    return v;
  }

  int min_valence() const {
    auto v = valences();
    return *std::min_element(v.begin(), v.end());
  }

  Rational volume() const {
    Rational s = 0;
    for (const auto& e : edges_) s += e.length;
    return s;
  }

  Rational path_length(const Word& path) const {
    std::vector<long> count(edges_.size(), 0);
    for (Letter l : path) ++count[static_cast<std::size_t>(generator_of(l))];
    Rational s = 0;
    for (std::size_t e = 0; e < count.size(); ++e)
      if (count[e]) s += count[e] * edges_[e].length;
    return s;
  }

  /// Tightened edge loop at the base representing w.
  Word image(const Word& w) const { return Automorphism::substitute(marking_, w); }

  Rational translation_length(const Word& w) const { return path_length(cyclic_reduce(image(w)).core); }

  /// The element of F_k carried by an edge path (closed paths give the class up to conjugacy).
  Word path_word(const Word& path) const { return Automorphism::substitute(edge_words_, path); }

  MarkedGraph with_lengths(std::vector<Rational> lengths) const {
    if (lengths.size() != edges_.size()) throw Error("one length per edge");
    MarkedGraph g = *this;
    for (std::size_t e = 0; e < lengths.size(); ++e) {
      if (lengths[e] <= 0) throw Error("edge lengths must be positive");
      g.edges_[e].length = lengths[e];
    }
    return g;
  }

  MarkedGraph normalized() const {
    Rational v = volume();
    MarkedGraph g = *this;
    for (auto& e : g.edges_) e.length /= v;
    return g;
  }

  /// Same graph with marking x ↦ marking(ψ(x)).
  MarkedGraph remarked(const Automorphism& psi) const {
    if (psi.rank() != rank()) throw Error("rank mismatch");
    MarkedGraph g = *this;
    for (int i = 0; i < rank(); ++i) g.marking_[static_cast<std::size_t>(i)] = image(psi.image(i));
    Automorphism inv = psi.inverse();
    for (auto& w : g.edge_words_) w = inv.apply(w);
    return g;
  }

  /// Moves the base point to v, conjugating the marking by a tree path.
  MarkedGraph rebased(int v) const {
    std::vector<Word> to_vertex(static_cast<std::size_t>(vertices_));
    std::vector<char> in_tree(edges_.size(), 0), seen(static_cast<std::size_t>(vertices_), 0);
    bfs_tree(vertices_, edges_, base_, to_vertex, in_tree, seen);
    const Word& p = to_vertex.at(static_cast<std::size_t>(v));
    std::vector<Word> marking;
    for (const auto& m : marking_) marking.push_back(p.inverse() * m * p);
    return MarkedGraph(alphabet_, vertices_, edges_, std::move(marking), v);
  }

  /// Removes valence-one and valence-two vertices (hairs are deleted, bivalent
  /// vertices are erased by merging their two edges). Lengths add up, so
  /// translation lengths are unchanged.
  MarkedGraph simplified() const {
    std::vector<GraphEdge> edges = edges_;
    std::vector<Word> marking = marking_;
    std::vector<char> live_edge(edges.size(), 1), live_vertex(static_cast<std::size_t>(vertices_), 1);
    int base = base_, alive = vertices_;
    auto end_of = [&](Letter l, bool head) {
      const auto& e = edges[static_cast<std::size_t>(generator_of(l))];
      return (l > 0) != head ? e.from : e.to;
    };
    auto substitute = [&](const std::vector<std::pair<int, Word>>& changes) {
      std::vector<Word> sub;
      for (std::size_t e = 0; e < edges.size(); ++e) sub.push_back(Word{letter_for(static_cast<int>(e))});
      for (const auto& [e, w] : changes) sub[static_cast<std::size_t>(e)] = w;
      for (auto& m : marking) m = Automorphism::substitute(sub, m);
    };
    while (alive > 1) {
      std::vector<std::vector<Letter>> ends(static_cast<std::size_t>(vertices_));  // letters leaving v
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!live_edge[e]) continue;
        ends[static_cast<std::size_t>(edges[e].from)].push_back(letter_for(static_cast<int>(e)));
        ends[static_cast<std::size_t>(edges[e].to)].push_back(letter_for(static_cast<int>(e), true));
      }
      int v = -1;
      for (int u = 0; u < vertices_ && v < 0; ++u)
        if (live_vertex[static_cast<std::size_t>(u)] && ends[static_cast<std::size_t>(u)].size() <= 2) v = u;
      if (v < 0) break;
      const auto& out = ends[static_cast<std::size_t>(v)];
      if (v == base) {
        // step the base across a non-loop edge
        Letter step = 0;
        for (Letter l : out)
          if (end_of(l, true) != v) step = l;
        if (!step) break;
        for (auto& m : marking) m = Word{-step} * m * Word{step};
        base = end_of(step, true);
        continue;
      }
      if (out.size() == 1) {
        live_edge[static_cast<std::size_t>(generator_of(out[0]))] = 0;
      } else {
        Letter alpha = -out[0], beta = out[1];  // alpha enters v, beta leaves it
        int ea = generator_of(alpha), eb = generator_of(beta);
        GraphEdge merged{end_of(alpha, false), end_of(beta, true),
                         edges[static_cast<std::size_t>(ea)].length + edges[static_cast<std::size_t>(eb)].length};
        Letter na = letter_for(ea);
        substitute({{ea, alpha > 0 ? Word{na} : Word{-na}}, {eb, Word{}}});
        edges[static_cast<std::size_t>(ea)] = merged;
        live_edge[static_cast<std::size_t>(eb)] = 0;
      }
      live_vertex[static_cast<std::size_t>(v)] = 0;
      --alive;
    }
    std::vector<int> vid(static_cast<std::size_t>(vertices_), -1);
    int nv = 0;
    for (int u = 0; u < vertices_; ++u)
      if (live_vertex[static_cast<std::size_t>(u)]) vid[static_cast<std::size_t>(u)] = nv++;
    std::vector<GraphEdge> kept;
    std::vector<Word> sub;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!live_edge[e]) {
        sub.push_back(Word{});
        continue;
      }
      sub.push_back(Word{letter_for(static_cast<int>(kept.size()))});
      GraphEdge ed = edges[e];
      ed.from = vid[static_cast<std::size_t>(ed.from)];
      ed.to = vid[static_cast<std::size_t>(ed.to)];
      kept.push_back(ed);
    }
    for (auto& m : marking) m = Automorphism::substitute(sub, m);
    return MarkedGraph(alphabet_, nv, std::move(kept), std::move(marking), vid[static_cast<std::size_t>(base)]);
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "vertices " << vertices_ << '\n';
    if (base_ != 0) os << "base " << base_ << '\n';
    for (const auto& e : edges_) os << "edge " << e.from << ' ' << e.to << ' ' << ft::to_string(e.length) << '\n';
    for (int i = 0; i < rank(); ++i)
      os << alphabet_.name(i) << " -> " << format_path(marking_[static_cast<std::size_t>(i)]) << '\n';
    return os.str();
  }

  static std::string format_path(const Word& path) {
    std::string s;
    for (Letter l : path) {
      if (!s.empty()) s += ' ';
      s += "e" + std::to_string(generator_of(l)) + (l < 0 ? "'" : "");
    }
    return s;
  }

  /// Text form: `vertices N`, optional `base v`, `edge u v p/q` lines (edges
  /// numbered in order), and `gen -> e0 e2' ...` marking lines whose order
  /// fixes the alphabet.
  static MarkedGraph parse(std::istream& in) {
    int vertices = -1, base = 0;
    std::vector<GraphEdge> edges;
    std::vector<std::string> names;
    std::vector<std::string> paths;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) { throw ParseError("line " + std::to_string(lineno) + ": " + what); };
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string head;
      if (!(ls >> head)) continue;
      if (auto arrow = line.find("->"); arrow != std::string::npos) {
        std::istringstream lhs(line.substr(0, arrow));
        std::string name, extra;
        if (!(lhs >> name) || (lhs >> extra)) fail("bad generator name");
        names.push_back(name);
        paths.push_back(line.substr(arrow + 2));
      } else if (head == "vertices") {
        if (!(ls >> vertices) || vertices < 1) fail("bad vertex count");
      } else if (head == "base") {
        if (!(ls >> base)) fail("bad base vertex");
      } else if (head == "edge") {
        GraphEdge e;
        std::string len;
        if (!(ls >> e.from >> e.to >> len)) fail("expected 'edge <from> <to> <length>'");
        e.length = parse_rational(len);
        edges.push_back(e);
      } else {
        fail("unknown directive '" + head + "'");
      }
    }
    if (vertices < 0) throw ParseError("missing 'vertices' line");
    std::vector<Word> marking;
    for (const auto& p : paths) marking.push_back(parse_path(p, static_cast<int>(edges.size())));
    return MarkedGraph(Alphabet(names), vertices, std::move(edges), std::move(marking), base);
  }

  static Word parse_path(const std::string& text, int edge_count) {
    std::istringstream ts(text);
    std::string tok;
    std::vector<Letter> out;
    while (ts >> tok) {
      bool inv = !tok.empty() && tok.back() == '\'';
      if (inv) tok.pop_back();
      if (tok.size() < 2 || tok[0] != 'e') throw ParseError("bad edge token '" + tok + "'");
      int e = -1;
      try {
        e = std::stoi(tok.substr(1));
      } catch (const std::exception&) {
        throw ParseError("bad edge token '" + tok + "'");
      }
      if (e < 0 || e >= edge_count) throw ParseError("edge index out of range in '" + tok + "'");
      out.push_back(letter_for(e, inv));
    }
    return Word(std::move(out));
  }

  /// Shortest path from `root` to every vertex along a BFS tree.
  static void bfs_tree(int vertices, const std::vector<GraphEdge>& edges, int root, std::vector<Word>& to_vertex,
                       std::vector<char>& in_tree, std::vector<char>& seen) {
    std::vector<std::vector<Letter>> out(static_cast<std::size_t>(vertices));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out[static_cast<std::size_t>(edges[e].from)].push_back(static_cast<Letter>(e + 1));
      out[static_cast<std::size_t>(edges[e].to)].push_back(-static_cast<Letter>(e + 1));
    }
    std::queue<int> q;
    q.push(root);
    seen[static_cast<std::size_t>(root)] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (Letter l : out[static_cast<std::size_t>(u)]) {
        const auto& e = edges[static_cast<std::size_t>(generator_of(l))];
        int w = l > 0 ? e.to : e.from;
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        in_tree[static_cast<std::size_t>(generator_of(l))] = 1;
        to_vertex[static_cast<std::size_t>(w)] = to_vertex[static_cast<std::size_t>(u)] * Word{l};
        q.push(w);
      }
    }
  }

 private:
  void check_closed_path(const Word& p) const {
    int at = base_;
    for (Letter l : p) {
      if (generator_of(l) >= edge_count()) throw Error("marking uses a missing edge");
      if (tail(l) != at) throw Error("marking path is not connected");
      at = head(l);
    }
    if (at != base_) throw Error("marking path is not closed at the base");
  }

  void compute_inverse() {
    std::vector<Word> to_vertex(static_cast<std::size_t>(vertices_));
    std::vector<char> in_tree(edges_.size(), 0), seen(static_cast<std::size_t>(vertices_), 0);
    bfs_tree(vertices_, edges_, base_, to_vertex, in_tree, seen);
    if (std::count(seen.begin(), seen.end(), 0)) throw Error("graph is disconnected");
    std::vector<int> slot(edges_.size(), -1);
    int k = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (!in_tree[e]) slot[e] = k++;
    if (k != rank()) throw Error("graph rank does not match the alphabet");
    // π1(G, base) is free on the non-tree edges; read the marking in those coordinates
    std::vector<Word> coords;
    for (const auto& p : marking_) {
      std::vector<Letter> raw;
      for (Letter l : p) {
        int s = slot[static_cast<std::size_t>(generator_of(l))];
        if (s >= 0) raw.push_back(letter_for(s, l < 0));
      }
      coords.push_back(Word(std::move(raw)));
    }
    if (!is_automorphism(coords, k)) throw Error("marking is not a homotopy equivalence");
    auto inv = express_generators(coords, k);
    if (!inv) throw Error("marking is not a homotopy equivalence");
    edge_words_.assign(edges_.size(), Word{});
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (slot[e] >= 0) edge_words_[e] = (*inv)[static_cast<std::size_t>(slot[e])];
  }

  Alphabet alphabet_;
  int vertices_ = 0;
  int base_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<Word> marking_;
  std::vector<Word> edge_words_;
};

}  // namespace ft
