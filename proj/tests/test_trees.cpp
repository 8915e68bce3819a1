#include <gtest/gtest.h>

#include <random>

#include "freetwist/splitting.hpp"
#include "freetwist/tree.hpp"

using namespace ft;

namespace {

const Alphabet F2 = Alphabet::standard(2);
const Alphabet F3 = Alphabet::standard(3);

ValidatedSplitting corpus(const std::string& name) {
  return validate_splitting(ZSplitting::parse_file(std::string(FT_SAMPLES) + "/splittings/" + name + ".txt"));
}

// Brute-force relative twist on the same pool: every axis edge pair is tested
// by prefix tracing of all located witnesses, then translates are searched directly.
long brute_relative_twist(const TwistedTree& T1, const TwistedTree& T2, const Word& a, int W, long L) {
  Axis A1 = axis(T1, a, W), A2 = axis(T2, a, W);
  std::set<End> s;
  for (const auto& x : axis_pool(T1, A1, L, 2)) s.insert(x);
  for (const auto& x : axis_pool(T2, A2, L, 2)) s.insert(x);
  s.insert(A1.plus);
  s.insert(A1.minus);
  std::vector<End> at1, at2;
  for (const auto& x : s) {
    at1.push_back(T1.locate(x));
    at2.push_back(T2.locate(x));
  }
  const long p = static_cast<long>(A1.period());
  const long n = 2 * W;
  std::vector<std::vector<char>> side1(n), side2(n);
  for (long i = 0; i < n; ++i)
    for (std::size_t x = 0; x < at1.size(); ++x) {
      side1[i].push_back(A1.edge(i - W).head_side(at1[x]));
      side2[i].push_back(A2.edge(i - W).head_side(at2[x]));
    }
  auto square = [&](long i, long j) {
    int seen = 0;
    for (std::size_t x = 0; x < at1.size(); ++x) seen |= 1 << corner_index(side1[i][x], side2[j][x]);
    return seen == 15;
  };
  std::vector<std::vector<char>> sq(n, std::vector<char>(n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) sq[i][j] = square(i, j);
  long best = 0;
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) {
      if (!sq[i][j]) continue;
      for (long k = 1; i + k * p < n; ++k)
        if (sq[i + k * p][j]) best = std::max(best, k);
    }
  return best;
}

}  // namespace

TEST(TreeWindow, VertexCounts) {
  EXPECT_EQ(TreeWindow(2, 1).vertex_count(), 5u);
  EXPECT_EQ(TreeWindow(2, 2).vertex_count(), 17u);
  EXPECT_EQ(TreeWindow(3, 2).vertex_count(), 37u);
  for (int k : {2, 3})
    for (int W : {1, 2, 3}) EXPECT_EQ(TreeWindow(k, W).vertices().size(), TreeWindow(k, W).vertex_count());
  EXPECT_EQ(TreeWindow(2, 3).edges().size(), TreeWindow(2, 3).vertex_count() - 1);
  EXPECT_THROW(TreeWindow(3, 40).vertices(), ResourceError);
}

TEST(End, Normalization) {
  Word a = F2.parse("a"), b = F2.parse("b");
  EXPECT_EQ(End(a * b, b), End(a, b));
  EXPECT_EQ(End(Word{}, a * a), End::forward(a));
  EXPECT_EQ(End(b, a * b * b.inverse()), End(b * a * b.inverse(), b * a * b.inverse()));
  EXPECT_EQ(End::forward(b * a * b.inverse()).prefix(), b);
  EXPECT_EQ(common_prefix(End::forward(a), End::forward(a)), End::kInfinite);
  EXPECT_EQ(common_prefix(End(a * a, b), End(a, a * b)), 3u);
  // a b (b' a)^inf = a (a b')^inf after cancelling b' against the prefix
  End e(a * b, b.inverse() * a);
  EXPECT_EQ(e.prefix(), a);
  EXPECT_EQ(e.period(), a * b.inverse());
}

TEST(End, ApplyIsLimitOfPowers) {
  std::mt19937 rng(4);
  Automorphism phi(F3, {F3.parse("a b"), F3.parse("b c"), F3.parse("c")});
  ASSERT_TRUE(phi.verified());
  for (const auto& u : all_reduced_words(3, 2))
    for (const auto& v : all_reduced_words(3, 2, 1)) {
      End xi(u, v);
      End img = xi.apply(phi);
      Word approx = phi.apply(u * v.power(40));
      for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(img.at(i), approx[i]);
    }
}

TEST(TwistedTree, IdentityMatchesRose) {
  auto T = TwistedTree::rose(F2);
  for (const auto& e : TreeWindow(2, 2).edges())
    for (const auto& xi : word_endpoints(2, 3)) EXPECT_EQ(T.side(e, xi), e.head_side(xi));
}

TEST(TwistedTree, EquivariantAction) {
  auto vs = corpus("f3_amalgam");
  TwistedTree T(twist_power(vs, 3));
  auto ends = word_endpoints(3, 2);
  auto edges = TreeWindow(3, 2).edges();
  for (const auto& g : all_reduced_words(3, 2)) {
    Word acting = T.acting(g);
    for (std::size_t e = 0; e < edges.size(); e += 5)
      for (const auto& xi : ends)
        EXPECT_EQ(T.side(edges[e].translate(acting), xi.translate(g)), T.side(edges[e], xi));
  }
  // the definition: D-sides of ξ are rose sides of D⁻¹ξ
  auto R = TwistedTree::rose(F3);
  for (const auto& e : edges)
    for (const auto& xi : ends) EXPECT_EQ(T.side(e, xi), R.side(e, xi.apply(T.phi_inverse())));
}

TEST(Axis, Examples) {
  auto R = TwistedTree::rose(F2);
  auto A = axis(R, F2.parse("a"), 3);
  auto line = A.clipped(3);
  std::vector<Word> expect{F2.parse("a' a' a'"), F2.parse("a' a'"), F2.parse("a'"), Word{}, F2.parse("a"),
                           F2.parse("a a"), F2.parse("a a a")};
  EXPECT_EQ(line, expect);
  auto B = axis(R, F2.parse("b a b'"), 3);
  EXPECT_EQ(B.vertex(0), F2.parse("b"));
  EXPECT_EQ(B.vertex(1), F2.parse("b a"));
  auto C = axis(R, commutator(F2.parse("a"), F2.parse("b")), 8);
  EXPECT_EQ(C.period(), 4u);
  EXPECT_EQ(C.vertex(4), commutator(F2.parse("a"), F2.parse("b")));
  EXPECT_EQ(C.clipped(8).size(), 17u);
  EXPECT_THROW(axis(R, F2.parse("b b a a b' b'"), 3), ResourceError);
}

TEST(Axis, SeparationExamples) {
  auto R = TwistedTree::rose(F2);
  auto A = axis(R, F2.parse("a"), 3);
  EXPECT_TRUE(edge_separates_axis(R, TreeEdge::from(Word{}, 1), A));
  EXPECT_FALSE(edge_separates_axis(R, TreeEdge::from(Word{}, 2), A));
  auto B = axis(R, F2.parse("b a b'"), 3);
  // the a-edge at vertex b lies on the conjugated axis; the b-edge leaving b does not
  EXPECT_TRUE(edge_separates_axis(R, TreeEdge::from(F2.parse("b"), 1), B));
  EXPECT_FALSE(edge_separates_axis(R, TreeEdge::from(F2.parse("b"), 2), B));
  // the edge from the base to b hangs off that axis
  EXPECT_FALSE(edge_separates_axis(R, TreeEdge::from(Word{}, 2), B));
}

TEST(Axis, SeparationMatchesLineCrossing) {
  auto vs = corpus("f3_amalgam");
  for (int n : {0, 2}) {
    TwistedTree T(twist_power(vs, n));
    for (const auto& g : {F3.parse("a"), F3.parse("c a c'"), F3.parse("a b c"), F3.parse("b c' b' a")}) {
      auto A = axis(T, g, 60);
      auto line = A.clipped(4);
      std::set<Word> on(line.begin(), line.end());
      for (const auto& e : TreeWindow(3, 4).edges()) {
        bool crosses = on.count(e.tail) && on.count(e.head);
        EXPECT_EQ(edge_separates_axis(T, e, A), crosses);
      }
    }
  }
}

TEST(CoreSquare, TrivialCases) {
  auto R = TwistedTree::rose(F2);
  auto pool = default_pool(R, R, 4);
  auto ea = TreeEdge::from(Word{}, 1);
  EXPECT_FALSE(core_square(R, ea, R, ea, pool));
  EXPECT_FALSE(core_square(R, ea, R, TreeEdge::from(Word{}, 2), pool));
  EXPECT_FALSE(core_square(R, ea, R, TreeEdge::from(F2.parse("a b"), 1), pool));
}

TEST(CoreSquare, TwistedCertificate) {
  auto vs = corpus("f3_amalgam");
  auto R = TwistedTree::rose(F3);
  TwistedTree T(twist_power(vs, 3));
  auto res = relative_twist_lower_bound(R, T, vs.data().c, 40, 20);
  ASSERT_TRUE(res.first);
  EXPECT_TRUE(verify_certificate(R, T, *res.first));
  EXPECT_TRUE(verify_certificate(R, T, *res.translated));
  // an a-edge on the w-axis crosses some edge of the twisted axis
  Axis A = axis(R, vs.data().c, 8);
  Word w = vs.data().c;
  auto pool = default_pool(R, T, 6);
  bool found = false;
  for (long j = -8; j < 8 && !found; ++j) {
    auto cert = core_square(R, A.edge(0), T, axis(T, w, 8).edge(j), pool);
    if (cert) {
      found = true;
      EXPECT_TRUE(verify_certificate(R, T, *cert));
    }
  }
  EXPECT_TRUE(found);
}

TEST(CoreVolume, Values) {
  auto R2 = TwistedTree::rose(F2);
  EXPECT_EQ(core_volume_lower_bound(R2, R2, 3, 4).squares, 0u);
  TwistedTree N(Automorphism(F2, {F2.parse("a b"), F2.parse("b")}));
  auto nielsen = core_volume_lower_bound(R2, N, 3, 4);
  // one Nielsen move: both roses collapse the same theta graph, so the trees are compatible
  EXPECT_EQ(nielsen.squares, 0u);
  for (const auto& c : nielsen.certificates) EXPECT_TRUE(verify_certificate(R2, N, c));
  auto vs = corpus("f3_amalgam");
  auto R3 = TwistedTree::rose(F3);
  TwistedTree D2(twist_power(vs, 2));
  auto twisted = core_volume_lower_bound(R3, D2, 3, 4);
  EXPECT_GE(twisted.squares, 1u);
  for (const auto& c : twisted.certificates) EXPECT_TRUE(verify_certificate(R3, D2, c));
}

TEST(CoreVolume, Monotone) {
  auto vs = corpus("f3_amalgam");
  auto R = TwistedTree::rose(F3);
  TwistedTree D(twist_power(vs, 1));
  std::size_t prev = 0;
  for (auto [W, L] : {std::pair{2, 2}, {2, 3}, {3, 3}, {3, 4}}) {
    auto v = core_volume_lower_bound(R, D, W, static_cast<std::size_t>(L)).squares;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(RelativeTwist, SelfIsZero) {
  auto R = TwistedTree::rose(F3);
  EXPECT_EQ(relative_twist_lower_bound(R, R, F3.parse("a b a' b'"), 16, 8).value, 0);
  auto vs = corpus("f3_amalgam");
  TwistedTree D(twist_power(vs, 2));
  EXPECT_EQ(relative_twist_lower_bound(D, D, vs.data().c, 16, 8).value, 0);
}

TEST(RelativeTwist, TwistLowerBounds) {
  auto vs = corpus("f3_amalgam");
  auto R = TwistedTree::rose(F3);
  const Word& c = vs.data().c;
  auto r4 = relative_twist_lower_bound(R, TwistedTree(twist_power(vs, 4)), c, 48, 24);
  EXPECT_GE(r4.value, 3);
  auto r2 = relative_twist_lower_bound(R, TwistedTree(twist_power(vs, 2)), c, 32, 16);
  EXPECT_GE(r2.value, 1);
}

TEST(RelativeTwist, MatchesBruteForce) {
  for (const std::string name : {"f3_amalgam", "f3_hnn", "f3_hnn_comm"}) {
    auto vs = corpus(name);
    auto R = TwistedTree::rose(vs.data().alphabet);
    for (int n : {1, 2, 3}) {
      TwistedTree T(twist_power(vs, n));
      int W = 4 * (n + 2) * static_cast<int>(vs.data().c.size());
      long L = W / 2;
      EXPECT_EQ(relative_twist_lower_bound(R, T, vs.data().c, W, L).value, brute_relative_twist(R, T, vs.data().c, W, L))
          << name << " n=" << n;
    }
  }
}

TEST(RelativeTwist, MonotoneInBudgets) {
  auto vs = corpus("f4_amalgam");
  auto R = TwistedTree::rose(vs.data().alphabet);
  TwistedTree T(twist_power(vs, 3));
  long prev = -1;
  for (auto [W, L] : {std::pair{12, 4L}, {24, 8L}, {36, 12L}, {60, 30L}}) {
    long v = relative_twist_lower_bound(R, T, vs.data().c, W, L).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(RelativeTwist, EquivariantUnderConjugation) {
  auto vs = corpus("f3_amalgam");
  const auto& al = vs.data().alphabet;
  auto D = twist_power(vs, 3);
  auto id = Automorphism::identity(al);
  for (const auto& g : {al.parse("a"), al.parse("b c"), al.parse("c' a")}) {
    std::vector<Word> img;
    for (int x = 0; x < 3; ++x) img.push_back(g * Word::generator(x) * g.inverse());
    Automorphism inner(al, img);
    ASSERT_TRUE(inner.verified());
    long base = relative_twist_lower_bound(TwistedTree(id), TwistedTree(D), vs.data().c, 40, 20).value;
    long moved = relative_twist_lower_bound(TwistedTree(compose(inner, id)), TwistedTree(compose(inner, D)),
                                            g * vs.data().c * g.inverse(), 40, 20)
                     .value;
    EXPECT_EQ(base, moved);
  }
}
