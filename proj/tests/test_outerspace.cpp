#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "freetwist/projection.hpp"
#include "freetwist/random_graph.hpp"
#include "freetwist/splitting.hpp"

using namespace ft;

namespace {

MarkedGraph graph_file(const std::string& name) {
  std::ifstream in(std::string(FT_SAMPLES) + "/graphs/" + name + ".txt");
  return MarkedGraph::parse(in);
}

MarkedGraph graph_text(const std::string& s) {
  std::istringstream in(s);
  return MarkedGraph::parse(in);
}

ValidatedSplitting splitting(const std::string& name) {
  return validate_splitting(ZSplitting::parse_file(std::string(FT_SAMPLES) + "/splittings/" + name + ".txt"));
}

Rational q(long p, long d = 1) { return Rational(p, d); }

// Rose lengths summed letter by letter over the cyclic reduction.
Rational rose_length(const std::vector<Rational>& petals, const Word& w) {
  Rational s = 0;
  for (Letter l : cyclic_reduce(w).core) s += petals[static_cast<std::size_t>(generator_of(l))];
  return s;
}

}  // namespace

TEST(MarkedGraph, TranslationLengthExamples) {
  auto g = graph_file("rose3");
  const auto& al = g.alphabet();
  EXPECT_EQ(g.translation_length(al.parse("a")), q(1, 3));
  EXPECT_EQ(g.translation_length(al.parse("b a b'")), q(1, 3));
  EXPECT_EQ(g.translation_length(al.parse("a b a' b'")), q(4, 3));
  EXPECT_EQ(g.translation_length(Word{}), 0);
  EXPECT_EQ(g.volume(), 1);
}

TEST(MarkedGraph, RoseLengthsMatchLetterCount) {
  auto g = graph_file("rose3_skew");
  std::vector<Rational> petals{q(1, 2), q(1, 4), q(1, 4)};
  for (const auto& w : all_reduced_words(3, 4)) EXPECT_EQ(g.translation_length(w), rose_length(petals, w));
}

TEST(MarkedGraph, ConjugacyInvarianceAndScaling) {
  std::mt19937_64 rng(11);
  auto al = Alphabet::standard(3);
  auto words = all_reduced_words(3, 3, 1);
  for (int t = 0; t < 10; ++t) {
    auto g = random_marked_graph(al, rng, 6, 2);
    std::vector<Rational> doubled;
    for (const auto& e : g.edges()) doubled.push_back(2 * e.length);
    auto h = g.with_lengths(doubled);
    for (std::size_t i = 0; i < words.size(); i += 7) {
      const Word& w = words[i];
      const Word& u = words[(i * 13 + 5) % words.size()];
      EXPECT_EQ(g.translation_length(u * w * u.inverse()), g.translation_length(w));
      EXPECT_EQ(h.translation_length(w), 2 * g.translation_length(w));
      EXPECT_EQ(g.translation_length(w) == 0, w.empty());
    }
  }
}

TEST(MarkedGraph, HomotopyInverseRoundTrips) {
  for (const char* name : {"rose3", "theta3", "barbell2"}) {
    auto g = graph_file(name);
    for (int i = 0; i < g.rank(); ++i)
      EXPECT_EQ(g.path_word(g.image(Word::generator(i))), Word::generator(i)) << name;
  }
}

TEST(MarkedGraph, TextRoundTrip) {
  for (const char* name : {"rose3", "theta3", "barbell2"}) {
    auto g = graph_file(name);
    auto h = graph_text(g.to_text());
    EXPECT_EQ(h.edges(), g.edges());
    EXPECT_EQ(h.marking(), g.marking());
    EXPECT_EQ(h.alphabet(), g.alphabet());
  }
}

TEST(MarkedGraph, RejectsBadInput) {
  EXPECT_THROW(graph_text("vertices 1\nedge 0 0 1/2\nedge 0 0 1/2\na -> e0\nb -> e0\n"), Error);  // not a h.e.
  EXPECT_THROW(graph_text("vertices 2\nedge 0 1 1\nedge 0 1 1\nedge 0 1 1\na -> e0\nb -> e1 e2'\n"), Error);  // open
  EXPECT_THROW(graph_text("vertices 1\nedge 0 0 0\nedge 0 0 1\na -> e0\nb -> e1\n"), Error);  // zero length
  EXPECT_THROW(graph_text("vertices 1\nedge 0 0 1/0\na -> e0\n"), ParseError);
  EXPECT_THROW(graph_text("vertices 1\nedge 0 0 1\na -> f0\n"), ParseError);
  EXPECT_THROW(graph_text("vertices 1\nedge 0 0 1\na -> e3\n"), ParseError);
  EXPECT_THROW(graph_text("vertex 1\n"), ParseError);
  EXPECT_THROW(graph_text("edge 0 0 1\na -> e0\n"), ParseError);
}

TEST(MarkedGraph, SimplifiedKeepsLengths) {
  // subdivide every petal of the twisted rose and check nothing changes after erasing
  auto vs = splitting("f3_amalgam");
  auto g = MarkedGraph::twisted_rose(dehn_twist(vs));
  std::vector<GraphEdge> edges;
  std::vector<Word> sub;
  for (int e = 0; e < g.edge_count(); ++e) {
    int mid = e + 1;
    edges.push_back({0, mid, g.edge(e).length / 3});
    edges.push_back({mid, 0, 2 * g.edge(e).length / 3});
    sub.push_back(Word{letter_for(2 * e), letter_for(2 * e + 1)});
  }
  std::vector<Word> marking;
  for (const auto& m : g.marking()) marking.push_back(Automorphism::substitute(sub, m));
  MarkedGraph fine(g.alphabet(), 4, edges, marking);
  auto s = fine.simplified();
  EXPECT_EQ(s.vertex_count(), 1);
  EXPECT_GE(s.min_valence(), 3);
  for (const auto& w : all_reduced_words(3, 3, 1)) EXPECT_EQ(s.translation_length(w), g.translation_length(w));
}

TEST(Lipschitz, Examples) {
  auto r = graph_file("rose3");
  auto s = stretch_factor(r, r);
  EXPECT_EQ(s.factor, 1);
  EXPECT_DOUBLE_EQ(lipschitz_distance(r, r), 0.0);

  auto skew = graph_file("rose3_skew");
  s = stretch_factor(r, skew);
  EXPECT_EQ(s.factor, q(3, 2));
  EXPECT_EQ(s.witness, CyclicWord(r.alphabet().parse("a")));
  EXPECT_EQ(stretch_factor_brute_force(r, skew).factor, q(3, 2));

  auto vs = splitting("f3_hnn");
  const auto& al = vs.data().alphabet;
  auto rose = MarkedGraph::uniform_rose(al);
  auto twisted = MarkedGraph::twisted_rose(dehn_twist(vs));
  s = stretch_factor(rose, twisted);
  EXPECT_EQ(s.factor, 2);
  EXPECT_EQ(s.witness, CyclicWord(al.parse("t")));
  EXPECT_EQ(stretch_factor_brute_force(rose, twisted).factor, 2);
}

TEST(Lipschitz, CandidatesMatchBruteForce) {
  std::mt19937_64 rng(2024);
  auto al = Alphabet::standard(3);
  for (int t = 0; t < 40; ++t) {
    auto g1 = random_marked_graph(al, rng, 6);
    auto g2 = random_marked_graph(al, rng, 6, 3);
    auto cand = stretch_factor(g1, g2);
    auto brute = stretch_factor_brute_force(g1, g2, 6);
    EXPECT_EQ(cand.factor, brute.factor) << g1.to_text() << g2.to_text();
    EXPECT_EQ(g2.translation_length(cand.witness.word()) / g1.translation_length(cand.witness.word()), cand.factor);
  }
}

TEST(Lipschitz, TriangleInequalityAndAsymmetry) {
  std::mt19937_64 rng(5);
  auto al = Alphabet::standard(3);
  bool asymmetric = false;
  for (int t = 0; t < 15; ++t) {
    auto a = random_marked_graph(al, rng, 6, 1);
    auto b = random_marked_graph(al, rng, 6, 2);
    auto c = random_marked_graph(al, rng, 6, 2);
    auto ab = stretch_factor(a, b).factor, bc = stretch_factor(b, c).factor, ac = stretch_factor(a, c).factor;
    EXPECT_LE(ac, ab * bc);  // exact form of d(a,c) ≤ d(a,b) + d(b,c)
    EXPECT_GE(ab, 1);
    if (ab != stretch_factor(b, a).factor) asymmetric = true;
  }
  EXPECT_TRUE(asymmetric);
}

TEST(FoldPath, IdenticalEndpointsGiveOnePoint) {
  auto r = graph_file("rose3");
  auto p = fold_path(r, r);
  ASSERT_EQ(p.size(), 1u);
  auto [i, v] = min_length_along_path(p, r.alphabet().parse("a"));
  EXPECT_EQ(i, 0u);
  EXPECT_EQ(v, q(1, 3));
  EXPECT_EQ(ff_chain_upper_bound(r, r), 0);
}

TEST(FoldPath, NielsenMove) {
  auto al = Alphabet::standard(2);
  auto r = MarkedGraph::uniform_rose(al);
  auto target = MarkedGraph::twisted_rose(Automorphism(al, {al.parse("a b"), al.parse("b")}));
  auto p = fold_path(r, target);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.steps, (std::vector<std::string>{"source", "pullback", "fold"}));
  EXPECT_TRUE(same_point(p.points.back(), target));
  // pulled-back lengths: the a petal covers two edges of the target
  EXPECT_EQ(p.points[1].edges()[0].length, q(2, 3));
  EXPECT_EQ(p.points[1].edges()[1].length, q(1, 3));

  auto fine = fold_path(r, target, {100, 2});
  ASSERT_EQ(fine.size(), 4u);
  const auto& mid = fine.points[2];
  EXPECT_EQ(fine.steps[2], "partial");
  EXPECT_EQ(mid.vertex_count(), 2);  // theta graph
  EXPECT_EQ(mid.edge_count(), 3);
  EXPECT_EQ(mid.translation_length(al.parse("a")), q(4, 5));
  EXPECT_EQ(mid.translation_length(al.parse("b")), q(2, 5));
  EXPECT_EQ(mid.translation_length(al.parse("a b'")), q(4, 5));

  EXPECT_LE(ff_chain_upper_bound(p), 8);
}

TEST(FoldPath, EndsAtTargetWithUnitVolume) {
  std::mt19937_64 rng(99);
  auto al = Alphabet::standard(3);
  for (int t = 0; t < 8; ++t) {
    auto g1 = random_marked_graph(al, rng, 6, 1);
    auto g2 = random_marked_graph(al, rng, 6, 2);
    auto p = fold_path(g1, g2, {100000, 2});
    EXPECT_TRUE(same_point(p.points.front(), g1));
    EXPECT_TRUE(same_point(p.points.back(), g2));
    for (const auto& pt : p.points) {
      EXPECT_EQ(pt.volume(), 1);
      EXPECT_GE(pt.min_valence(), 3);
    }
  }
}

TEST(FoldPath, TwistedRose) {
  for (const char* name : {"f3_amalgam", "f4_amalgam"}) {
    auto vs = splitting(name);
    const Word& c = vs.data().c;
    auto r = MarkedGraph::uniform_rose(vs.data().alphabet);
    Rational previous = 2;
    for (int n : {4, 6, 8, 10}) {
      auto target = MarkedGraph::twisted_rose(twist_power(vs, n));
      auto p = fold_path(r, target);
      EXPECT_TRUE(same_point(p.points.back(), target));
      auto [i, v] = min_length_along_path(p, c);
      EXPECT_LE(v, previous) << name << " n=" << n;
      if (n >= 6) EXPECT_LE(v * (n - 3), 1) << name << " n=" << n;
      previous = v;
    }
  }
  auto vs = splitting("f3_amalgam");
  auto p = fold_path(MarkedGraph::uniform_rose(vs.data().alphabet), MarkedGraph::twisted_rose(twist_power(vs, 6)));
  auto [i, v] = min_length_along_path(p, vs.data().c);
  EXPECT_EQ(i, 1u);
  EXPECT_EQ(v, q(4, 51));  // |[a,b]| = 4 against volume 8·6+3 after pulling back
  EXPECT_LT(v, q(1, 3));
  // the petal a is never folded: its length only moves by renormalization
  auto [ia, va] = min_length_along_path(p, vs.data().alphabet.parse("a"));
  EXPECT_EQ(ia, 1u);
  EXPECT_EQ(va, q(1, 51));
  EXPECT_EQ(ff_chain_upper_bound(p), 0);
}

TEST(FoldPath, StepBudget) {
  auto vs = splitting("f3_amalgam");
  auto r = MarkedGraph::uniform_rose(vs.data().alphabet);
  EXPECT_THROW(fold_path(r, MarkedGraph::twisted_rose(twist_power(vs, 6)), {5, 1}), ResourceError);
}

TEST(Projection, RoseSubgraphs) {
  auto r = graph_file("rose3");
  const auto& al = r.alphabet();
  EXPECT_EQ(project_to_ff(r, {0}), FreeFactor::from_generators({al.parse("a")}, 3));
  EXPECT_EQ(project_to_ff(r, {0, 1}), FreeFactor::from_generators({al.parse("a"), al.parse("b")}, 3));
  EXPECT_THROW(project_to_ff(r, {}), Error);
  EXPECT_THROW(project_to_ff(r, {0, 1, 2}), std::invalid_argument);
  auto b = graph_file("barbell2");
  EXPECT_THROW(project_to_ff(b, {1}), Error);  // the bar is a forest
  EXPECT_EQ(project_to_ff(b, {2}), FreeFactor::from_generators({b.alphabet().parse("b")}, 2));
  EXPECT_EQ(all_projections(r).size(), 6u);
}

TEST(Projection, ThetaAfterPartialFold) {
  auto vs = splitting("f3_amalgam");
  const auto& al = vs.data().alphabet;
  auto p = fold_path(MarkedGraph::uniform_rose(al), MarkedGraph::twisted_rose(dehn_twist(vs)), {1000, 2});
  std::size_t idx = 0;
  while (p.steps[idx] != "partial") ++idx;
  const auto& g = p.points[idx];
  ASSERT_EQ(g.vertex_count(), 2);
  // circle through the first two of the three edges between the vertices
  std::vector<int> circle;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).from != g.edge(e).to) circle.push_back(e);
  ASSERT_EQ(circle.size(), 3u);
  circle.pop_back();
  auto f = project_to_ff(g, circle);
  EXPECT_EQ(f.rank(), 1);
  EXPECT_EQ(f, FreeFactor::from_generators({al.parse("a' c")}, 3));
}

TEST(Bounds, CrossingAndLengthConstants) {
  EXPECT_EQ(crossing_bound_to_ff_distance(0), 13);
  EXPECT_EQ(crossing_bound_to_ff_distance(2), 25);
  EXPECT_EQ(length_to_ff_distance(1, 3), 85);
  EXPECT_EQ(length_to_ff_distance(0, 3), 13);
  EXPECT_EQ(length_to_ff_distance(q(1, 12), 3), 19);
  EXPECT_EQ(length_to_ff_distance(q(1, 11), 3), 25);
  EXPECT_THROW(crossing_bound_to_ff_distance(-1), std::invalid_argument);
  EXPECT_THROW(length_to_ff_distance(1, 2), std::invalid_argument);
}

TEST(Bounds, TwistDistanceConstants) {
  auto t = twist_constants(0, 3, 0);
  EXPECT_EQ(t.A, 72);
  EXPECT_EQ(t.C_prime, 170);
  EXPECT_EQ(t.N, 340);
  EXPECT_EQ(twist_constants(100, 3, 0).C_prime, 370);
  for (int k = 3; k <= 6; ++k)
    for (int c = 0; c <= 50; c += 25)
      for (int h = 0; h <= 10; h += 5)
        for (int c1 = 0; c1 <= 400; c1 += 200) {
          auto x = twist_constants(c, k, h, c1);
          EXPECT_EQ(x.C_prime, 2 * (6 * (3 * k + 3) + c + h + 13));
          EXPECT_EQ(x.N, 2 * x.C_prime + c1);
        }
}
