#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "freetwist/pingpong.hpp"

using namespace ft;

namespace {

Rational q(long p, long d = 1) { return Rational(p, d); }

FiniteGraphSpace tripod() {
  return FiniteGraphSpace(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
}

FiniteGraphSpace random_tree(std::mt19937& rng, int n) {
  std::vector<FiniteGraphSpace::WeightedEdge> es;
  for (int v = 1; v < n; ++v) es.push_back({v, static_cast<int>(rng() % static_cast<unsigned>(v)), 1});
  return FiniteGraphSpace(n, std::move(es));
}

// δ from the Gromov product form: (x,z)_w ≥ min{(x,y)_w, (y,z)_w} − δ over all ordered choices.
Rational delta_by_products(const FiniteGraphSpace& s) {
  Rational worst = 0;
  const int n = s.size();
  for (int w = 0; w < n; ++w)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          Rational lo = std::min(gromov_product(s, w, x, y), gromov_product(s, w, y, z));
          Rational gap = lo - gromov_product(s, w, x, z);
          if (gap > worst) worst = gap;
        }
  return worst;
}

std::vector<FiniteGraphSpace> small_spaces() {
  std::mt19937 rng(7);
  std::vector<FiniteGraphSpace> out{FiniteGraphSpace::cycle(4), FiniteGraphSpace::cycle(5), FiniteGraphSpace::cycle(8),
                                    FiniteGraphSpace::grid(3, 3), FiniteGraphSpace::grid(4, 2),
                                    FiniteGraphSpace::regular_tree_ball(3, 2)};
  for (int i = 0; i < 3; ++i) out.push_back(random_tree(rng, 9));
  return out;
}

CubicTree::Isometry rot(const CubicTree::Point& c) { return {c, 1}; }

}  // namespace

TEST(Hyperbolic, GromovProductExamples) {
  auto t = tripod();
  EXPECT_EQ(gromov_product(t, 1, 2, 3), q(1));
  auto p = FiniteGraphSpace::path(6);
  EXPECT_EQ(gromov_product(p, 0, 4, 4), q(4));
  EXPECT_EQ(gromov_product(p, 2, 0, 5), q(0));
  auto c = FiniteGraphSpace::cycle(6);
  EXPECT_EQ(gromov_product(c, 0, 2, 4), q(1));
}

TEST(Hyperbolic, DeltaExamples) {
  std::mt19937 rng(11);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(delta_from_quadruples(random_tree(rng, 12)), q(0));
  EXPECT_EQ(delta_from_quadruples(FiniteGraphSpace::cycle(4)), q(1));
  EXPECT_EQ(delta_from_quadruples(FiniteGraphSpace(1, {})), q(0));
  EXPECT_EQ(delta_from_quadruples(CubicTree{}, CubicTree{}.ball({}, 3)), q(0));
}

TEST(Hyperbolic, DeltaMatchesGromovProductForm) {
  for (const auto& s : small_spaces()) EXPECT_EQ(delta_from_quadruples(s), delta_by_products(s));
}

TEST(Hyperbolic, DistanceToGeodesicsSandwich) {
  for (const auto& s : small_spaces()) {
    Rational delta = delta_from_quadruples(s);
    for (int x = 0; x < s.size(); ++x)
      for (int y = 0; y < s.size(); ++y)
        for (int z = 0; z < s.size(); ++z) {
          auto [lo, hi] = distance_to_geodesics(s, x, y, z);
          Rational g = gromov_product(s, x, y, z);
          EXPECT_LE(g, Rational(lo));
          EXPECT_LE(Rational(hi), g + 2 * delta);
        }
  }
}

TEST(Hyperbolic, QuasiProjectionExamples) {
  auto p = FiniteGraphSpace::path(7);
  auto onto = quasi_projection(p, 3, {1, 2, 3, 4}, 1, q(0), q(0));
  EXPECT_EQ(onto.point, 3);
  EXPECT_EQ(onto.distance, 0);

  // a segment of a tree: the projection is where the branch attaches
  FiniteGraphSpace t(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {4, 5, 1}});
  auto seg = quasi_projection(t, 5, {0, 1, 2, 3}, 0, q(0), q(0));
  EXPECT_EQ(seg.point, 2);
  EXPECT_EQ(seg.distance, 2);
  EXPECT_EQ(seg.gap, 0);

  // C4: 2 sees both neighbours of 0 at distance 1
  auto c4 = FiniteGraphSpace::cycle(4);
  auto anti = quasi_projection(c4, 2, {1, 3}, 0, q(1), q(0));
  EXPECT_EQ(anti.distance, 1);
  EXPECT_EQ(anti.gap, 2);
  EXPECT_TRUE(anti.within());
}

TEST(Hyperbolic, QuasiProjectionsToHullsStayClose) {
  std::mt19937 rng(5);
  for (const auto& s : small_spaces()) {
    Rational delta = delta_from_quadruples(s);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> ys{static_cast<int>(rng() % static_cast<unsigned>(s.size())),
                          static_cast<int>(rng() % static_cast<unsigned>(s.size()))};
      auto h = hull(s, ys);
      for (int x = 0; x < s.size(); ++x)
        for (long eps : {0L, 1L}) EXPECT_TRUE(quasi_projection(s, x, h, eps, delta, 2 * delta).within());
    }
  }
}

TEST(Hyperbolic, HullContainsGeodesics) {
  auto g = FiniteGraphSpace::grid(3, 3);
  auto h = hull(g, {0, 8});
  EXPECT_EQ(h.size(), 9u);
  auto line = hull(FiniteGraphSpace::path(5), {1, 3});
  EXPECT_EQ(line, (std::vector<int>{1, 2, 3}));
}

TEST(Hyperbolic, ConcatenationCheck) {
  auto p = FiniteGraphSpace::path(400);
  EXPECT_EQ(concat_quasigeodesic_check(p, 0, 10, 300, 399, q(1)), QuasiGeodesicVerdict::Holds);
  EXPECT_EQ(concat_quasigeodesic_check(p, 0, 10, 50, 399, q(1)), QuasiGeodesicVerdict::HypothesisViolated);

  // tripod with both feet at the center
  auto t = tripod();
  EXPECT_EQ(concat_quasigeodesic_check(t, 1, 0, 0, 2, q(0)), QuasiGeodesicVerdict::HypothesisViolated);

  // δ = 0 tree: feet on the bridge between two almost fixed sets
  CubicTree tree;
  auto u = CubicTree::Point{}, v = CubicTree::zigzag(16);
  auto xp = tree.geodesic(u, v)[2], xq = tree.geodesic(u, v)[14];
  auto p1 = tree.apply(rot(u), xq), q1 = tree.apply(rot(v), xp);
  EXPECT_EQ(tree.distance(xp, xq), 12);
  EXPECT_EQ(concat_quasigeodesic_check(tree, p1, xp, xq, q1, q(0)), QuasiGeodesicVerdict::Holds);

  // backtracking through x_p breaks the inequality
  EXPECT_EQ(concat_quasigeodesic_check(p, 20, 10, 300, 399, q(0)), QuasiGeodesicVerdict::HypothesisViolated);
  auto c = FiniteGraphSpace::cycle(8);
  EXPECT_EQ(concat_quasigeodesic_check(c, 0, 2, 5, 0, q(0)), QuasiGeodesicVerdict::HypothesisViolated);
}

TEST(Hyperbolic, IsometryRegistration) {
  auto c4 = FiniteGraphSpace::cycle(4);
  EXPECT_NO_THROW(c4.make_isometry({1, 2, 3, 0}));
  EXPECT_NO_THROW(c4.make_isometry({0, 3, 2, 1}));
  EXPECT_THROW(c4.make_isometry({1, 0, 2, 3}), Error);
  EXPECT_THROW(c4.make_isometry({0, 0, 2, 3}), Error);
  EXPECT_THROW(c4.make_isometry({0, 1, 2}), Error);
}

TEST(Hyperbolic, ParseSpaceFiles) {
  std::ifstream in(std::string(FT_SAMPLES) + "/spaces/hexagon.txt");
  auto hex = FiniteGraphSpace::parse(in);
  EXPECT_EQ(hex.size(), 6);
  EXPECT_EQ(hex.diameter(), 3);
  std::ifstream iso_in(std::string(FT_SAMPLES) + "/spaces/hexagon_isometries.txt");
  auto isos = hex.parse_isometries(iso_in);
  ASSERT_EQ(isos.size(), 2u);
  EXPECT_EQ(isos[0].first, "rot");
  EXPECT_EQ(hex.apply(isos[0].second, 5), 0);

  std::ifstream tin(std::string(FT_SAMPLES) + "/spaces/tripod.txt");
  auto tri = FiniteGraphSpace::parse(tin);
  std::ifstream tiso(std::string(FT_SAMPLES) + "/spaces/tripod_isometries.txt");
  EXPECT_EQ(tri.parse_isometries(tiso).size(), 2u);

  std::istringstream bad("vertices 2\nedge 0 1\nbogus\n");
  EXPECT_THROW(FiniteGraphSpace::parse(bad), ParseError);
  std::istringstream split("vertices 3\nedge 0 1\n");
  EXPECT_THROW(FiniteGraphSpace::parse(split), Error);
  std::istringstream wrong("r 1 0 2 3 4 5\n");
  EXPECT_THROW(hex.parse_isometries(wrong), Error);
}

TEST(PingPong, SyllableLength) {
  EXPECT_EQ(syllable_length({{0, 3}, {1, -2}, {0, 1}}), 3);
  EXPECT_EQ(syllable_length({{1, 5}}), 1);
  EXPECT_EQ(syllable_length({}), 0);
  EXPECT_THROW(syllable_length({{0, 1}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(syllable_length({{0, 0}}), std::invalid_argument);
  EXPECT_EQ(format_syllables({{0, 3}, {1, -2}, {0, 1}}), "f1^3 f2^-2 f1");
}

TEST(PingPong, AlmostFixedSamples) {
  auto c6 = FiniteGraphSpace::cycle(6);
  auto id = c6.make_isometry({0, 1, 2, 3, 4, 5});
  auto all = almost_fixed_sample(c6, id, c6.points(), 0, 3);
  EXPECT_EQ(all.members.size(), 6u);
  EXPECT_EQ(all.diameter, c6.diameter());

  CubicTree t;
  auto ball = t.ball({}, 5);
  auto fixed = almost_fixed_sample(t, rot({}), ball, 4, 3);
  EXPECT_EQ(fixed.members.size(), t.ball({}, 2).size());
  EXPECT_EQ(fixed.diameter, 4);
  EXPECT_EQ(fixed.skipped_powers, std::vector<int>{3});

  IntegerLine line;
  std::vector<long> window;
  for (long x = -10; x <= 10; ++x) window.push_back(x);
  EXPECT_EQ(almost_fixed_sample(line, IntegerLine::Isometry{1, 1}, window, 2, 1).members.size(), window.size());
  EXPECT_TRUE(almost_fixed_sample(line, IntegerLine::Isometry{5, 1}, window, 2, 3).members.empty());
}

TEST(PingPong, AlmostFixedSetsAreInvariant) {
  CubicTree t;
  auto pts = rotation_window(t, {}, CubicTree::zigzag(9), 4);
  std::set<CubicTree::Point> in(pts.begin(), pts.end());
  for (auto c : {CubicTree::Point{}, CubicTree::zigzag(9), CubicTree::zigzag(3)}) {
    auto s = almost_fixed_sample(t, rot(c), pts, 4, 3);
    std::set<CubicTree::Point> members(s.members.begin(), s.members.end());
    for (const auto& x : s.members) {
      auto y = t.apply(rot(c), x);
      if (in.count(y)) EXPECT_TRUE(members.count(y));
    }
  }
  auto c6 = FiniteGraphSpace::cycle(6);
  auto flip = c6.make_isometry({0, 5, 4, 3, 2, 1});
  auto s = almost_fixed_sample(c6, flip, c6.points(), 2, 1);
  for (int x : s.members) EXPECT_NE(std::find(s.members.begin(), s.members.end(), c6.apply(flip, x)), s.members.end());
}

TEST(PingPong, TreeRotationsCertify) {
  CubicTree t;
  auto u = CubicTree::Point{}, v = CubicTree::zigzag(20);
  PingPongConfig cfg;
  cfg.max_syllables = 5;
  cfg.keep_words = true;
  auto cert = pingpong_certify(t, rot(u), rot(v), rotation_window(t, u, v, 3), cfg);
  EXPECT_EQ(cert.verdict, PingPongVerdict::Certified) << cert.to_text();
  EXPECT_EQ(cert.delta, q(0));
  EXPECT_EQ(cert.separation, 16);
  EXPECT_EQ(cert.diameter[0], 4);
  EXPECT_EQ(cert.diameter[1], 4);
  EXPECT_EQ(cert.base_point, "01");
  // 4 exponents per syllable, 2 first letters
  EXPECT_EQ(cert.words_tested, 2u * (4 + 16 + 64 + 256 + 1024));
  ASSERT_TRUE(cert.min_translation);
  EXPECT_EQ(*cert.min_translation, q(40));
  for (const auto& w : cert.words) EXPECT_GE(w.displacement, w.syllables);

  // displacement of (f1 f2)^m grows linearly
  CubicTree::Point x = t.geodesic(u, v)[2], y = x;
  std::vector<long> d;
  for (int m = 1; m <= 4; ++m) {
    y = t.apply(rot(u), t.apply(rot(v), y));
    d.push_back(t.distance(y, x));
  }
  EXPECT_EQ(d[1] - d[0], d[2] - d[1]);
  EXPECT_EQ(d[3] - d[2], d[2] - d[1]);
  EXPECT_GE(d[1] - d[0], 20);
}

TEST(PingPong, HypothesesNotMet) {
  CubicTree t;
  auto u = CubicTree::Point{};
  PingPongConfig cfg;
  cfg.max_syllables = 3;
  auto same = pingpong_certify(t, rot(u), rot(u), t.ball(u, 4), cfg);
  EXPECT_EQ(same.verdict, PingPongVerdict::HypothesesNotMet);
  EXPECT_EQ(same.separation, 0);

  auto v = CubicTree::zigzag(1);
  auto near = pingpong_certify(t, rot(u), rot(v), rotation_window(t, u, v, 3), cfg);
  EXPECT_EQ(near.verdict, PingPongVerdict::HypothesesNotMet);

  // C must exceed 100δ
  auto c4 = FiniteGraphSpace::cycle(4);
  auto r = c4.make_isometry({1, 2, 3, 0});
  auto small = pingpong_certify(c4, r, r, c4.points(), cfg);
  EXPECT_EQ(small.verdict, PingPongVerdict::HypothesesNotMet);
  EXPECT_EQ(small.delta, q(1));

  cfg.diameter_bound = 3;
  auto far = CubicTree::zigzag(20);
  auto tight = pingpong_certify(t, rot(u), rot(far), rotation_window(t, u, far, 3), cfg);
  EXPECT_EQ(tight.verdict, PingPongVerdict::HypothesesNotMet);
}

TEST(PingPong, FailingWordIsReported) {
  // reflections of Z about 0 and 3; with C = 1 the base point is the fixed
  // point of the first, so the one-letter word moves it by 0
  IntegerLine line;
  std::vector<long> pts;
  for (long x = -10; x <= 10; ++x) pts.push_back(x);
  PingPongConfig cfg;
  cfg.C = 1;
  cfg.max_syllables = 3;
  auto cert = pingpong_certify(line, IntegerLine::Isometry{0, -1}, IntegerLine::Isometry{6, -1}, pts, cfg);
  EXPECT_EQ(cert.verdict, PingPongVerdict::Failed);
  EXPECT_EQ(cert.separation, 3);
  EXPECT_EQ(cert.base_point, "0");
  ASSERT_TRUE(cert.witness);
  EXPECT_EQ(cert.witness->syllables, 1);
  EXPECT_EQ(cert.witness->displacement, 0);
  EXPECT_LT(cert.min_excess, 0);

  // a wider radius moves the base point off both fixed points
  cfg.C = 2;
  auto ok = pingpong_certify(line, IntegerLine::Isometry{0, -1}, IntegerLine::Isometry{6, -1}, pts, cfg);
  EXPECT_EQ(ok.verdict, PingPongVerdict::Certified) << ok.to_text();
  // (r0 r3)^m translates by 6m
  ASSERT_TRUE(ok.min_translation);
  EXPECT_EQ(*ok.min_translation, q(6));
}

TEST(PingPong, ParallelRunsAgree) {
  CubicTree t;
  auto u = CubicTree::Point{}, v = CubicTree::zigzag(12);
  PingPongConfig cfg;
  cfg.max_syllables = 4;
  cfg.keep_words = true;
  auto pts = rotation_window(t, u, v, 3);
  auto one = pingpong_certify(t, rot(u), rot(v), pts, cfg);
  cfg.jobs = 3;
  auto many = pingpong_certify(t, rot(u), rot(v), pts, cfg);
  EXPECT_EQ(one.to_text(), many.to_text());
  EXPECT_EQ(one.to_csv(), many.to_csv());
}

TEST(PingPong, RejectsBadBudgets) {
  CubicTree t;
  PingPongConfig cfg;
  cfg.max_syllables = 0;
  EXPECT_THROW(pingpong_certify(t, rot({}), rot({}), t.ball({}, 1), cfg), std::invalid_argument);
}
