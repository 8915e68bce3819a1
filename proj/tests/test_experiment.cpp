#include <gtest/gtest.h>

#include <sstream>

#include "freetwist/experiment.hpp"

using namespace ft;

namespace {

std::string spl(const std::string& name) { return std::string(FT_SAMPLES) + "/splittings/" + name + ".txt"; }

ExperimentConfig config(const std::string& text) {
  std::istringstream in(text);
  return ExperimentConfig::parse(in, std::string(FT_SAMPLES) + "/sweeps");
}

}  // namespace

TEST(Config, Parse) {
  auto c = config(
      "# comment\n"
      "seed = 42\n"
      "splittings = ../splittings/f3_amalgam.txt, /abs/x.txt\n"
      "n = 2..4, 8\n"
      "window = 30\n"
      "depth=12\n"
      "refine=2\n"
      "lipschitz_pairs=0\n"
      "jobs=3\n");
  EXPECT_EQ(c.seed, 42u);
  ASSERT_EQ(c.splittings.size(), 2u);
  EXPECT_EQ(c.splittings[0], std::string(FT_SAMPLES) + "/sweeps/../splittings/f3_amalgam.txt");
  EXPECT_EQ(c.splittings[1], "/abs/x.txt");
  EXPECT_EQ(c.ns, (std::vector<int>{2, 3, 4, 8}));
  EXPECT_EQ(c.window, 30);
  EXPECT_EQ(c.depth, 12);
  EXPECT_EQ(c.refine, 2);
  EXPECT_EQ(c.lipschitz_pairs, 0);
  EXPECT_EQ(c.jobs, 3);

  auto d = config("");
  EXPECT_TRUE(d.splittings.empty());
  EXPECT_FALSE(d.window);
  EXPECT_EQ(d.window_factor, 4);
  EXPECT_EQ(d.depth_factor, 2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config("colour=blue\n"), ParseError);
  EXPECT_THROW(config("window=0\n"), ParseError);
  EXPECT_THROW(config("window=-3\n"), ParseError);
  EXPECT_THROW(config("depth=4x\n"), ParseError);
  EXPECT_THROW(config("n=two\n"), ParseError);
  EXPECT_THROW(config("just words\n"), ParseError);
  EXPECT_THROW(ExperimentConfig::parse_file("/nonexistent/sweep.cfg"), Error);
}

TEST(Sweep, GridRowsMeetTheTwistBound) {
  ExperimentConfig cfg;
  cfg.splittings = {spl("f3_amalgam"), spl("f3_hnn_comm"), spl("f4_hnn")};
  for (int n = 2; n <= 6; ++n) cfg.ns.push_back(n);
  auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 15u);
  const char* names[] = {"f3_amalgam", "f3_hnn_comm", "f4_hnn"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    EXPECT_EQ(r.splitting, names[i / 5]);
    EXPECT_EQ(r.n, 2 + static_cast<int>(i % 5));
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_GE(r.tw, r.n - 1) << r.splitting << " n=" << r.n;
    EXPECT_TRUE(r.ok());

    // the minimum along the path is no larger than at either end
    auto vs = validate_splitting(ZSplitting::parse_file(spl(names[i / 5])));
    const Word& c = vs.data().c;
    auto start = MarkedGraph::uniform_rose(vs.data().alphabet);
    auto end = MarkedGraph::twisted_rose(twist_power(vs, r.n));
    ASSERT_TRUE(r.min_ell);
    EXPECT_LE(*r.min_ell, start.translation_length(c) / start.volume());
    EXPECT_LE(*r.min_ell, end.translation_length(c) / end.volume());
    EXPECT_GT(*r.min_ell, 0);

    const int len = static_cast<int>(c.size());
    EXPECT_EQ(r.W, 4 * (r.n + 2) * len);
    EXPECT_EQ(r.L, 2 * (r.n + 2) * len);
  }
  auto csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 16);
  EXPECT_EQ(csv.find("FAIL"), std::string::npos);
}

TEST(Sweep, LengthBoundCheckedFromSix) {
  SweepRow r;
  r.n = 5;
  r.min_ell = Rational(1, 2);
  EXPECT_FALSE(r.ell_pass());
  r.n = 6;
  r.tw = 5;
  EXPECT_EQ(r.ell_pass(), false);
  r.min_ell = Rational(1, 3);
  EXPECT_EQ(r.ell_pass(), true);
  EXPECT_TRUE(r.ok());
  r.lip_checked = 2;
  r.lip_equal = 1;
  EXPECT_FALSE(r.ok());
}

TEST(Sweep, EmptyGridIsHeaderOnly) {
  ExperimentConfig cfg;
  cfg.splittings = {spl("f3_amalgam")};
  EXPECT_TRUE(run_sweep(cfg).empty());
  EXPECT_EQ(sweep_csv(run_sweep(cfg)), sweep_header());
}

TEST(Sweep, ErrorsAreMarkedPerRow) {
  ExperimentConfig cfg;
  cfg.splittings = {spl("f3_amalgam"), "/nonexistent/splitting.txt"};
  cfg.ns = {2};
  auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_NE(to_csv(rows[1]).find(",ERROR "), std::string::npos);
  EXPECT_FALSE(rows[1].ok());

  cfg.splittings = {spl("f3_amalgam")};
  cfg.fold_steps = 1;
  auto starved = run_sweep(cfg);
  ASSERT_EQ(starved.size(), 1u);
  EXPECT_NE(starved[0].error.find("step budget"), std::string::npos);
}

TEST(Sweep, ByteIdenticalAcrossRunsAndJobs) {
  ExperimentConfig cfg;
  cfg.seed = 123;
  cfg.splittings = {spl("f3_hnn_comm"), spl("f4_amalgam")};
  cfg.ns = {2, 3};
  cfg.lipschitz_pairs = 2;
  auto a = sweep_csv(run_sweep(cfg));
  EXPECT_EQ(a, sweep_csv(run_sweep(cfg)));
  cfg.jobs = 3;
  EXPECT_EQ(a, sweep_csv(run_sweep(cfg)));
  for (const auto& r : run_sweep(cfg)) {
    EXPECT_EQ(r.lip_checked, 2);
    EXPECT_EQ(r.lip_equal, 2);
  }
}

TEST(Designated, PairIsAConjugateTwist) {
  auto p = designated_pair();
  const auto& al = p.d1.alphabet();
  ASSERT_TRUE(p.theta.verified());
  ASSERT_TRUE(p.d2.verified());
  // D1 fixes its edge word a, D2 fixes θ(a) = ta
  EXPECT_EQ(p.d1.apply(al.parse("a")), al.parse("a"));
  EXPECT_EQ(p.d2.apply(al.parse("t a")), al.parse("t a"));
  EXPECT_NE(p.d1.images(), p.d2.images());
  auto phi = p.composite();
  EXPECT_EQ(phi.images(), compose(p.d1.power(3), p.d2.power(3)).images());
  auto tm = transition_matrix(phi);
  EXPECT_TRUE(is_primitive_matrix(tm));
  EXPECT_GT(pf_eigenvalue(tm), 1.0);
}
