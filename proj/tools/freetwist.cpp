// Command-line front end for the freetwist library.
//
// Exit codes: 0 success, 1 a checked bound or sweep row failed, 2 bad input,
// 3 ping-pong hypotheses not met, 4 ping-pong word witness found.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "freetwist/freetwist.hpp"

namespace {

using namespace ft;

struct Globals {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<int> window;
  std::optional<long> depth;
  std::optional<int> word_budget;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

MarkedGraph load_graph(const std::string& path) {
  auto in = open_input(path);
  return MarkedGraph::parse(in);
}

Automorphism load_automorphism(const std::string& path) {
  auto in = open_input(path);
  auto phi = Automorphism::parse(in);
  if (!phi.verified()) throw Error(path + ": not an automorphism");
  return phi;
}

int default_window(int n, const Word& c) { return 4 * (std::abs(n) + 2) * static_cast<int>(c.size()); }
long default_depth(int n, const Word& c) { return 2L * (std::abs(n) + 2) * static_cast<long>(c.size()); }

// The automorphism an irreducibility command works on.
struct AutSource {
  std::string file, splitting;
  int n = 1;
  bool designated = false;

  void add(CLI::App* cmd) {
    cmd->add_option("automorphism", file, "Automorphism file (gen -> word lines)");
    cmd->add_option("--splitting", splitting, "Use the twist of this splitting instead");
    cmd->add_option("-n", n, "Twist power for --splitting");
    cmd->add_flag("--designated", designated, "Use the built-in far-apart composite D1^3 D2^3");
  }

  Automorphism get() const {
    int given = !file.empty() + !splitting.empty() + designated;
    if (given != 1) throw Error("give exactly one of an automorphism file, --splitting or --designated");
    if (designated) return designated_pair().composite();
    if (!splitting.empty()) return twist_power(validate_splitting(ZSplitting::parse_file(splitting)), n);
    return load_automorphism(file);
  }
};

// Two marked graphs, given directly or as the rose and its n-fold twisted image.
struct PathSource {
  std::string g1, g2, splitting;
  int n = 1;

  void add(CLI::App* cmd) {
    cmd->add_option("from", g1, "Source marked graph");
    cmd->add_option("to", g2, "Target marked graph");
    cmd->add_option("--splitting", splitting, "Fold from the rose to its image under the n-th twist");
    cmd->add_option("-n", n, "Twist power for --splitting");
  }

  struct Pair {
    MarkedGraph from, to;
    std::optional<Word> edge;
  };

  Pair get() const {
    if (!splitting.empty()) {
      if (!g1.empty()) throw Error("give either two graph files or --splitting");
      auto vs = validate_splitting(ZSplitting::parse_file(splitting));
      return {MarkedGraph::uniform_rose(vs.data().alphabet), MarkedGraph::twisted_rose(twist_power(vs, n)), vs.data().c};
    }
    if (g1.empty() || g2.empty()) throw Error("two graph files are required");
    return {load_graph(g1), load_graph(g2), std::nullopt};
  }
};

template <class Iso>
std::pair<Iso, Iso> pick_pair(const std::vector<std::pair<std::string, Iso>>& isos, const std::string& n1,
                              const std::string& n2) {
  auto pick = [&](const std::string& name, std::size_t fallback) {
    if (name.empty()) {
      if (fallback >= isos.size()) throw Error("need two isometries");
      return isos[fallback].second;
    }
    for (const auto& [nm, iso] : isos)
      if (nm == name) return iso;
    throw Error("no isometry named '" + name + "'");
  };
  return {pick(n1, 0), pick(n2, 1)};
}

// x ↦ sign·x + shift, one `name shift sign` per line
std::vector<std::pair<std::string, IntegerLine::Isometry>> parse_line_isometries(std::istream& in) {
  std::vector<std::pair<std::string, IntegerLine::Isometry>> out;
  std::string text;
  int lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    if (auto h = text.find('#'); h != std::string::npos) text.erase(h);
    std::istringstream ls(text);
    std::string name, extra;
    IntegerLine::Isometry g;
    if (!(ls >> name)) continue;
    if (!(ls >> g.shift >> g.sign) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected '<name> <shift> <sign>'");
    if (g.sign != 1 && g.sign != -1) throw Error("isometry '" + name + "': sign must be 1 or -1");
    out.emplace_back(name, g);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dehn twists, relative twisting, outer space folding and ping-pong certificates for free groups"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "freetwist 1.0");

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized checks (overrides sweep configs)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--window", g.window, "Tree window radius W, or ping-pong sample radius")->check(CLI::PositiveNumber);
  app.add_option("--witness-depth", g.depth, "Ray depth L for end witnesses")->check(CLI::PositiveNumber);
  app.add_option("--word-budget", g.word_budget, "Word length or syllable budget for searches")
      ->check(CLI::PositiveNumber);

  std::function<int()> action;

  // twist-build
  std::string split_path, out_path;
  int n = 1;
  auto* cmd = app.add_subcommand("twist-build", "Write the n-th power of the Dehn twist of a splitting");
  cmd->add_option("splitting", split_path, "Splitting file")->required();
  cmd->add_option("-n", n, "Twist power");
  cmd->add_option("-o,--output", out_path, "Output file (default stdout)");
  cmd->callback([&] {
    action = [&] {
      auto vs = validate_splitting(ZSplitting::parse_file(split_path));
      write_output(out_path, twist_power(vs, n).to_text());
      return 0;
    };
  });

  // validate
  cmd = app.add_subcommand("validate", "Validate a splitting and print its report");
  cmd->add_option("splitting", split_path, "Splitting file")->required();
  cmd->callback([&] {
    action = [&] {
      SplittingBounds b;
      if (g.word_budget) b.witness_length = static_cast<std::size_t>(*g.word_budget);
      auto vs = validate_splitting(ZSplitting::parse_file(split_path), b);
      std::cout << vs.report().to_text(vs.data().alphabet);
      if (auto f = projected_factor(vs)) {
        std::cout << "projected factor";
        for (const auto& w : f->basis()) std::cout << ' ' << vs.data().alphabet.format(w);
        std::cout << '\n';
      }
      return 0;
    };
  });

  // reltwist
  std::size_t branch = 2;
  cmd = app.add_subcommand("reltwist", "Certified lower bound for the relative twist of R and D^n R");
  cmd->add_option("splitting", split_path, "Splitting file")->required();
  cmd->add_option("-n", n, "Twist power");
  cmd->add_option("--branch", branch, "Branch length for off-axis witnesses");
  cmd->callback([&] {
    action = [&] {
      auto vs = validate_splitting(ZSplitting::parse_file(split_path));
      const Word& c = vs.data().c;
      int W = g.window.value_or(default_window(n, c));
      long L = g.depth.value_or(default_depth(n, c));
      auto r = relative_twist_lower_bound(TwistedTree::rose(vs.data().alphabet), TwistedTree(twist_power(vs, n)), c,
                                          W, L, branch);
      bool pass = r.value >= n - 1;
      std::cout << "tw_lb " << r.value << "\nbound " << n - 1 << "\nW " << W << "\nL " << L << "\nsquares "
                << r.squares << '\n'
                << (pass ? "PASS" : "FAIL") << '\n';
      if (!pass)
        std::cerr << "hint: the axis window may be too small; try --window " << 2 * W << " --witness-depth " << 2 * L
                  << '\n';
      return pass ? 0 : 1;
    };
  });

  // corevol
  cmd = app.add_subcommand("corevol", "Count certified core squares between R and D^n R");
  cmd->add_option("splitting", split_path, "Splitting file")->required();
  cmd->add_option("-n", n, "Twist power");
  cmd->callback([&] {
    action = [&] {
      auto vs = validate_splitting(ZSplitting::parse_file(split_path));
      int W = g.window.value_or(3);
      long L = g.depth.value_or(6);
      auto r = core_volume_lower_bound(TwistedTree::rose(vs.data().alphabet), TwistedTree(twist_power(vs, n)), W,
                                       static_cast<std::size_t>(L));
      std::cout << "squares " << r.squares << "\nW " << W << "\nL " << L << '\n';
      return 0;
    };
  });

  // lipschitz
  std::string lg1, lg2;
  int random_pairs = 0;
  bool brute = false;
  cmd = app.add_subcommand("lipschitz", "Stretch factor and Lipschitz distance between marked graphs");
  cmd->add_option("from", lg1, "Source marked graph");
  cmd->add_option("to", lg2, "Target marked graph");
  cmd->add_flag("--brute", brute, "Also compare against all cyclic words of length <= 6");
  cmd->add_option("--random", random_pairs, "Compare both oracles on this many seeded random rank-3 pairs");
  cmd->callback([&] {
    action = [&] {
      if (random_pairs > 0) {
        std::mt19937_64 rng(g.seed.value_or(1));
        auto al = Alphabet::standard(3);
        int equal = 0;
        std::cout << "pair,candidate,brute,status\n";
        for (int i = 0; i < random_pairs; ++i) {
          auto a = random_marked_graph(al, rng, 6);
          auto b = random_marked_graph(al, rng, 6, 3);
          auto x = stretch_factor(a, b).factor, y = stretch_factor_brute_force(a, b, 6).factor;
          equal += x == y;
          std::cout << i << ',' << to_string(x) << ',' << to_string(y) << ',' << (x == y ? "PASS" : "FAIL") << '\n';
        }
        return equal == random_pairs ? 0 : 1;
      }
      if (lg1.empty() || lg2.empty()) throw Error("two graph files are required");
      auto a = load_graph(lg1), b = load_graph(lg2);
      auto r = stretch_factor(a, b);
      std::cout << "factor " << to_string(r.factor) << "\ndistance " << r.distance() << "\nwitness "
                << a.alphabet().format(r.witness.word()) << '\n';
      if (brute) {
        auto s = stretch_factor_brute_force(a, b, 6);
        std::cout << "brute " << to_string(s.factor) << '\n';
        return s.factor == r.factor ? 0 : 1;
      }
      return 0;
    };
  });

  // foldpath / ffbound
  PathSource ps;
  std::string word_text, dump_dir;
  int refine = 1;
  std::size_t steps = 100000;
  cmd = app.add_subcommand("foldpath", "Fold path between marked graphs, with lengths of a loop along it");
  ps.add(cmd);
  cmd->add_option("--word", word_text, "Loop to measure (default the edge word, or the first generator)");
  cmd->add_option("--refine", refine, "Samples per fold")->check(CLI::PositiveNumber);
  cmd->add_option("--max-steps", steps, "Fold step budget")->check(CLI::PositiveNumber);
  cmd->add_option("--dump", dump_dir, "Write every point as a marked graph file into this directory");
  cmd->callback([&] {
    action = [&] {
      auto p = ps.get();
      const auto& al = p.from.alphabet();
      Word w = !word_text.empty() ? al.parse(word_text) : p.edge ? *p.edge : Word{letter_for(0)};
      auto path = fold_path(p.from, p.to, {steps, refine});
      std::cout << "index,step,vertices,edges,length\n";
      for (std::size_t i = 0; i < path.size(); ++i)
        std::cout << i << ',' << path.steps[i] << ',' << path.points[i].vertex_count() << ','
                  << path.points[i].edge_count() << ',' << to_string(path.points[i].translation_length(w)) << '\n';
      auto [at, ell] = min_length_along_path(path, w);
      std::cerr << "min_length " << to_string(ell) << " at " << at << '\n';
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (std::size_t i = 0; i < path.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "point_%04zu.txt", i);
          write_output((std::filesystem::path(dump_dir) / name).string(), path.points[i].to_text());
        }
      }
      return 0;
    };
  });

  PathSource fs;
  cmd = app.add_subcommand("ffbound", "Upper bound on free factor distance travelled by a fold path");
  fs.add(cmd);
  cmd->add_option("--refine", refine, "Samples per fold")->check(CLI::PositiveNumber);
  cmd->add_option("--max-steps", steps, "Fold step budget")->check(CLI::PositiveNumber);
  cmd->callback([&] {
    action = [&] {
      auto p = fs.get();
      auto path = fold_path(p.from, p.to, {steps, refine});
      std::cout << "points " << path.size() << "\nff_upper_bound " << ff_chain_upper_bound(path) << '\n';
      return 0;
    };
  });

  // constants
  int k = 3;
  std::string C_text = "0", H_text = "0", C1_text = "0", ell_text;
  std::optional<long> crossings;
  cmd = app.add_subcommand("constants", "Distance constants for twists far apart in the free factor complex");
  cmd->add_option("-k,--rank", k, "Rank of the free group");
  cmd->add_option("--C", C_text, "Projection constant C");
  cmd->add_option("--H", H_text, "Hyperbolicity constant H");
  cmd->add_option("--C1", C1_text, "Ping-pong constant C1");
  cmd->add_option("-m,--crossings", crossings, "Also print 6m+13 for this crossing count");
  cmd->add_option("--length", ell_text, "Also bound the distance reached by a loop of this length");
  cmd->callback([&] {
    action = [&] {
      auto t = twist_constants(parse_rational(C_text), k, parse_rational(H_text), parse_rational(C1_text));
      std::cout << "k " << k << "\nA " << to_string(t.A) << "\nC' " << to_string(t.C_prime) << "\nN "
                << to_string(t.N) << '\n';
      if (crossings) std::cout << "crossing_bound " << crossing_bound_to_ff_distance(*crossings) << '\n';
      if (!ell_text.empty()) std::cout << "length_bound " << length_to_ff_distance(parse_rational(ell_text), k) << '\n';
      return 0;
    };
  });

  // pingpong
  std::string space_path, f1_name, f2_name, words_out;
  std::vector<std::string> iso_paths;
  bool tree = false, line = false;
  int distance = 20;
  long C = 4;
  int max_power = 3;
  cmd = app.add_subcommand("pingpong", "Certify ping-pong for two isometries of a hyperbolic space");
  cmd->add_option("space", space_path, "Finite graph space file");
  cmd->add_option("isometries", iso_paths, "Isometry files (name p0 p1 ... lines)");
  cmd->add_option("--f1", f1_name, "First isometry (default: first listed)");
  cmd->add_option("--f2", f2_name, "Second isometry (default: second listed)");
  cmd->add_flag("--tree", tree, "Use order-3 rotations of the 3-regular tree instead of files");
  cmd->add_flag("--line", line, "Use the integer line; isometry files hold 'name shift sign' lines");
  cmd->add_option("--distance", distance, "Distance between the rotation centers")->check(CLI::NonNegativeNumber);
  cmd->add_option("-C", C, "Almost fixed radius")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-power", max_power, "Largest exponent per syllable")->check(CLI::PositiveNumber);
  cmd->add_option("--words", words_out, "Write the per-word CSV here");
  cmd->callback([&] {
    action = [&] {
      PingPongConfig cfg;
      cfg.C = C;
      cfg.max_power = max_power;
      cfg.max_syllables = g.word_budget.value_or(8);
      cfg.jobs = g.jobs;
      cfg.keep_words = !words_out.empty();
      PingPongCertificate cert;
      if (tree) {
        CubicTree t;
        CubicTree::Point u{}, v = CubicTree::zigzag(distance);
        cert = pingpong_certify(t, CubicTree::Isometry{u, 1}, CubicTree::Isometry{v, 1},
                                rotation_window(t, u, v, g.window.value_or(3)), cfg);
      } else if (line) {
        // every positional argument is an isometry file here
        if (!space_path.empty()) iso_paths.insert(iso_paths.begin(), space_path);
        if (iso_paths.empty()) throw Error("an isometry file is required");
        std::vector<std::pair<std::string, IntegerLine::Isometry>> isos;
        for (const auto& p : iso_paths) {
          auto in = open_input(p);
          for (auto& e : parse_line_isometries(in)) isos.push_back(std::move(e));
        }
        auto [f1, f2] = pick_pair(isos, f1_name, f2_name);
        const long R = g.window.value_or(10);
        std::vector<long> pts;
        for (long x = -R; x <= R; ++x) pts.push_back(x);
        cert = pingpong_certify(IntegerLine{}, f1, f2, pts, cfg);
      } else {
        if (space_path.empty() || iso_paths.empty()) throw Error("a space file and an isometry file are required");
        auto sin = open_input(space_path);
        auto space = FiniteGraphSpace::parse(sin);
        std::vector<std::pair<std::string, FiniteGraphSpace::Isometry>> isos;
        for (const auto& p : iso_paths) {
          auto in = open_input(p);
          for (auto& e : space.parse_isometries(in)) isos.push_back(std::move(e));
        }
        auto [f1, f2] = pick_pair(isos, f1_name, f2_name);
        cert = pingpong_certify(space, f1, f2, space.points(), cfg);
      }
      std::cout << cert.to_text();
      if (!words_out.empty()) write_output(words_out, cert.to_csv());
      switch (cert.verdict) {
        case PingPongVerdict::Certified: return 0;
        case PingPongVerdict::HypothesesNotMet: return 3;
        default: return 4;
      }
    };
  });

  // irred-check / atoroidal-check
  AutSource irr;
  int rank_bound = 2, pow_bound = 4;
  bool first_only = false;
  cmd = app.add_subcommand("irred-check", "Search for periodic free factor conjugacy classes");
  irr.add(cmd);
  cmd->add_option("--rank", rank_bound, "Largest factor rank")->check(CLI::PositiveNumber);
  cmd->add_option("--pow", pow_bound, "Largest period")->check(CLI::PositiveNumber);
  cmd->add_flag("--first", first_only, "Stop at the first witness");
  cmd->callback([&] {
    action = [&] {
      auto phi = irr.get();
      SearchBounds b{rank_bound, static_cast<std::size_t>(g.word_budget.value_or(4)), pow_bound};
      auto v = periodic_factor_search(phi, b, {g.jobs, first_only});
      std::cout << v.to_text(phi.alphabet());
      return 0;
    };
  });

  AutSource ato;
  cmd = app.add_subcommand("atoroidal-check", "Search for periodic conjugacy classes");
  ato.add(cmd);
  cmd->add_option("--pow", pow_bound, "Largest period")->check(CLI::PositiveNumber);
  cmd->add_flag("--first", first_only, "Stop at the first witness");
  cmd->callback([&] {
    action = [&] {
      auto phi = ato.get();
      auto v = periodic_class_search(phi, static_cast<std::size_t>(g.word_budget.value_or(4)), pow_bound,
                                     {g.jobs, first_only});
      std::cout << v.to_text(phi.alphabet());
      return 0;
    };
  });

  // sweep
  std::string cfg_path;
  cmd = app.add_subcommand("sweep", "Run an experiment grid and write CSV");
  cmd->add_option("config", cfg_path, "Sweep config (key=value lines)")->required();
  cmd->add_option("-o,--output", out_path, "Output file (default stdout)");
  cmd->callback([&] {
    action = [&] {
      auto cfg = ExperimentConfig::parse_file(cfg_path);
      if (g.seed) cfg.seed = *g.seed;
      if (app.count("--jobs")) cfg.jobs = g.jobs;
      if (g.window) cfg.window = g.window;
      if (g.depth) cfg.depth = g.depth;
      auto rows = run_sweep(cfg);
      write_output(out_path, sweep_csv(rows));
      bool errors = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
      return errors ? 1 : 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
