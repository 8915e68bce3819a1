#pragma once

// Deterministic experiment sweeps over (splitting, n) grids, and the
// designated pair of far-apart twists used as irreducibility evidence.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "freetwist/irreducibility.hpp"
#include "freetwist/projection.hpp"
#include "freetwist/random_graph.hpp"
#include "freetwist/tree.hpp"

namespace ft {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::vector<std::string> splittings;  // file paths
  std::vector<int> ns;
  // W = window_factor·(n+2)|c| and L = depth_factor·(n+2)|c| unless overridden
  int window_factor = 4, depth_factor = 2;
  std::optional<int> window;
  std::optional<long> depth;
  std::size_t branch_len = 2;
  int refine = 1;
  std::size_t fold_steps = 100000;
  int lipschitz_pairs = 0;  // seeded stretch-oracle spot checks per row (rank 3)
  int jobs = 1;

  /// `key=value` lines; list values are comma separated and n accepts ranges `2..6`.
  /// Relative splitting paths resolve against `base_dir`.
  static ExperimentConfig parse(std::istream& in, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { throw ParseError("config line " + std::to_string(lineno) + ": " + msg); };
    auto items = [](const std::string& v) {
      std::vector<std::string> out;
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
      }
      return out;
    };
    auto positive = [&](const std::string& v) {
      long x = 0;
      try {
        std::size_t used = 0;
        x = std::stol(v, &used);
        if (used != v.size()) fail("bad number '" + v + "'");
      } catch (const std::logic_error&) {
        fail("bad number '" + v + "'");
      }
      if (x < 1) fail("budgets must be positive");
      return x;
    };
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      auto eq = line.find('=');
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      if (eq == std::string::npos) fail("expected key=value");
      auto key = items(line.substr(0, eq)), val = items(line.substr(eq + 1));
      if (key.size() != 1) fail("bad key");
      const std::string& k = key[0];
      const std::string one = val.empty() ? std::string{} : val[0];
      if (k == "seed") {
        try {
          c.seed = std::stoull(one);
        } catch (const std::logic_error&) {
          fail("bad seed");
        }
      } else if (k == "splittings") {
        for (const auto& v : val) {
          std::filesystem::path p(v);
          c.splittings.push_back((p.is_relative() && !base_dir.empty() ? base_dir / p : p).string());
        }
      } else if (k == "n") {
        for (const auto& v : val) {
          auto dots = v.find("..");
          try {
            if (dots == std::string::npos) {
              c.ns.push_back(std::stoi(v));
            } else {
              int lo = std::stoi(v.substr(0, dots)), hi = std::stoi(v.substr(dots + 2));
              for (int n = lo; n <= hi; ++n) c.ns.push_back(n);
            }
          } catch (const std::logic_error&) {
            fail("bad n '" + v + "'");
          }
        }
      } else if (k == "window_factor") {
        c.window_factor = static_cast<int>(positive(one));
      } else if (k == "depth_factor") {
        c.depth_factor = static_cast<int>(positive(one));
      } else if (k == "window") {
        c.window = static_cast<int>(positive(one));
      } else if (k == "depth") {
        c.depth = positive(one);
      } else if (k == "branch") {
        c.branch_len = static_cast<std::size_t>(positive(one));
      } else if (k == "refine") {
        c.refine = static_cast<int>(positive(one));
      } else if (k == "fold_steps") {
        c.fold_steps = static_cast<std::size_t>(positive(one));
      } else if (k == "lipschitz_pairs") {
        c.lipschitz_pairs = one == "0" ? 0 : static_cast<int>(positive(one));
      } else if (k == "jobs") {
        c.jobs = static_cast<int>(positive(one));
      } else {
        fail("unknown key '" + k + "'");
      }
    }
    return c;
  }

  static ExperimentConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse(in, std::filesystem::path(path).parent_path());
  }
};

struct SweepRow {
  std::string splitting;
  int n = 0;
  int W = 0;
  long L = 0;
  long tw = 0;
  std::optional<Rational> min_ell;
  long ff_ub = 0;
  int lip_checked = 0, lip_equal = 0;
  std::string error;

  bool tw_pass() const { return tw >= n - 1; }
  /// ℓ(c) ≤ 1/(n−3) is checked from n = 6 on.
  std::optional<bool> ell_pass() const {
    if (n < 6 || !min_ell) return std::nullopt;
    return *min_ell * (n - 3) <= 1;
  }
  bool ok() const { return error.empty() && tw_pass() && ell_pass().value_or(true) && lip_equal == lip_checked; }
};

inline std::string sweep_header() {
  return "splitting,n,W,L,tw_lb,tw_bound,tw_status,min_ell,ell_bound,ell_status,ff_ub,lip_checked,lip_equal,status\n";
}

inline std::string to_csv(const SweepRow& r) {
  std::ostringstream os;
  os << r.splitting << ',' << r.n << ',' << r.W << ',' << r.L << ',';
  if (!r.error.empty()) {
    std::string msg = r.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    os << ",,,,,,,,,ERROR " << msg << '\n';
    return os.str();
  }
  os << r.tw << ',' << r.n - 1 << ',' << (r.tw_pass() ? "PASS" : "FAIL") << ',';
  os << (r.min_ell ? to_string(*r.min_ell) : "") << ',';
  if (r.n >= 6)
    os << "1/" << r.n - 3 << ',' << (*r.ell_pass() ? "PASS" : "FAIL");
  else
    os << ",n/a";
  os << ',' << r.ff_ub << ',' << r.lip_checked << ',' << r.lip_equal << ',' << (r.ok() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

/// One grid cell: relative twist of (R, D^n R) about the edge word, the fold
/// path R → D^n R with its minimum of ℓ(c) and free factor bound, and optional
/// seeded stretch-oracle checks.
inline SweepRow sweep_row(const ExperimentConfig& cfg, const std::string& path, int n, std::size_t row_index) {
  SweepRow row;
  row.splitting = std::filesystem::path(path).stem().string();
  row.n = n;
  try {
    auto vs = validate_splitting(ZSplitting::parse_file(path));
    const Word& c = vs.data().c;
    const int len = static_cast<int>(c.size());
    row.W = cfg.window ? *cfg.window : cfg.window_factor * (std::abs(n) + 2) * len;
    row.L = cfg.depth ? *cfg.depth : static_cast<long>(cfg.depth_factor) * (std::abs(n) + 2) * len;
    auto D = twist_power(vs, n);
    row.tw = relative_twist_lower_bound(TwistedTree::rose(vs.data().alphabet), TwistedTree(D), c, row.W, row.L,
                                        cfg.branch_len)
                 .value;
    auto path_pts = fold_path(MarkedGraph::uniform_rose(vs.data().alphabet), MarkedGraph::twisted_rose(D),
                              {cfg.fold_steps, cfg.refine});
    row.min_ell = min_length_along_path(path_pts, c).second;
    row.ff_ub = ff_chain_upper_bound(path_pts);
    if (cfg.lipschitz_pairs > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(row_index)};
      std::mt19937_64 rng(seq);
      auto al = Alphabet::standard(3);
      for (int t = 0; t < cfg.lipschitz_pairs; ++t) {
        auto g1 = random_marked_graph(al, rng, 6);
        auto g2 = random_marked_graph(al, rng, 6, 3);
        ++row.lip_checked;
        if (stretch_factor(g1, g2).factor == stretch_factor_brute_force(g1, g2, 6).factor) ++row.lip_equal;
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Rows in grid order (splittings outer, n inner) whatever the number of jobs.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, int>> cells;
  for (const auto& s : cfg.splittings)
    for (int n : cfg.ns) cells.emplace_back(s, n);
  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();) rows[i] = sweep_row(cfg, cells[i].first, cells[i].second, i);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, cfg.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_header();
  for (const auto& r : rows) out += to_csv(r);
  return out;
}

/// D₁ is the twist t ↦ ta of F₃ = ⟨a, c, t⟩ over the edge word a; D₂ = θD₁θ⁻¹.
struct DesignatedPair {
  Automorphism theta, d1, d2;
  /// D₁³D₂³
  Automorphism composite() const { return compose(d1.power(3), d2.power(3)); }
};

inline DesignatedPair designated_pair() {
  std::istringstream in(
      "rank=3\nkind=hnn\ngens=a,c,t\nA=a, c, t a t'\nedge=a\nedge_image=t a t'\nstable=t\n");
  auto vs = validate_splitting(ZSplitting::parse(in));
  const auto& al = vs.data().alphabet;
  Automorphism theta(al, {al.parse("t a"), al.parse("c t c'"), al.parse("t c'")});
  auto d1 = dehn_twist(vs);
  return {theta, d1, compose(theta, compose(d1, theta.inverse()))};
}

}  // namespace ft
