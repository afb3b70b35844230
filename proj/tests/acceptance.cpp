// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]... [--config-dir DIR]
// Without --criterion every criterion runs. Exit status is the number of
// failures (capped at 100).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seqauction/belief/sampling.hpp"
#include "seqauction/env/l2.hpp"
#include "seqauction/env/registry.hpp"
#include "seqauction/io/commands.hpp"
#include "seqauction/io/config.hpp"
#include "seqauction/solver/evaluator.hpp"
#include "seqauction/solver/search.hpp"
#include "seqauction/verifier/brute_force.hpp"
#include "seqauction/verifier/verifier.hpp"
#include "support/tiny.hpp"

#ifndef SEQA_CONFIG_DIR
#define SEQA_CONFIG_DIR "configs"
#endif

using namespace seqauction;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string config_dir;

// Solves a benchmark config and returns per-round distances to the oracle.
std::vector<RoundDistance> solve_benchmark(const std::string& file, double& elapsed) {
  const RunConfig rc = load_config((fs::path(config_dir) / file).string());
  auto env = make_environment(rc.env);
  const auto t0 = Clock::now();
  SearchResult res = run_search(*env, rc.solver);
  elapsed = seconds_since(t0);
  BeliefSpace space(*env, res.tilings);
  ClassGraph g = enumerate_history_classes(*env, space, res.sigma, rc.solver.belief_rule, rc.solver.class_budget);
  return round_distances(class_distances(g, res.sigma));
}

Outcome check_rounds(const std::string& file, const std::vector<double>& tol, double interior_tol, double budget) {
  double elapsed = 0.0;
  const auto rd = solve_benchmark(file, elapsed);
  Outcome o{rd.size() == tol.size(), ""};
  for (const RoundDistance& r : rd) {
    const double lim = tol[std::min<std::size_t>(r.round - 1, tol.size() - 1)];
    o.pass = o.pass && r.belief <= lim;
    o.detail += "r" + std::to_string(r.round) + "=" + fmt("%.4f", r.belief) + "(<=" + fmt("%.3g", lim) + ")";
    if (interior_tol > 0) {
      o.pass = o.pass && r.interior <= interior_tol;
      o.detail += " interior=" + fmt("%.4f", r.interior) + "(<=" + fmt("%.3g", interior_tol) + ")";
    }
    o.detail += " ";
  }
  if (budget > 0) o.pass = o.pass && elapsed <= budget;
  o.detail += "time=" + fmt("%.0fs", elapsed);
  return o;
}

VerifierConfig exact_verifier() {
  VerifierConfig v;
  v.fidelity.integration = Integration::Exact;
  v.fidelity.pattern_steps = 30;
  v.restarts = 3;
  v.scan = 24;
  return v;
}

constexpr int kTinyInstances = 24;

Outcome soundness() {
  const auto t0 = Clock::now();
  int ok = 0, refused = 0;
  double worst_slack = 1e300;
  for (int s = 1; s <= kTinyInstances; ++s) {
    auto inst = testkit::make_tiny(static_cast<std::uint64_t>(s));
    try {
      const EpsilonReport rep = epsilon_bound(inst->graph, inst->sigma, exact_verifier());
      const double bf = brute_force_exploitability(inst->graph, inst->sigma, inst->deviation_grid);
      worst_slack = std::min(worst_slack, rep.epsilon - bf);
      if (rep.epsilon + 1e-9 >= bf) ++ok;
      else std::printf("  instance %d (%s): eps=%.6g < brute force %.6g\n", s, inst->describe().c_str(), rep.epsilon, bf);
    } catch (const VerificationRefused& e) {
      ++refused;
      std::printf("  instance %d refused: %s\n", s, e.what());
    }
  }
  const double t = seconds_since(t0);
  return {ok == kTinyInstances && t <= 300.0,
          std::to_string(ok) + "/" + std::to_string(kTinyInstances) + " sound, " + std::to_string(refused) +
              " refused, min slack " + fmt("%.3g", worst_slack) + ", time=" + fmt("%.0fs", t)};
}

EvalSettings settings(Integration integ, int samples = 2000) {
  EvalSettings s;
  s.integration = integ;
  s.samples = samples;
  return s;
}

Outcome decomposition() {
  long checks = 0, violations = 0;
  double worst = -1e300;
  for (int s = 1; s <= kTinyInstances; ++s) {
    auto inst = testkit::make_tiny(static_cast<std::uint64_t>(s));
    const ClassGraph& g = inst->graph;
    const VerifierConfig vcfg = exact_verifier();
    SubgameCache cache;
    cache.reset(g.size(), g.env().num_bidders());
    Evaluator ev(g, inst->sigma, settings(Integration::Exact), &cache);
    fill_cache(ev, cache, vcfg.seed);
    for (int ci = 0; ci < g.size(); ++ci) {
      const HistoryClass& c = g.at(ci);
      if (c.terminal) continue;
      for (int i = 0; i < g.env().num_bidders(); ++i) {
        if (!c.beliefs.active[i]) continue;
        auto ctx = ev.context(ci, i, 1);
        const Tiling& tiling = g.space().bidder(i).tiling();
        for (int k = 0; k < tiling.size(); ++k) {
          const BidVector own = inst->sigma[i].table(c.id).at(k);
          const auto corners = vertices(tiling.tile(k));
          for (int v = 0; v < static_cast<int>(corners.size()); ++v) {
            const TypePoint& th = corners[v];
            // Immediate loss: the verifier's search, or the best grid bid if
            // that does better.
            double ibr = vertex_loss(ev, *ctx, ci, i, k, v, vcfg).loss;
            const double base = ev.utility(*ctx, k, own).value(th);
            for (const BidVector& b : inst->deviation_grid[c.round])
              ibr = std::max(ibr, ev.utility(*ctx, k, b).value(th) - base);
            double succ = 0.0;
            for (int ch : c.children()) {
              const HistoryClass& cc = g.at(ch);
              if (cc.terminal || !cc.beliefs.active[i]) continue;
              succ = std::max(succ, best_deviation(g, inst->sigma, ch, i, k, th, inst->deviation_grid).gain());
            }
            const double br = best_deviation(g, inst->sigma, ci, i, k, th, inst->deviation_grid).gain();
            ++checks;
            worst = std::max(worst, br - ibr - succ);
            if (br > ibr + succ + 1e-9) ++violations;
          }
        }
      }
    }
  }
  return {violations == 0 && checks > 0, std::to_string(checks) + " vertex checks, " + std::to_string(violations) +
                                             " violations, max excess " + fmt("%.3g", worst)};
}

struct ConvexityCount {
  long total = 0;
  long pass = 0;
};

// Midpoint checks of the value of sigma and of the immediate best response
// inside tiles. Under sampling the tolerance is `z` standard errors.
ConvexityCount convexity(const testkit::TinyInstance& inst, Integration integ, double z, std::uint64_t seed) {
  const ClassGraph& g = inst.graph;
  VerifierConfig vcfg = exact_verifier();
  vcfg.fidelity.integration = integ;
  const bool sampled = integ == Integration::MonteCarlo;
  // Sampled IBR is costly; fewer draws and starts keep the suite in minutes.
  vcfg.fidelity.samples = 500;
  if (sampled) {
    vcfg.restarts = 1;
    vcfg.scan = 12;
  }
  const int reps = sampled ? 1 : 3;
  SubgameCache cache;
  cache.reset(g.size(), g.env().num_bidders());
  Evaluator ev(g, inst.sigma, settings(integ, 500), &cache);
  fill_cache(ev, cache, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityCount out;
  for (int ci = 0; ci < g.size(); ++ci) {
    const HistoryClass& c = g.at(ci);
    if (c.terminal) continue;
    for (int i = 0; i < g.env().num_bidders(); ++i) {
      if (!c.beliefs.active[i]) continue;
      auto ctx = ev.context(ci, i, derive_seed(seed, {c.id, static_cast<std::uint64_t>(i)}));
      const Tiling& tiling = g.space().bidder(i).tiling();
      for (int k = 0; k < tiling.size(); ++k) {
        const Hyperrectangle box = tiling.tile(k);
        const BidVector own = inst.sigma[i].table(c.id).at(k);
        for (int rep = 0; rep < reps; ++rep) {
          TypePoint a(box.dim()), b(box.dim()), m(box.dim());
          for (int d = 0; d < box.dim(); ++d) {
            a[d] = box.lower[d] + unit(rng) * (box.upper[d] - box.lower[d]);
            b[d] = box.lower[d] + unit(rng) * (box.upper[d] - box.lower[d]);
            m[d] = 0.5 * (a[d] + b[d]);
          }
          auto judge = [&](double fa, double fb, double fm, double sa, double sb, double sm) {
            const double tol = z * std::sqrt(sm * sm + 0.25 * (sa * sa + sb * sb)) + 1e-10;
            ++out.total;
            if (fm <= 0.5 * (fa + fb) + tol) ++out.pass;
          };
          const Estimate e = ev.utility(*ctx, k, own);
          judge(e.value(a), e.value(b), e.value(m), e.se(a), e.se(b), e.se(m));
          auto ibr = [&](const TypePoint& th, double& se) {
            const IbrResult r = verify_ibr(ev, *ctx, ci, k, th, own, vcfg);
            se = ev.utility(*ctx, k, r.bid).se(th);
            return r.utility;
          };
          double sa = 0, sb = 0, sm = 0;
          const double fa = ibr(a, sa), fb = ibr(b, sb), fm = ibr(m, sm);
          judge(fa, fb, fm, sa, sb, sm);
        }
      }
    }
  }
  return out;
}

Outcome convexity_suite() {
  ConvexityCount exact, mc;
  for (int s = 1; s <= kTinyInstances; ++s) {
    auto inst = testkit::make_tiny(static_cast<std::uint64_t>(s));
    const ConvexityCount e = convexity(*inst, Integration::Exact, 0.0, 100 + s);
    const ConvexityCount m = convexity(*inst, Integration::MonteCarlo, 3.0, 200 + s);
    exact.total += e.total;
    exact.pass += e.pass;
    mc.total += m.total;
    mc.pass += m.pass;
  }
  const double mc_rate = mc.total ? static_cast<double>(mc.pass) / mc.total : 0.0;
  return {exact.pass == exact.total && mc_rate >= 0.99,
          "exact " + std::to_string(exact.pass) + "/" + std::to_string(exact.total) + ", sampled " +
              std::to_string(mc.pass) + "/" + std::to_string(mc.total) + " (" + fmt("%.2f%%", 100 * mc_rate) + ")"};
}

// Single-good last round: bidder 0 against one opponent whose table is known,
// so the expected utility is a finite sum over the opponent's tiles.
Outcome mc_closed_forms() {
  constexpr int kGrid = 10, kTrials = 100;
  struct Case {
    std::string name;
    std::string payment;
    bool constant_opponent;
    double theta, bid;
  };
  const std::vector<Case> cases = {
      {"first/constant", "first", true, 0.8, 0.5},
      {"first/truthful", "first", false, 0.8, 0.45},
      {"second/truthful", "second", false, 0.7, 0.55},
  };
  Outcome o{true, ""};
  for (const Case& cs : cases) {
    EnvironmentParams p;
    p.bidders = 2;
    p.goods = 1;
    p.payment = cs.payment;
    auto env = make_environment(p);
    auto tilings = make_tilings(*env, {kGrid});
    BeliefSpace space(*env, tilings);
    PCStrategyProfile sigma = init_truthful(*env, tilings, {root_class(*env, space)});
    const ClassId root = root_class(*env, space).id;
    if (cs.constant_opponent) {
      BidTable t = sigma[1].table(root);
      for (int k = 0; k < t.tiles(); ++k) t.set(k, {0.3});
      sigma[1].set_table(root, t);
    }
    ClassGraph g = enumerate_history_classes(*env, space, sigma);
    const BidTable& opp = sigma[1].table(root);
    double truth = 0.0;
    for (int k = 0; k < opp.tiles(); ++k) {
      const double ob = opp.get(k, 0);
      // Ties go to the lower index, bidder 0 here.
      if (cs.bid >= ob) truth += (cs.theta - (cs.payment == "first" ? cs.bid : ob)) / opp.tiles();
    }
    EvalSettings es = settings(Integration::MonteCarlo, 2000);
    es.continuation = ContinuationMode::Full;
    es.closed_form = false;  // the point is to exercise the sampler
    Evaluator ev(g, sigma, es);
    const int tile = locate_tile(*tilings[0], {cs.theta});
    int within = 0;
    for (int s = 0; s < kTrials; ++s) {
      auto ctx = ev.context(0, 0, derive_seed(4242, {static_cast<std::uint64_t>(s)}));
      const Estimate e = ev.utility(*ctx, tile, {cs.bid});
      if (std::abs(e.value({cs.theta}) - truth) <= 3.0 * e.se({cs.theta}) + 1e-12) ++within;
    }
    o.pass = o.pass && within >= 99;
    o.detail += cs.name + " " + std::to_string(within) + "/" + std::to_string(kTrials) + " ";
  }
  o.detail += "(need >= 99 within 3 SE)";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "seqauction_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.yaml";
  std::ofstream(cfg) << "bidders: 3\ngoods: 2\npayment: first\ngrid: 16\ninner_iterations: 4\niterations: 2\n"
                        "outer_integration: mc\nouter_samples: 3000\nseed: 17\ncheckpoint_every: 1\n";
  std::ostringstream log;
  int files = 0, same = 0;
  for (const char* run : {"a", "b"}) {
    if (cmd_solve(cfg.string(), {"output_dir=" + (dir / run).string()}, log) != kExitOk)
      return {false, "solve failed: " + log.str()};
  }
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("checkpoint", 0) != 0 && name != "strategy.csv") continue;
    ++files;
    if (fs::exists(dir / "b" / name) && slurp(entry.path()) == slurp(dir / "b" / name)) ++same;
  }
  fs::remove_all(dir);
  return {files > 0 && same == files, std::to_string(same) + "/" + std::to_string(files) + " checkpoint files identical"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> which;
  config_dir = SEQA_CONFIG_DIR;
  app.add_option("--criterion", which, "criterion number (repeatable)")->check(CLI::Range(1, 9));
  app.add_option("--config-dir", config_dir, "directory holding the benchmark configs");
  CLI11_PARSE(app, argc, argv);
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"second price n=3 k=2", [] { return check_rounds("sales_second_n3k2.yaml", {0.03, 0.02}, 0, 1800); }}},
      {2, {"first price n=3 k=2", [] { return check_rounds("sales_first_n3k2.yaml", {0.03, 0.02}, 0, 0); }}},
      {3, {"second price n=5 k=3",
           [] { return check_rounds("sales_second_n5k3.yaml", {0.03, 0.03, 0.02}, 0, 3600); }}},
      {4, {"split award n=3", [] { return check_rounds("split_award_n3.yaml", {0.02, 0.02}, 0.015, 0); }}},
      {5, {"verifier soundness", soundness}},
      {6, {"decomposition inequality", decomposition}},
      {7, {"convexity", convexity_suite}},
      {8, {"sampling closed forms", mc_closed_forms}},
      {9, {"determinism", determinism}},
  };
  int failures = 0;
  for (int c : which) {
    const auto& [name, fn] = criteria.at(c);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d [%s] %s: %s\n", c, name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return std::min(failures, 100);
}
