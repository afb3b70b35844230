#include "seqauction/io/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "seqauction/env/oracles.hpp"
#include "seqauction/io/config.hpp"
#include "seqauction/io/serialize.hpp"

namespace seqauction {

namespace fs = std::filesystem;

namespace {

class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FileStamp stamp_of(const RunConfig& cfg) { return FileStamp{cfg.hash(), cfg.solver.seed}; }

// Writes through a temporary file so a crash never leaves a truncated file.
template <class F>
void write_file(const fs::path& path, F&& body) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw UserError("cannot write " + tmp.string());
    body(os);
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UserError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

LoadedStrategy load_checkpoint(const std::string& path, const std::vector<std::shared_ptr<const Tiling>>& tilings,
                               const RunConfig& cfg, std::ostream& log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open checkpoint " + path);
  LoadedStrategy s;
  try {
    s = read_strategy(in, tilings);
  } catch (const FormatError& e) {
    throw UserError(path + ": " + e.what());
  }
  if (!s.stamp.config_hash.empty() && s.stamp.config_hash != cfg.hash())
    log << "note: checkpoint was written under config " << s.stamp.config_hash << ", current config is "
        << cfg.hash() << "\n";
  return s;
}

struct Loaded {
  RunConfig cfg;
  EnvironmentPtr env;
  std::vector<std::shared_ptr<const Tiling>> tilings;
};

Loaded load(const std::string& config_path, const std::vector<std::string>& overrides) {
  Loaded l;
  l.cfg = load_config(config_path, overrides);
  try {
    l.env = make_environment(l.cfg.env);
    l.tilings = make_tilings(*l.env, l.cfg.solver.grid);
  } catch (const ContractViolation& e) {
    throw UserError(config_path + ": " + e.what());
  } catch (const DomainError& e) {
    throw UserError(config_path + ": " + e.what());
  }
  return l;
}

ClassGraph graph_for(const Loaded& l, BeliefSpace& space, PCStrategyProfile& sigma, std::ostream& log) {
  std::size_t before = 0;
  for (const auto& s : sigma.strategies) before += s.tables().size();
  ClassGraph g = enumerate_history_classes(*l.env, space, sigma, l.cfg.solver.belief_rule, l.cfg.solver.class_budget);
  std::size_t after = 0;
  for (const auto& s : sigma.strategies) after += s.tables().size();
  if (after != before)
    log << "warning: " << (after - before) << " (bidder, class) tables were missing from the checkpoint and start truthful\n";
  return g;
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
  } catch (const UserError& e) {
    log << "error: " << e.what() << "\n";
  } catch (const VerificationRefused& e) {
    log << "verification refused: " << e.what() << "\n";
  } catch (const OracleUnavailable& e) {
    log << "comparison refused: " << e.what() << "\n";
  } catch (const ClassBudgetExceeded& e) {
    log << "error: " << e.what() << " (raise class_budget or coarsen the grid)\n";
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitUserError;
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& log) {
  return guarded(log, [&] {
    const Loaded l = load(config_path, overrides);
    const fs::path dir = prepare_output(l.cfg);
    const FileStamp stamp = stamp_of(l.cfg);
    log << l.env->name() << ": " << l.cfg.env.bidders << " bidders, config " << stamp.config_hash << "\n";

    const auto t0 = std::chrono::steady_clock::now();
    auto hook = [&](int it, const PCStrategyProfile& sigma) {
      write_file(dir / "checkpoint_latest.csv", [&](std::ostream& os) { write_strategy(os, sigma, stamp); });
      if (l.cfg.checkpoint_every > 0 && it % l.cfg.checkpoint_every == 0) {
        char name[40];
        std::snprintf(name, sizeof name, "checkpoint_%05d.csv", it);
        write_file(dir / name, [&](std::ostream& os) { write_strategy(os, sigma, stamp); });
      }
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log << "iteration " << it << " done after " << s << " s\n";
    };
    SearchResult res = run_search(*l.env, l.cfg.solver, hook);

    write_file(dir / "strategy.csv", [&](std::ostream& os) { write_strategy(os, res.sigma, stamp); });
    write_file(dir / "trace.csv", [&](std::ostream& os) { write_trace(os, res.trace, stamp); });
    double last_loss = 0.0;
    if (!res.trace.empty())
      for (const TraceRow& r : res.trace)
        if (r.iteration == res.trace.back().iteration) last_loss = std::max(last_loss, r.max_loss);
    if (l.cfg.export_classes) {
      BeliefSpace space(*l.env, res.tilings);
      PCStrategyProfile sigma = res.sigma;
      const ClassGraph g = graph_for(l, space, sigma, log);
      write_file(dir / "classes.jsonl", [&](std::ostream& os) { write_classes(os, g, stamp); });
    }
    log << "inner iterations " << res.inner_iterations << ", final max immediate loss " << last_loss << "\n"
        << "wrote " << (dir / "strategy.csv").string() << "\n";
  });
}

int cmd_verify(const std::string& config_path, const std::string& checkpoint,
               const std::vector<std::string>& overrides, std::ostream& log) {
  return guarded(log, [&] {
    const Loaded l = load(config_path, overrides);
    LoadedStrategy s = load_checkpoint(checkpoint, l.tilings, l.cfg, log);
    const fs::path dir = prepare_output(l.cfg);
    const FileStamp stamp = stamp_of(l.cfg);
    BeliefSpace space(*l.env, l.tilings);
    const ClassGraph g = graph_for(l, space, s.sigma, log);
    const EpsilonReport report = epsilon_bound(g, s.sigma, l.cfg.verifier);
    write_file(dir / "vertex_losses.csv", [&](std::ostream& os) { write_vertex_losses(os, report.table, stamp); });
    write_file(dir / "epsilon_report.json",
               [&](std::ostream& os) { write_report(os, report, "vertex_losses.csv", stamp); });
    log << "epsilon " << report.epsilon << " (with margin " << report.epsilon_with_margin << "), worst bidder "
        << report.worst_bidder << ", path length " << report.worst_path.size() << "\n";
  });
}

int cmd_compare(const std::string& config_path, const std::string& checkpoint,
                const std::vector<std::string>& overrides, std::ostream& log) {
  return guarded(log, [&] {
    const Loaded l = load(config_path, overrides);
    LoadedStrategy s = load_checkpoint(checkpoint, l.tilings, l.cfg, log);
    const TypeSpace root_space = l.tilings[0]->space();
    if (!l.env->oracle(0, AllocationHistory{}, root_space.lower[0]))
      throw OracleUnavailable(l.env->name() + " has no analytical equilibrium for these parameters");
    const fs::path dir = prepare_output(l.cfg);
    const FileStamp stamp = stamp_of(l.cfg);
    BeliefSpace space(*l.env, l.tilings);
    const ClassGraph g = graph_for(l, space, s.sigma, log);
    const auto classes = class_distances(g, s.sigma);
    const auto rounds = round_distances(classes);
    write_file(dir / "compare_classes.csv", [&](std::ostream& os) { write_class_distances(os, classes, stamp); });
    write_file(dir / "compare_rounds.csv", [&](std::ostream& os) { write_round_distances(os, l.cfg.env, rounds, stamp); });
    if (l.cfg.export_bid_functions)
      write_file(dir / "bid_functions.csv",
                 [&](std::ostream& os) { write_bid_functions(os, g, s.sigma, l.cfg.compare_points, stamp); });
    for (const RoundDistance& r : rounds)
      log << "round " << r.round << ": L2 " << r.belief << " (prior measure " << r.prior << ", interior "
          << r.interior << ") over " << r.classes << " classes\n";
    if (l.cfg.env.kind == "split_award")
      log << "sole bids at least twice the lowest split bid: " << split_sole_consistency(g, s.sigma) * 100 << "%\n";
  });
}

}  // namespace seqauction
