#include "seqauction/solver/search.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "seqauction/belief/sampling.hpp"
#include "seqauction/solver/pattern_search.hpp"

namespace seqauction {

std::vector<std::shared_ptr<const Tiling>> make_tilings(const AuctionEnvironment& env, const std::vector<int>& grid) {
  std::vector<std::shared_ptr<const Tiling>> out;
  for (int i = 0; i < env.num_bidders(); ++i) {
    const TypeSpace& ts = env.type_space(i);
    if (static_cast<int>(grid.size()) != ts.dim())
      throw ContractViolation("grid has " + std::to_string(grid.size()) + " entries but types have dimension " +
                              std::to_string(ts.dim()));
    out.push_back(std::make_shared<const Tiling>(Tiling::uniform(ts, grid)));
  }
  return out;
}

EvalSettings eval_settings(const Fidelity& fid, ContinuationMode mode) {
  EvalSettings s;
  s.integration = fid.integration;
  s.continuation = mode;
  s.samples = fid.samples;
  return s;
}

namespace {

// Tables for classes first seen during the run are copied from the class of
// the previous graph with the same allocation history whose belief supports
// differ least in prior mass. Class ids move whenever earlier-round beliefs
// move, so without this every such class would restart from truthful bids.
class WarmStart {
 public:
  explicit WarmStart(const BeliefSpace& space) : space_(space) {
    for (int i = 0; i < space.bidders(); ++i) {
      const BidderSpace& bs = space.bidder(i);
      std::vector<double> c(bs.tiles() + 1, 0.0);
      for (int t = 0; t < bs.tiles(); ++t) c[t + 1] = c[t] + bs.tile_mass(t);
      cum_.push_back(std::move(c));
    }
  }

  void remember(const ClassGraph& g) {
    known_.clear();
    for (int ci = 0; ci < g.size(); ++ci) {
      const HistoryClass& c = g.at(ci);
      if (c.terminal) continue;
      Known k{c.id, {}};
      for (int i = 0; i < space_.bidders(); ++i)
        k.support.push_back(c.beliefs.active[i] ? c.beliefs.beliefs[i].support : kNoSet);
      known_[c.history.rounds].push_back(std::move(k));
    }
  }

  // A bidder's best response depends on the opponents' beliefs, so the source
  // class is chosen per bidder on the opponents' supports.
  void operator()(const HistoryClass& c, PCStrategyProfile& sigma) const {
    auto it = known_.find(c.history.rounds);
    if (it == known_.end()) return;
    std::vector<std::vector<double>> diff;
    for (int i = 0; i < sigma.size(); ++i) {
      if (sigma[i].has(c.id)) continue;
      if (diff.empty()) {
        diff.assign(it->second.size(), std::vector<double>(space_.bidders(), 0.0));
        for (int j = 0; j < space_.bidders(); ++j) {
          if (!c.beliefs.active[j]) continue;
          for (std::size_t k = 0; k < it->second.size(); ++k)
            diff[k][j] = distance(j, c.beliefs.beliefs[j].support, it->second[k].support[j]);
        }
      }
      // Opponents' supports decide; the own support only breaks ties.
      const Known* best = nullptr;
      std::pair<double, double> best_d;
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        if (!sigma[i].has(it->second[k].id)) continue;
        std::pair<double, double> d{0.0, diff[k][i]};
        for (int j = 0; j < space_.bidders(); ++j)
          if (j != i) d.first += diff[k][j];
        if (!best || d < best_d) {
          best = &it->second[k];
          best_d = d;
        }
      }
      if (best) sigma[i].set_table(c.id, sigma[i].table(best->id));
    }
  }

 private:
  struct Known {
    ClassId id;
    std::vector<SetId> support;
  };

  double mass(int j, const TileSet& s) const {
    double m = 0.0;
    for (auto [b, e] : s.runs()) m += cum_[j][e] - cum_[j][b];
    return m;
  }

  // Prior mass of the symmetric difference, summed over the segments between
  // consecutive run boundaries where exactly one set is present.
  double distance(int j, SetId a, SetId b) const {
    if (a == b) return 0.0;
    const BidderSpace& bs = space_.bidder(j);
    if (a == kNoSet || b == kNoSet) return mass(j, bs.set(a == kNoSet ? b : a));
    std::vector<std::pair<int, int>> edges;  // (position, which set toggles)
    for (auto [lo, hi] : bs.set(a).runs()) edges.insert(edges.end(), {{lo, 0}, {hi, 0}});
    for (auto [lo, hi] : bs.set(b).runs()) edges.insert(edges.end(), {{lo, 1}, {hi, 1}});
    std::sort(edges.begin(), edges.end());
    bool in[2] = {false, false};
    double d = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      in[edges[e].second] = !in[edges[e].second];
      if (in[0] != in[1]) d += cum_[j][edges[e + 1].first] - cum_[j][edges[e].first];
    }
    return d;
  }

  const BeliefSpace& space_;
  std::vector<std::vector<double>> cum_;
  std::map<std::vector<Allocation>, std::vector<Known>> known_;
};

struct Run {
  const AuctionEnvironment& env;
  const SolverConfig& cfg;
  BeliefSpace space;
  PCStrategyProfile sigma;
  std::vector<TraceRow> trace;
  WarmStart warm;

  Run(const AuctionEnvironment& e, const SolverConfig& c, const std::vector<std::shared_ptr<const Tiling>>& tilings)
      : env(e), cfg(c), space(e, tilings), warm(space) {
    sigma = init_truthful(env, tilings, {root_class(env, space)});
  }

  ClassGraph enumerate() {
    ClassGraph g = enumerate_history_classes(env, space, sigma, cfg.belief_rule, cfg.class_budget, std::cref(warm));
    warm.remember(g);
    return g;
  }

  // Bidders that won the same things so far and share a belief support face
  // the same problem in a class; sequential updates drift them apart, which
  // makes later supports asymmetric.
  void symmetrize() {
    const ClassGraph g = enumerate();
    for (int ci = 0; ci < g.size(); ++ci) {
      const HistoryClass& c = g.at(ci);
      if (c.terminal) continue;
      std::map<std::pair<std::vector<int>, std::vector<std::pair<int, int>>>, std::vector<int>> groups;
      for (int i = 0; i < sigma.size(); ++i) {
        if (!c.beliefs.active[i]) continue;
        std::vector<int> role;
        for (const Allocation& x : c.history.rounds) role.push_back(x.has_winner(i) ? x.kind : -1);
        groups[{role, space.bidder(i).set(c.beliefs.beliefs[i].support).runs()}].push_back(i);
      }
      for (const auto& [key, members] : groups) {
        if (members.size() < 2) continue;
        BidTable avg = sigma[members[0]].table(c.id);
        for (std::size_t m = 1; m < members.size(); ++m) {
          const BidTable& t = sigma[members[m]].table(c.id);
          for (std::size_t k = 0; k < avg.bids.size(); ++k) avg.bids[k] += t.bids[k];
        }
        for (double& b : avg.bids) b /= static_cast<double>(members.size());
        for (int i : members) sigma[i].set_table(c.id, avg);
      }
    }
  }

  // Re-enumerates under the updated profile and drops tables of classes that
  // are no longer reachable, so snapshots are self-contained.
  void settle() {
    const auto ids = enumerate().ids();
    for (int i = 0; i < sigma.size(); ++i) sigma[i].retain(ids);
  }

  // Backward sweep of one bidder over the classes of g: immediate best
  // responses per tile, damped into prof[i]. Returns the largest tile loss.
  double sweep(const ClassGraph& g, PCStrategyProfile& prof, int i, int it, const Fidelity& fid, bool outer) {
    double worst = 0.0;
    const auto dir = env.bids_increase_with_type() ? MonotoneDirection::Nondecreasing : MonotoneDirection::Nonincreasing;
    SubgameCache cache;
    cache.reset(g.size(), env.num_bidders());
    Evaluator ev(g, prof, eval_settings(fid, cfg.continuation), &cache);
    const Tiling& tiling = space.bidder(i).tiling();
    for (int t = g.rounds() - 1; t >= 0; --t) {
      for (int ci : g.round(t)) {
        const HistoryClass& c = g.at(ci);
        if (c.terminal || !c.beliefs.active[i]) continue;
        const std::uint64_t seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(i), c.id});
        auto ctx = ev.context(ci, i, seed);
        const BidTable& old = prof[i].table(c.id);
        BidTable br = old;
        std::vector<double> losses(tiling.size(), 0.0);
        std::vector<BidVector> best(tiling.size());
        tbb::parallel_for(0, tiling.size(), [&](int k) {
          IbrResult r = immediate_best_response(ev, *ctx, ci, k, tiling.lower_vertex(k), old.at(k), fid);
          if (!std::isfinite(r.utility) || !std::isfinite(r.incumbent_utility))
            throw std::runtime_error("non-finite utility at class " + std::to_string(c.id) + ", tile " +
                                     std::to_string(k));
          losses[k] = r.loss;
          best[k] = r.bid;
        });
        for (int k = 0; k < tiling.size(); ++k) br.set(k, best[k]);
        BidTable next = update_table(old, br, losses, cfg.update);
        if (cfg.monotone) next = enforce_monotone(next, tiling, dir);
        prof[i].set_table(c.id, std::move(next));
        const double ml = *std::max_element(losses.begin(), losses.end());
        worst = std::max(worst, ml);
        trace.push_back(TraceRow{it, i, t + 1, c.id, ml, outer});
        if (cfg.continuation == ContinuationMode::Cached) refresh_cache(ev, cache, ci, i, seed);
      }
    }
    return worst;
  }

  // One pass over all bidders. Sequential: each bidder responds to the
  // profile left by the previous one. Simultaneous: all respond to the same
  // snapshot.
  double iteration(int it, const Fidelity& fid, bool outer) {
    double worst = 0.0;
    if (cfg.order == UpdateOrder::Simultaneous) {
      const ClassGraph g = enumerate();
      PCStrategyProfile next = sigma;
      for (int i = 0; i < env.num_bidders(); ++i) {
        PCStrategyProfile work = sigma;
        worst = std::max(worst, sweep(g, work, i, it, fid, outer));
        next[i] = std::move(work[i]);
      }
      sigma = std::move(next);
    } else {
      for (int i = 0; i < env.num_bidders(); ++i) {
        const ClassGraph g = enumerate();
        worst = std::max(worst, sweep(g, sigma, i, it, fid, outer));
      }
    }
    return worst;
  }
};

}  // namespace

SearchResult run_search(const AuctionEnvironment& env, const SolverConfig& cfg, const IterationHook& hook) {
  cfg.validate();
  auto tilings = make_tilings(env, cfg.grid);
  Run run(env, cfg, tilings);
  const double range = env.bid_upper(AllocationHistory{}, 0);
  SearchResult res;
  const bool symmetric = cfg.symmetric && env.exchangeable();
  int it = 0;
  while (res.inner_iterations < cfg.inner_iterations) {
    const double worst = run.iteration(++it, cfg.inner, false);
    ++res.inner_iterations;
    if (symmetric) run.symmetrize();
    run.settle();
    if (hook) hook(it, run.sigma);
    if (worst < cfg.inner_threshold * range) break;
  }
  for (int k = 0; k < cfg.iterations; ++k) {
    run.iteration(++it, cfg.outer, true);
    if (symmetric) run.symmetrize();
    run.settle();
    if (hook) hook(it, run.sigma);
  }
  if (it == 0) run.settle();
  res.sigma = std::move(run.sigma);
  res.tilings = std::move(tilings);
  res.trace = std::move(run.trace);
  return res;
}

}  // namespace seqauction
