#include "tiny.hpp"

#include <algorithm>
#include <random>

#include "seqauction/solver/search.hpp"

namespace seqauction::testkit {

std::string TinyInstance::describe() const {
  std::string s = params.kind + " n=" + std::to_string(params.bidders);
  if (params.kind == "sequential_sales") s += " K=" + std::to_string(params.goods) + " " + params.payment;
  return s + " grid=" + std::to_string(grid) + " classes=" + std::to_string(graph.size());
}

std::unique_ptr<TinyInstance> make_tiny(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto inst = std::make_unique<TinyInstance>();
  EnvironmentParams& p = inst->params;
  const int kind = pick(0, 3);
  if (kind == 3) {
    p.kind = "split_award";
    p.bidders = pick(2, 3);
    p.payment = "first";
    p.lower = 1.0;
    p.upper = 2.0;
    p.cost = 0.2;
  } else {
    p.kind = "sequential_sales";
    p.bidders = pick(2, 3);
    p.goods = std::min(pick(1, 2), p.bidders - 1);
    // Second price keeps public beliefs independent only with one good.
    p.payment = (kind == 2 && p.goods == 1) ? "second" : "first";
  }
  inst->grid = pick(2, kind == 3 ? 4 : 6);
  inst->env = make_environment(p);
  const AuctionEnvironment& env = *inst->env;
  inst->tilings = make_tilings(env, {inst->grid});
  inst->space = std::make_unique<BeliefSpace>(env, inst->tilings);
  inst->sigma = init_truthful(env, inst->tilings, {});

  // Random bids, shaded around truthful so that rounds stay competitive.
  auto randomize = [&](const HistoryClass& c, PCStrategyProfile& sigma) {
    for (int i = 0; i < sigma.size(); ++i) {
      if (sigma[i].has(c.id) || !c.beliefs.active[i]) continue;
      BidTable t = truthful_table(env, i, *inst->tilings[i], c.history);
      for (int k = 0; k < t.tiles(); ++k)
        for (int j = 0; j < t.q; ++j) {
          const double hi = env.bid_upper(c.history, j);
          const double v = t.get(k, j) * (0.4 + 0.8 * unit(rng));
          t.bids[static_cast<std::size_t>(k) * t.q + j] = std::clamp(v, 0.0, hi);
        }
      sigma[i].set_table(c.id, std::move(t));
    }
  };
  inst->graph = enumerate_history_classes(env, *inst->space, inst->sigma, BeliefRule::RoundDown, 10000,
                                          randomize);

  // Deviation grid of uniform bids; split-award round 1 pairs each split bid
  // with an uncompetitive sole bid and with one that ties twice the split.
  const int points = p.kind == "split_award" ? 6 : 12;
  for (int r = 0; r < env.num_rounds(); ++r) {
    AllocationHistory h;
    if (r > 0) h.rounds.push_back(env.possible_allocations({}).front());
    std::vector<BidVector> g;
    const double hi = env.bid_upper(h, 0);
    const double lo = p.kind == "split_award" ? p.lower * p.cost : 0.0;
    for (int k = 0; k < points; ++k) {
      const double b = lo + (hi - lo) * k / (points - 1);
      if (env.bid_dim(h) == 2) {
        g.push_back({b, env.bid_upper(h, 1)});
        g.push_back({b, 2.0 * b});
      } else {
        g.push_back({b});
      }
    }
    if (static_cast<int>(g.size()) > 12) g.resize(12);
    inst->deviation_grid.push_back(std::move(g));
  }
  return inst;
}

}  // namespace seqauction::testkit
