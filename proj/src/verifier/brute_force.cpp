#include "seqauction/verifier/brute_force.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "seqauction/core/game.hpp"
#include "seqauction/verifier/verifier.hpp"

namespace seqauction {

namespace {

struct Profile {
  double p = 0.0;
  std::vector<int> tiles;  // per bidder; the deviator's entry is its own tile
};

struct Search {
  const ClassGraph& g;
  const PCStrategyProfile& sigma;
  int bidder;
  int tile;
  const TypePoint& theta;
  const std::vector<std::vector<BidVector>>& grid;

  DeviationValue solve(int cls, const std::vector<Profile>& profs) const {
    if (cls == kLeaf) return {};
    const HistoryClass& c = g.at(cls);
    if (c.terminal || !c.beliefs.active[bidder]) return {};
    const auto& env = g.env();
    const BidVector own = sigma[bidder].table(c.id).at(tile);
    std::vector<BidVector> cands{own};
    if (c.round < static_cast<int>(grid.size())) cands.insert(cands.end(), grid[c.round].begin(), grid[c.round].end());
    DeviationValue out;
    out.best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cands.size(); ++k) {
      double total = 0.0;
      std::map<int, std::vector<Profile>> groups;
      for (const Profile& pr : profs) {
        std::vector<BidVector> bids(env.num_bidders(), BidVector(cands[k].size(), 0.0));
        for (int j = 0; j < env.num_bidders(); ++j)
          if (c.beliefs.active[j] && j != bidder) bids[j] = sigma[j].table(c.id).at(pr.tiles[j]);
        bids[bidder] = cands[k];
        RoundOutcome o = env.apply(c.history, bids);
        total += pr.p * round_utility(env, bidder, theta, o, c.history);
        groups[g.successor(cls, o)].push_back(pr);
      }
      double best_cont = 0.0, sigma_cont = 0.0;
      for (const auto& [child, ps] : groups) {
        DeviationValue d = solve(child, ps);
        best_cont += d.best;
        sigma_cont += d.sigma;
      }
      out.best = std::max(out.best, total + best_cont);
      if (k == 0) out.sigma = total + sigma_cont;
    }
    return out;
  }
};

}  // namespace

DeviationValue best_deviation(const ClassGraph& g, const PCStrategyProfile& sigma, int cls, int bidder, int tile,
                              const TypePoint& theta, const std::vector<std::vector<BidVector>>& grid) {
  const HistoryClass& c = g.at(cls);
  const int n = g.env().num_bidders();
  std::vector<Profile> profs{Profile{1.0, std::vector<int>(n, -1)}};
  profs[0].tiles[bidder] = tile;
  for (int j = 0; j < n; ++j) {
    if (j == bidder || !c.beliefs.active[j]) continue;
    const BidderSpace& bs = g.space().bidder(j);
    const Belief& b = c.beliefs.beliefs[j];
    std::vector<Profile> next;
    for (const Profile& pr : profs)
      bs.set(b.support).for_each([&](int t) {
        const double m = bs.tile_mass(t) / b.mass;
        if (m <= 0.0) return;
        Profile q = pr;
        q.p *= m;
        q.tiles[j] = t;
        next.push_back(std::move(q));
      });
    profs = std::move(next);
  }
  return Search{g, sigma, bidder, tile, theta, grid}.solve(cls, profs);
}

double brute_force_exploitability(const ClassGraph& g, const PCStrategyProfile& sigma,
                                  const std::vector<std::vector<BidVector>>& grid, const BruteForceLimits& lim) {
  const auto& env = g.env();
  if (env.num_bidders() > lim.bidders || env.num_rounds() > lim.rounds)
    throw VerificationRefused("instance too large for exhaustive deviation search");
  for (int i = 0; i < env.num_bidders(); ++i)
    if (g.space().bidder(i).tiles() > lim.tiles) throw VerificationRefused("too many tiles for exhaustive search");
  for (const auto& r : grid)
    if (static_cast<int>(r.size()) > lim.bids) throw VerificationRefused("bid grid too large for exhaustive search");
  double worst = 0.0;
  for (int i = 0; i < env.num_bidders(); ++i) {
    const Tiling& tiling = g.space().bidder(i).tiling();
    for (int k = 0; k < tiling.size(); ++k)
      for (const TypePoint& w : vertices(tiling.tile(k)))
        worst = std::max(worst, best_deviation(g, sigma, 0, i, k, w, grid).gain());
  }
  return worst;
}

}  // namespace seqauction
