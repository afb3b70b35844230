#pragma once

#include <vector>

#include "seqauction/belief/history.hpp"

namespace seqauction {

struct BruteForceLimits {
  int bidders = 3;
  int rounds = 2;
  int tiles = 6;
  int bids = 12;
};

// Deviation gain of one bidder at one type point, from one class on. Opponent
// tiles are drawn from the class's beliefs and summed exactly; the deviator
// picks, per round, a bid from grid[round] plus sigma's own bid, and may
// condition later bids on the class it reaches.
struct DeviationValue {
  double best = 0.0;
  double sigma = 0.0;
  double gain() const { return best > sigma ? best - sigma : 0.0; }
};

DeviationValue best_deviation(const ClassGraph& g, const PCStrategyProfile& sigma, int cls, int bidder, int tile,
                              const TypePoint& theta, const std::vector<std::vector<BidVector>>& grid);

// Max gain over bidders, tiles and tile vertices at the root. Refuses
// instances beyond the limits.
double brute_force_exploitability(const ClassGraph& g, const PCStrategyProfile& sigma,
                                  const std::vector<std::vector<BidVector>>& grid, const BruteForceLimits& lim = {});

}  // namespace seqauction
