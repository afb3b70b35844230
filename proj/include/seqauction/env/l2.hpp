#pragma once

#include <functional>
#include <vector>

#include "seqauction/belief/history.hpp"

namespace seqauction {

enum class L2Measure { Belief, Prior };

using BidFunction = std::function<double(double)>;

struct L2Options {
  L2Measure measure = L2Measure::Belief;
  int exclude_top = 0;  // drop the highest tiles of the tiling
};

// sqrt of the integral of (sigma - oracle)^2 under the prior restricted to
// `support` (Belief) or the full prior (Prior), integrated tile by tile.
double l2_distance(const BidTable& table, int component, const BidderSpace& space, const TileSet& support,
                   const BidFunction& oracle, const L2Options& opt = {});

struct ClassDistance {
  int round = 0;  // auction round, 1-based
  ClassId id = 0;
  double reach = 0.0;
  double belief = 0.0;
  double prior = 0.0;
  double interior = 0.0;
};

struct RoundDistance {
  int round = 0;
  double belief = 0.0;
  double prior = 0.0;
  double interior = 0.0;
  int classes = 0;
};

// Distances of every non-terminal class with an oracle for all its active
// bidders; per class the bidders are pooled by mean squared distance.
std::vector<ClassDistance> class_distances(const ClassGraph& g, const PCStrategyProfile& sigma,
                                           int interior_exclude = 2);

// Reach-weighted root-mean-square per round over classes with positive reach.
std::vector<RoundDistance> round_distances(const std::vector<ClassDistance>& classes);

// Split-award check that twice the lowest split bid undercuts every sole bid
// at the root; returns the fraction of (bidder, tile) sole bids satisfying it.
double split_sole_consistency(const ClassGraph& g, const PCStrategyProfile& sigma);

}  // namespace seqauction
