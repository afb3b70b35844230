#pragma once

#include <optional>
#include <vector>

#include "seqauction/belief/tileset.hpp"
#include "seqauction/core/environment.hpp"
#include "seqauction/tiling/strategy.hpp"

namespace seqauction {

// Distribution of one participant's bid at a history class: the distinct bid
// vectors its belief-support tiles play, with normalized masses. For
// single-item rounds levels are sorted by score (bid, or -bid in reverse
// auctions) so that threshold events are index ranges.
struct Levels {
  int bidder = -1;
  std::vector<BidVector> bid;
  std::vector<double> score;
  std::vector<double> mass;
  std::vector<double> cum;  // cum[k] = mass of levels below k
  std::vector<std::vector<int>> tiles;

  int size() const { return static_cast<int>(bid.size()); }
  // First level with score >= v, resp. > v.
  int lb(double v) const;
  int ub(double v) const;
  double range(int lo, int hi) const { return hi > lo ? cum[hi] - cum[lo] : 0.0; }
};

double score_of(const SingleItemRule& rule, double bid);
double bid_of(const SingleItemRule& rule, double score);

Levels build_levels(int bidder, const BidTable& table, const TileSet& support, const BidderSpace& space,
                    const std::optional<SingleItemRule>& rule);

// A bidder whose bid is known: one level with mass 1 and no tiles.
Levels fixed_levels(int bidder, const BidVector& bid, const std::optional<SingleItemRule>& rule);

}  // namespace seqauction
