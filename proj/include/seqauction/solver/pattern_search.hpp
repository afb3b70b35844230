#pragma once

#include <functional>

#include "seqauction/solver/evaluator.hpp"

namespace seqauction {

struct PatternResult {
  BidVector bid;
  double value = 0.0;
  int evaluations = 0;
};

// Maximizes f over the box [lower, upper] starting from `start`. Each step
// evaluates the pattern around the incumbent and moves to the best strictly
// improving point, otherwise shrinks the step. The returned value is never
// below f(start).
PatternResult pattern_search(const std::function<double(const BidVector&)>& f, const BidVector& start,
                             const BidVector& lower, const BidVector& upper, const Fidelity& fid);

struct IbrResult {
  BidVector bid;
  double utility = 0.0;            // at the vertex, best bid
  double incumbent_utility = 0.0;  // at the vertex, sigma's tile bid
  double loss = 0.0;               // clamped difference
  double se = 0.0;                 // paired standard error of the difference
};

// Bid box of one round.
std::pair<BidVector, BidVector> bid_bounds(const AuctionEnvironment& env, const AllocationHistory& h);

// Best single-round deviation at `vertex` (a point of `tile`) against the
// context, searched from the incumbent bid.
IbrResult immediate_best_response(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int tile,
                                  const TypePoint& vertex, const BidVector& incumbent, const Fidelity& fid,
                                  const std::vector<BidVector>& extra_starts = {});

}  // namespace seqauction
