#pragma once

#include "seqauction/core/environment.hpp"

namespace seqauction {

RoundOutcome apply_round(const AuctionEnvironment& env, const AllocationHistory& history,
                         const std::vector<BidVector>& bids);

// v_i(theta, x_t | h) - p_{i,t}
double round_utility(const AuctionEnvironment& env, int bidder, const TypePoint& theta,
                     const RoundOutcome& outcome, const AllocationHistory& history);

}  // namespace seqauction
