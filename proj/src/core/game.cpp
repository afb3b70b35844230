#include "seqauction/core/game.hpp"

namespace seqauction {

RoundOutcome AuctionEnvironment::single_item_outcome(const SingleItemRule& rule, int winner,
                                                     double price_bid) const {
  RoundOutcome o;
  o.allocation.kind = rule.kind;
  o.allocation.winners = {winner};
  o.payments.assign(num_bidders(), 0.0);
  o.payments[winner] = rule.reverse ? -price_bid : price_bid;
  return o;
}

RoundOutcome apply_round(const AuctionEnvironment& env, const AllocationHistory& history,
                         const std::vector<BidVector>& bids) {
  if (history.round() >= env.num_rounds() || env.terminal(history))
    throw GameOver("no round left to play");
  if (static_cast<int>(bids.size()) != env.num_bidders())
    throw ContractViolation("one bid vector per bidder required");
  const int q = env.bid_dim(history);
  auto act = env.active(history);
  for (int i = 0; i < env.num_bidders(); ++i) {
    if (!act[i]) continue;
    if (static_cast<int>(bids[i].size()) != q)
      throw ContractViolation("bid vector length does not match the bundle list");
    for (double b : bids[i])
      if (!(b >= 0.0)) throw ContractViolation("bids must be nonnegative");
  }
  return env.apply(history, bids);
}

double round_utility(const AuctionEnvironment& env, int bidder, const TypePoint& theta,
                     const RoundOutcome& outcome, const AllocationHistory& history) {
  if (!env.type_space(bidder).contains(theta)) throw DomainError("type outside type space");
  double v = 0.0;
  if (outcome.allocation.has_winner(bidder))
    v = env.valuation(bidder, outcome.allocation, history).at(theta);
  return v - outcome.payments[bidder];
}

}  // namespace seqauction
