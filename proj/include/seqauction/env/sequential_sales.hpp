#pragma once

#include "seqauction/core/environment.hpp"
#include "seqauction/env/oracles.hpp"

namespace seqauction {

// K identical goods sold one per round to single-minded bidders; winners leave.
class SequentialSales final : public AuctionEnvironment {
 public:
  explicit SequentialSales(SequentialSalesSpec spec);

  const SequentialSalesSpec& spec() const { return spec_; }

  std::string name() const override;
  int num_bidders() const override { return spec_.bidders; }
  int num_rounds() const override { return spec_.goods; }
  const Prior& prior(int) const override { return prior_; }
  std::vector<std::string> bundles(const AllocationHistory&) const override { return {"item"}; }
  double bid_upper(const AllocationHistory&, int) const override { return spec_.upper; }
  bool terminal(const AllocationHistory& h) const override;
  std::vector<char> active(const AllocationHistory& h) const override;
  RoundOutcome apply(const AllocationHistory& h, const std::vector<BidVector>& bids) const override;
  Affine valuation(int bidder, const Allocation& x, const AllocationHistory& h) const override;
  double price(const RoundOutcome& o) const override;
  std::vector<Allocation> possible_allocations(const AllocationHistory& h) const override;
  std::vector<int> items(const Allocation& x, const AllocationHistory& h) const override;
  BidVector truthful_bid(int bidder, const TypePoint& theta, const AllocationHistory& h) const override;
  bool independent_beliefs() const override;
  std::optional<SingleItemRule> single_item(const AllocationHistory&) const override;
  std::optional<OracleBid> oracle(int bidder, const AllocationHistory& h, double theta) const override;
  bool exchangeable() const override { return true; }

 private:
  SequentialSalesSpec spec_;
  UniformPrior prior_;
};

}  // namespace seqauction
