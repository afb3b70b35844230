#pragma once

#include "seqauction/core/environment.hpp"
#include "seqauction/env/oracles.hpp"

namespace seqauction {

// Two-stage procurement of a business that can be split in halves. Round 1
// takes (split, sole) bids; a split award triggers a first-price reverse
// auction for the second half among all bidders.
class SplitAward final : public AuctionEnvironment {
 public:
  enum Kind { kSplit = 0, kSole = 1, kSecondHalf = 2 };

  explicit SplitAward(SplitAwardSpec spec);

  const SplitAwardSpec& spec() const { return spec_; }

  std::string name() const override { return "split_award"; }
  int num_bidders() const override { return spec_.bidders; }
  int num_rounds() const override { return 2; }
  const Prior& prior(int) const override { return prior_; }
  std::vector<std::string> bundles(const AllocationHistory& h) const override;
  double bid_upper(const AllocationHistory& h, int component) const override;
  bool terminal(const AllocationHistory& h) const override;
  std::vector<char> active(const AllocationHistory&) const override;
  RoundOutcome apply(const AllocationHistory& h, const std::vector<BidVector>& bids) const override;
  Affine valuation(int bidder, const Allocation& x, const AllocationHistory& h) const override;
  double price(const RoundOutcome& o) const override;
  std::vector<Allocation> possible_allocations(const AllocationHistory& h) const override;
  std::vector<int> items(const Allocation& x, const AllocationHistory& h) const override;
  BidVector truthful_bid(int bidder, const TypePoint& theta, const AllocationHistory& h) const override;
  bool independent_beliefs() const override { return true; }
  std::optional<SingleItemRule> single_item(const AllocationHistory& h) const override;
  std::optional<OracleBid> oracle(int bidder, const AllocationHistory& h, double theta) const override;
  bool exchangeable() const override { return true; }

 private:
  SplitAwardSpec spec_;
  UniformPrior prior_;
};

}  // namespace seqauction
