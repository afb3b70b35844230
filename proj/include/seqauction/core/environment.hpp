#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqauction/core/prior.hpp"
#include "seqauction/core/types.hpp"

namespace seqauction {

// Rounds that sell a single unit with a scalar bid admit closed-form outcome
// distributions; environments advertise them through this descriptor.
struct SingleItemRule {
  bool reverse = false;       // lowest bid wins (procurement)
  bool second_price = false;  // winner pays the best losing bid
  int kind = 0;               // allocation label for the award
};

struct OracleBid {
  double bid = 0.0;
  int component = 0;
};

// Sequential auction: n bidders, T rounds, per-round allocation and payment
// rules, affine valuations v_i(theta, x | h) and independent priors.
class AuctionEnvironment {
 public:
  virtual ~AuctionEnvironment() = default;

  virtual std::string name() const = 0;
  virtual int num_bidders() const = 0;
  virtual int num_rounds() const = 0;
  virtual const Prior& prior(int bidder) const = 0;
  const TypeSpace& type_space(int bidder) const { return prior(bidder).space(); }

  // Bundle list for the round following h; its size is q for that round.
  virtual std::vector<std::string> bundles(const AllocationHistory& h) const = 0;
  int bid_dim(const AllocationHistory& h) const { return static_cast<int>(bundles(h).size()); }
  virtual double bid_upper(const AllocationHistory& h, int component) const = 0;

  virtual bool terminal(const AllocationHistory& h) const = 0;
  virtual std::vector<char> active(const AllocationHistory& h) const = 0;

  // Allocation and payments for one round; bids of inactive bidders are ignored.
  virtual RoundOutcome apply(const AllocationHistory& h, const std::vector<BidVector>& bids) const = 0;
  virtual Affine valuation(int bidder, const Allocation& x, const AllocationHistory& h) const = 0;
  // Scalar used to order observations with the same allocation (the price).
  virtual double price(const RoundOutcome& o) const = 0;
  virtual std::vector<Allocation> possible_allocations(const AllocationHistory& h) const = 0;
  virtual std::vector<int> items(const Allocation& x, const AllocationHistory& h) const = 0;
  virtual BidVector truthful_bid(int bidder, const TypePoint& theta,
                                 const AllocationHistory& h) const = 0;

  // True when public posteriors stay independent of the observer's own type,
  // which is what the verifier bound requires.
  virtual bool independent_beliefs() const = 0;
  virtual bool bids_increase_with_type() const { return true; }
  // Bidders are interchangeable up to relabeling (identical priors and
  // valuations; only tie-breaking looks at indices).
  virtual bool exchangeable() const { return false; }

  virtual std::optional<SingleItemRule> single_item(const AllocationHistory&) const {
    return std::nullopt;
  }
  RoundOutcome single_item_outcome(const SingleItemRule& rule, int winner, double price_bid) const;

  virtual std::optional<OracleBid> oracle(int, const AllocationHistory&, double) const {
    return std::nullopt;
  }
};

using EnvironmentPtr = std::shared_ptr<const AuctionEnvironment>;

}  // namespace seqauction
