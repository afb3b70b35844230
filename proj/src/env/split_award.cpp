#include "seqauction/env/split_award.hpp"

namespace seqauction {

SplitAward::SplitAward(SplitAwardSpec spec)
    : spec_(spec), prior_(TypeSpace::interval(spec.lower, spec.upper)) {
  if (spec_.bidders < 2) throw ContractViolation("split award needs at least two bidders");
  if (!(spec_.cost > 0.0 && spec_.cost < 1.0)) throw ContractViolation("cost parameter must lie in (0,1)");
  if (!(spec_.lower > 0.0)) throw ContractViolation("cost types must be positive");
}

std::vector<std::string> SplitAward::bundles(const AllocationHistory& h) const {
  if (h.round() == 0) return {"split", "sole"};
  return {"split"};
}

double SplitAward::bid_upper(const AllocationHistory& h, int component) const {
  if (h.round() == 0 && component == 1) return 2.0 * spec_.upper;
  return spec_.upper;
}

bool SplitAward::terminal(const AllocationHistory& h) const {
  if (h.round() >= 2) return true;
  return h.round() == 1 && h.rounds[0].kind == kSole;
}

std::vector<char> SplitAward::active(const AllocationHistory&) const {
  return std::vector<char>(spec_.bidders, 1);
}

RoundOutcome SplitAward::apply(const AllocationHistory& h, const std::vector<BidVector>& bids) const {
  const int n = spec_.bidders;
  auto argmin = [&](int comp) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (bids[i][comp] < bids[best][comp]) best = i;
    return best;
  };
  if (h.round() == 1) {
    int w = argmin(0);
    return single_item_outcome(*single_item(h), w, bids[w][0]);
  }
  int sp = argmin(0), so = argmin(1);
  RoundOutcome o;
  o.payments.assign(n, 0.0);
  if (2.0 * bids[sp][0] <= bids[so][1]) {
    o.allocation = Allocation{kSplit, {sp}};
    o.payments[sp] = -bids[sp][0];
  } else {
    o.allocation = Allocation{kSole, {so}};
    o.payments[so] = -bids[so][1];
  }
  return o;
}

Affine SplitAward::valuation(int bidder, const Allocation& x, const AllocationHistory& h) const {
  Affine v;
  double share = spec_.cost;
  if (x.kind == kSole) share = 1.0;
  if (x.kind == kSecondHalf && !h.rounds.empty() && h.rounds[0].has_winner(bidder))
    share = 1.0 - spec_.cost;
  v.a[0] = -share;
  return v;
}

double SplitAward::price(const RoundOutcome& o) const {
  return o.allocation.empty() ? 0.0 : -o.payments[o.allocation.winners[0]];
}

std::vector<Allocation> SplitAward::possible_allocations(const AllocationHistory& h) const {
  std::vector<Allocation> out;
  for (int i = 0; i < spec_.bidders; ++i) {
    if (h.round() == 0) {
      out.push_back(Allocation{kSplit, {i}});
      out.push_back(Allocation{kSole, {i}});
    } else {
      out.push_back(Allocation{kSecondHalf, {i}});
    }
  }
  return out;
}

std::vector<int> SplitAward::items(const Allocation& x, const AllocationHistory&) const {
  if (x.kind == kSole) return {0, 1};
  if (x.kind == kSplit) return {0};
  return {1};
}

BidVector SplitAward::truthful_bid(int bidder, const TypePoint& theta, const AllocationHistory& h) const {
  if (h.round() == 0) return {spec_.cost * theta[0], theta[0]};
  return {-valuation(bidder, Allocation{kSecondHalf, {bidder}}, h).at(theta)};
}

std::optional<SingleItemRule> SplitAward::single_item(const AllocationHistory& h) const {
  if (h.round() == 1) return SingleItemRule{true, false, kSecondHalf};
  return std::nullopt;
}

std::optional<OracleBid> SplitAward::oracle(int bidder, const AllocationHistory& h, double theta) const {
  if (!spec_.strong_diseconomies()) return std::nullopt;
  if (h.round() == 0) return OracleBid{analytical_split_award(theta, SplitStage::Round1, spec_), 0};
  if (h.rounds[0].kind != kSplit) return std::nullopt;
  auto stage = h.rounds[0].has_winner(bidder) ? SplitStage::Round2Winner : SplitStage::Round2Loser;
  return OracleBid{analytical_split_award(theta, stage, spec_), 0};
}

}  // namespace seqauction
