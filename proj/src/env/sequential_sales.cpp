#include "seqauction/env/sequential_sales.hpp"

#include <algorithm>

namespace seqauction {

SequentialSales::SequentialSales(SequentialSalesSpec spec)
    : spec_(spec), prior_(TypeSpace::interval(0.0, spec.upper)) {
  if (spec_.bidders < 2 || spec_.goods < 1 || spec_.goods >= spec_.bidders)
    throw ContractViolation("sequential sales needs 1 <= K < N");
}

std::string SequentialSales::name() const {
  return spec_.payment == PaymentRule::First ? "sequential_first_price" : "sequential_second_price";
}

bool SequentialSales::terminal(const AllocationHistory& h) const { return h.round() >= spec_.goods; }

std::vector<char> SequentialSales::active(const AllocationHistory& h) const {
  std::vector<char> act(spec_.bidders, 1);
  for (const auto& x : h.rounds)
    for (int w : x.winners) act[w] = 0;
  return act;
}

RoundOutcome SequentialSales::apply(const AllocationHistory& h, const std::vector<BidVector>& bids) const {
  auto act = active(h);
  int winner = -1;
  for (int i = 0; i < spec_.bidders; ++i)
    if (act[i] && (winner < 0 || bids[i][0] > bids[winner][0])) winner = i;
  double price = bids[winner][0];
  if (spec_.payment == PaymentRule::Second) {
    price = 0.0;
    for (int i = 0; i < spec_.bidders; ++i)
      if (act[i] && i != winner) price = std::max(price, bids[i][0]);
  }
  return single_item_outcome(*single_item(h), winner, price);
}

Affine SequentialSales::valuation(int, const Allocation&, const AllocationHistory&) const {
  Affine v;
  v.a[0] = 1.0;
  return v;
}

double SequentialSales::price(const RoundOutcome& o) const {
  return o.allocation.empty() ? 0.0 : o.payments[o.allocation.winners[0]];
}

std::vector<Allocation> SequentialSales::possible_allocations(const AllocationHistory& h) const {
  std::vector<Allocation> out;
  auto act = active(h);
  for (int i = 0; i < spec_.bidders; ++i)
    if (act[i]) out.push_back(Allocation{0, {i}});
  return out;
}

std::vector<int> SequentialSales::items(const Allocation&, const AllocationHistory& h) const {
  return {h.round()};
}

BidVector SequentialSales::truthful_bid(int, const TypePoint& theta, const AllocationHistory&) const {
  return {theta[0]};
}

bool SequentialSales::independent_beliefs() const {
  // With a second-price rule the price reveals that some loser bid exactly that
  // amount; once two or more losers stay in, their posteriors are correlated.
  return spec_.payment == PaymentRule::First || spec_.goods == 1;
}

std::optional<SingleItemRule> SequentialSales::single_item(const AllocationHistory&) const {
  return SingleItemRule{false, spec_.payment == PaymentRule::Second, 0};
}

std::optional<OracleBid> SequentialSales::oracle(int, const AllocationHistory& h, double theta) const {
  return OracleBid{analytical_sequential_sales(theta, h.round() + 1, spec_), 0};
}

}  // namespace seqauction
