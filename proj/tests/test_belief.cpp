#include <gtest/gtest.h>

#include <algorithm>

#include "seqauction/belief/history.hpp"
#include "seqauction/env/sequential_sales.hpp"
#include "seqauction/solver/search.hpp"

using namespace seqauction;

TEST(TileSet, RunsAndMembership) {
  const TileSet s = TileSet::from_sorted({0, 1, 2, 5, 6});
  ASSERT_EQ(s.runs().size(), 2u);
  EXPECT_EQ(s.runs()[0], std::make_pair(0, 3));
  EXPECT_EQ(s.runs()[1], std::make_pair(5, 7));
  EXPECT_EQ(s.count(), 5);
  EXPECT_TRUE(s.contains(5));
  EXPECT_FALSE(s.contains(3));
  EXPECT_EQ(s.tiles(), (std::vector<int>{0, 1, 2, 5, 6}));
  EXPECT_EQ(TileSet::range(2, 2).count(), 0);
}

namespace {

struct Game {
  SequentialSales env;
  std::vector<std::shared_ptr<const Tiling>> tilings;
  BeliefSpace space;
  PCStrategyProfile sigma;
  ClassGraph g;

  Game(int n, int k, PaymentRule rule, int grid)
      : env({n, k, rule, 1.0}), tilings(make_tilings(env, {grid})), space(env, tilings) {
    sigma = init_truthful(env, tilings, {root_class(env, space)});
    g = enumerate_history_classes(env, space, sigma);
  }
};

RoundOutcome sale(const AuctionEnvironment& env, int winner, double price) {
  return env.single_item_outcome(*env.single_item({}), winner, price);
}

}  // namespace

TEST(BidderSpace, InternsEqualSetsOnce) {
  Game game(3, 2, PaymentRule::First, 10);
  BidderSpace& b = game.space.bidder(0);
  const SetId a = b.intern(TileSet::range(0, 4));
  EXPECT_EQ(b.intern(TileSet::from_sorted({0, 1, 2, 3})), a);
  EXPECT_NEAR(b.mass(a), 0.4, 1e-12);
  EXPECT_NEAR(b.mass(b.full()), 1.0, 1e-12);
}

// Truthful first price, 3 bidders, 10 tiles: bidder 0 winning at 0.8 reveals
// that both others sit on tiles 0..8 (the tie at 0.8 goes to bidder 0).
TEST(Beliefs, BayesUpdateAfterFirstPriceWin) {
  Game game(3, 2, PaymentRule::First, 10);
  const BeliefProfile mu = bayes_update(game.g, game.sigma, 0, sale(game.env, 0, 0.8));
  EXPECT_FALSE(mu.active[0]);
  for (int j : {1, 2}) {
    ASSERT_TRUE(mu.active[j]);
    EXPECT_EQ(game.space.bidder(j).set(mu.beliefs[j].support), TileSet::range(0, 9));
    EXPECT_NEAR(mu.beliefs[j].mass, 0.9, 1e-12);
  }
  // A tie with bidder 1 would go to bidder 0 but not to bidder 2.
  const BeliefProfile nu = bayes_update(game.g, game.sigma, 0, sale(game.env, 1, 0.5));
  EXPECT_EQ(game.space.bidder(0).set(nu.beliefs[0].support), TileSet::range(0, 5));
  EXPECT_EQ(game.space.bidder(2).set(nu.beliefs[2].support), TileSet::range(0, 6));
}

TEST(Beliefs, OffPathPriceRoundsDown) {
  Game game(3, 2, PaymentRule::First, 10);
  const RoundOutcome off = sale(game.env, 0, 0.85);
  EXPECT_FALSE(game.g.on_path(0, off));
  EXPECT_THROW(bayes_update(game.g, game.sigma, 0, off), OffPathOutcome);
  EXPECT_EQ(game.g.successor(0, off), game.g.successor(0, sale(game.env, 0, 0.8)));
  const BeliefProfile chosen = finite_belief_choice(game.g, 0, off);
  EXPECT_EQ(chosen, bayes_update(game.g, game.sigma, 0, sale(game.env, 0, 0.8)));
}

TEST(Beliefs, OnPathReachSumsToOne) {
  Game game(3, 2, PaymentRule::First, 12);
  double total = 0.0;
  for (int ci : game.g.round(1)) total += game.g.at(ci).reach;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_NEAR(game.g.root().reach, 1.0, 1e-12);
}

TEST(Beliefs, ClassIdsAreContentAddressed) {
  Game a(3, 2, PaymentRule::Second, 8);
  Game b(3, 2, PaymentRule::Second, 8);
  auto ia = a.g.ids(), ib = b.g.ids();
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  EXPECT_EQ(ia, ib);
  EXPECT_EQ(std::adjacent_find(ia.begin(), ia.end()), ia.end());
}

TEST(Beliefs, MonotoneStrategiesGiveIntervals) {
  Game game(4, 3, PaymentRule::First, 10);
  for (int ci = 0; ci < game.g.size(); ++ci) {
    const HistoryClass& c = game.g.at(ci);
    for (int i = 0; i < 4; ++i)
      if (c.beliefs.active[i]) EXPECT_EQ(game.space.bidder(i).set(c.beliefs.beliefs[i].support).runs().size(), 1u);
  }
}

TEST(Beliefs, BudgetIsEnforced) {
  SequentialSales env({3, 2, PaymentRule::First, 1.0});
  auto tilings = make_tilings(env, {20});
  BeliefSpace space(env, tilings);
  PCStrategyProfile sigma = init_truthful(env, tilings, {root_class(env, space)});
  EXPECT_THROW(enumerate_history_classes(env, space, sigma, BeliefRule::RoundDown, 5), ClassBudgetExceeded);
}
