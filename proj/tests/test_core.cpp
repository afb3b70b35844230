#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "seqauction/core/game.hpp"
#include "seqauction/env/oracles.hpp"
#include "seqauction/env/sequential_sales.hpp"
#include "seqauction/env/split_award.hpp"
#include "seqauction/tiling/strategy.hpp"

using namespace seqauction;

TEST(Tiling, HalfOpenTiles) {
  const Tiling t = Tiling::uniform(TypeSpace::interval(0.0, 1.0), 4);
  EXPECT_EQ(t.size(), 4);
  EXPECT_EQ(locate_tile(t, {0.0}), 0);
  EXPECT_EQ(locate_tile(t, {0.25}), 1);
  EXPECT_EQ(locate_tile(t, {0.2499999}), 0);
  // The upper face belongs to the last tile.
  EXPECT_EQ(locate_tile(t, {1.0}), 3);
  EXPECT_FALSE(t.tile(0).contains({0.25}));
  EXPECT_TRUE(t.tile(1).contains({0.25}));
}

TEST(Tiling, RowMajorIndexAndVertices) {
  const Tiling t = Tiling::uniform(TypeSpace({0.0, 0.0}, {1.0, 2.0}), std::vector<int>{2, 4});
  EXPECT_EQ(t.size(), 8);
  const int k = locate_tile(t, {0.6, 1.1});
  EXPECT_EQ(k, 1 * 4 + 2);
  const auto v = vertices(t.tile(k));
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.front(), (TypePoint{0.5, 1.0}));
  EXPECT_EQ(v.back(), (TypePoint{1.0, 1.5}));
}

TEST(Strategy, TruthfulAtLowerVertex) {
  SequentialSales env({3, 2, PaymentRule::First, 1.0});
  const Tiling t = Tiling::uniform(TypeSpace::interval(0.0, 1.0), 5);
  const BidTable tab = truthful_table(env, 0, t, {});
  ASSERT_EQ(tab.tiles(), 5);
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(tab.get(k, 0), 0.2 * k);
}

TEST(Strategy, UpdateRate) {
  UpdateRule r{0.1, 0.7, 50.0, true};
  EXPECT_DOUBLE_EQ(update_rate(0.0, r), 0.1);
  EXPECT_NEAR(update_rate(1e9, r), 0.7, 1e-9);
  EXPECT_NEAR(update_rate(0.02, r), 2.0 / std::numbers::pi * std::atan(1.0) * 0.6 + 0.1, 1e-15);
  // Negative losses are noise and get the floor rate.
  EXPECT_DOUBLE_EQ(update_rate(-1.0, r), 0.1);
}

TEST(Strategy, PerTileVersusShared) {
  BidTable old{1, {0.0, 0.0}}, br{1, {1.0, 1.0}};
  UpdateRule per{0.0, 1.0, 1.0, true};
  BidTable a = update_table(old, br, {0.0, 1e12}, per);
  EXPECT_DOUBLE_EQ(a.get(0, 0), 0.0);
  EXPECT_NEAR(a.get(1, 0), 1.0, 1e-9);
  per.per_tile = false;
  BidTable b = update_table(old, br, {0.0, 1e12}, per);
  EXPECT_NEAR(b.get(0, 0), 1.0, 1e-9);
}

TEST(Strategy, IsotonicPoolsViolators) {
  const auto y = isotonic({1.0, 3.0, 2.0, 4.0}, MonotoneDirection::Nondecreasing);
  EXPECT_EQ(y, (std::vector<double>{1.0, 2.5, 2.5, 4.0}));
  const auto z = isotonic({1.0, 3.0, 2.0}, MonotoneDirection::Nonincreasing);
  EXPECT_EQ(z, (std::vector<double>{2.0, 2.0, 2.0}));
}

TEST(Game, FirstPriceTiesGoToLowestIndex) {
  SequentialSales env({3, 2, PaymentRule::First, 1.0});
  const RoundOutcome o = apply_round(env, {}, {{0.5}, {0.7}, {0.7}});
  EXPECT_EQ(o.allocation.winners, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(o.payments[1], 0.7);
  EXPECT_DOUBLE_EQ(round_utility(env, 1, {0.9}, o, {}), 0.9 - 0.7);
  EXPECT_DOUBLE_EQ(round_utility(env, 2, {0.9}, o, {}), 0.0);
}

TEST(Game, SecondPriceSkipsDepartedWinner) {
  SequentialSales env({3, 2, PaymentRule::Second, 1.0});
  const AllocationHistory h{{Allocation{0, {1}}}};
  // Bidder 1 already won; its bid is ignored in round 2.
  const RoundOutcome o = apply_round(env, h, {{0.3}, {0.99}, {0.4}});
  EXPECT_EQ(o.allocation.winners, std::vector<int>{2});
  EXPECT_DOUBLE_EQ(o.payments[2], 0.3);
}

TEST(Game, SplitAwardBranchTieGoesToSplit) {
  SplitAward env({3, 0.2, 1.0, 2.0});
  // 2 * 0.4 == 0.8: equality awards the split.
  RoundOutcome o = apply_round(env, {}, {{0.5, 0.9}, {0.4, 1.0}, {0.45, 0.8}});
  EXPECT_EQ(o.allocation.kind, SplitAward::kSplit);
  EXPECT_EQ(o.allocation.winners, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(o.payments[1], -0.4);
  o = apply_round(env, {}, {{0.5, 0.9}, {0.41, 1.0}, {0.45, 0.8}});
  EXPECT_EQ(o.allocation.kind, SplitAward::kSole);
  EXPECT_EQ(o.allocation.winners, std::vector<int>{2});
  // Sole winner bears the full cost.
  EXPECT_DOUBLE_EQ(round_utility(env, 2, {1.5}, o, {}), 0.8 - 1.5);
}

TEST(Game, SplitAwardSecondRoundCosts) {
  SplitAward env({3, 0.2, 1.0, 2.0});
  const AllocationHistory h{{Allocation{SplitAward::kSplit, {0}}}};
  EXPECT_DOUBLE_EQ(env.valuation(0, Allocation{SplitAward::kSecondHalf, {0}}, h).at(1.5), -0.8 * 1.5);
  EXPECT_DOUBLE_EQ(env.valuation(1, Allocation{SplitAward::kSecondHalf, {1}}, h).at(1.5), -0.2 * 1.5);
  const RoundOutcome o = apply_round(env, h, {{0.6}, {0.35}, {0.35}});
  EXPECT_EQ(o.allocation.winners, std::vector<int>{1});
}

// Frozen reference values. Sequential sales: the bid share (n-K)/(n-k+1) for
// first price and (n-K)/(n-k) for second price in round k. Split award with
// n = 3, C = 0.2, U[1,2]: round-1 split bid (theta + 4)/15, round-2 loser
// 0.1 theta + 0.2, round-2 winner 0.8 theta (symbolic integration).
TEST(Oracles, SequentialSalesShares) {
  const SequentialSalesSpec fp{3, 2, PaymentRule::First, 1.0};
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.9, 1, fp), 0.3);
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.9, 2, fp), 0.45);
  const SequentialSalesSpec sp{3, 2, PaymentRule::Second, 1.0};
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.9, 1, sp), 0.45);
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.9, 2, sp), 0.9);
  const SequentialSalesSpec sp5{5, 3, PaymentRule::Second, 1.0};
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.6, 1, sp5), 0.3);
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.6, 2, sp5), 0.4);
  EXPECT_DOUBLE_EQ(analytical_sequential_sales(0.6, 3, sp5), 0.6);
}

TEST(Oracles, SplitAwardFrozen) {
  const SplitAwardSpec s{3, 0.2, 1.0, 2.0};
  ASSERT_TRUE(s.strong_diseconomies());
  for (double th : {1.0, 1.25, 1.5, 1.75, 1.99}) {
    EXPECT_NEAR(analytical_split_award(th, SplitStage::Round1, s), (th + 4.0) / 15.0, 1e-9) << th;
    EXPECT_NEAR(analytical_split_award(th, SplitStage::Round2Loser, s), 0.1 * th + 0.2, 1e-9) << th;
    EXPECT_DOUBLE_EQ(analytical_split_award(th, SplitStage::Round2Winner, s), 0.8 * th);
  }
  // One-sided limit at the top of the support.
  EXPECT_NEAR(analytical_split_award(2.0, SplitStage::Round1, s), 6.0 / 15.0, 1e-9);
}

TEST(Oracles, SplitAwardRefusesOutsideRegime) {
  EXPECT_THROW(analytical_split_award(1.5, SplitStage::Round1, {3, 0.6, 1.0, 2.0}), OracleUnavailable);
  EXPECT_THROW(analytical_split_award(1.5, SplitStage::Round1, {2, 0.2, 1.0, 2.0}), OracleUnavailable);
}
