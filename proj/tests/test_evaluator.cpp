#include <gtest/gtest.h>

#include <cmath>

#include "seqauction/env/sequential_sales.hpp"
#include "seqauction/env/split_award.hpp"
#include "seqauction/solver/pattern_search.hpp"
#include "seqauction/solver/search.hpp"

using namespace seqauction;

namespace {

struct Fixture {
  SequentialSales env;
  std::vector<std::shared_ptr<const Tiling>> tilings;
  BeliefSpace space;
  PCStrategyProfile sigma;
  ClassGraph g;

  Fixture(int n, int k, PaymentRule rule, int grid)
      : env({n, k, rule, 1.0}), tilings(make_tilings(env, {grid})), space(env, tilings) {
    sigma = init_truthful(env, tilings, {root_class(env, space)});
    g = enumerate_history_classes(env, space, sigma);
  }
};

EvalSettings full() {
  EvalSettings s;
  s.continuation = ContinuationMode::Full;
  return s;
}

double exact(const Fixture& f, int bidder, double theta, double bid, bool closed_form = true) {
  EvalSettings s = full();
  s.closed_form = closed_form;
  Evaluator ev(f.g, f.sigma, s);
  return expected_utility(ev, 0, bidder, {theta}, {bid}, 1).value({theta});
}

}  // namespace

// Truthful pc opponent on a 100-tile grid bids k/100 on tile k.
TEST(Evaluator, FirstPriceAgainstTruthfulGrid) {
  Fixture f(2, 1, PaymentRule::First, 100);
  // Bidder 1 loses the tie at 0.4: wins on tiles 0..39.
  EXPECT_NEAR(exact(f, 1, 0.8, 0.4), 0.4 * 0.40, 1e-12);
  // Bidder 0 wins the tie: tiles 0..40.
  EXPECT_NEAR(exact(f, 0, 0.8, 0.4), 0.4 * 0.41, 1e-12);
  EXPECT_NEAR(exact(f, 1, 0.8, 0.405), 0.395 * 0.41, 1e-12);
}

TEST(Evaluator, SecondPriceAgainstTruthfulGrid) {
  Fixture f(2, 1, PaymentRule::Second, 100);
  // Wins on tiles 0..40 and pays the mean of k/100 over them, 0.2.
  EXPECT_NEAR(exact(f, 0, 0.8, 0.405), 0.41 * (0.8 - 0.2), 1e-12);
  // A tie at 0.4 as bidder 0: wins and pays its own bid on tile 40.
  EXPECT_NEAR(exact(f, 0, 0.8, 0.4), 0.40 * (0.8 - 0.195) + 0.01 * (0.8 - 0.4), 1e-12);
}

TEST(Evaluator, ClosedFormMatchesGeneric) {
  Fixture f(3, 2, PaymentRule::First, 8);
  for (double b : {0.0, 0.1, 0.25, 0.5, 0.875, 1.0})
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(exact(f, i, 0.7, b, true), exact(f, i, 0.7, b, false), 1e-12) << b;
  Fixture s(3, 2, PaymentRule::Second, 8);
  for (double b : {0.0, 0.125, 0.3, 0.75})
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(exact(s, i, 0.7, b, true), exact(s, i, 0.7, b, false), 1e-12) << b;
}

TEST(Evaluator, SamplingAgreesWithExact) {
  Fixture f(3, 2, PaymentRule::First, 10);
  EvalSettings mc = full();
  mc.integration = Integration::MonteCarlo;
  mc.samples = 20000;
  Evaluator ev(f.g, f.sigma, mc);
  const Estimate e = expected_utility(ev, 0, 1, {0.75}, {0.45}, 99);
  const double truth = exact(f, 1, 0.75, 0.45);
  EXPECT_LE(std::abs(e.value({0.75}) - truth), 4.0 * e.se({0.75}) + 1e-12);
  EXPECT_GT(e.se({0.75}), 0.0);
}

TEST(Evaluator, UtilityIsAffineInOwnType) {
  Fixture f(3, 2, PaymentRule::First, 6);
  Evaluator ev(f.g, f.sigma, full());
  auto ctx = ev.context(0, 0, 1);
  const Estimate e = ev.utility(*ctx, 3, {0.4});
  const double a = e.value({0.5}), b = e.value({0.6}), m = e.value({0.55});
  EXPECT_NEAR(m, 0.5 * (a + b), 1e-12);
}

TEST(Evaluator, CachedSuccessorMustBeFilledFirst) {
  Fixture f(3, 2, PaymentRule::First, 4);
  SubgameCache cache;
  cache.reset(f.g.size(), 3);
  Evaluator ev(f.g, f.sigma, {}, &cache);
  // The context may already read successor values.
  EXPECT_THROW(ev.utility(*ev.context(0, 0, 1), 0, {0.3}), SweepOrderViolation);
}

TEST(PatternSearch, FindsInteriorMaximum) {
  Fidelity fid;
  fid.pattern_steps = 60;
  auto r = pattern_search([](const BidVector& b) { return -(b[0] - 0.37) * (b[0] - 0.37); }, {0.9}, {0.0}, {1.0}, fid);
  EXPECT_NEAR(r.bid[0], 0.37, 1e-3);
}

TEST(PatternSearch, NeverWorseThanStart) {
  Fidelity fid;
  fid.pattern_steps = 3;
  auto f = [](const BidVector& b) { return std::sin(40 * b[0]) + b[1]; };
  auto r = pattern_search(f, {0.2, 0.5}, {0.0, 0.0}, {1.0, 1.0}, fid);
  EXPECT_GE(r.value, f({0.2, 0.5}));
}

TEST(ImmediateBestResponse, LastRoundFirstPriceTwoBidders) {
  // Just above 0.39 or 0.40 both give 0.164 against a truthful pc opponent.
  Fixture f(2, 1, PaymentRule::First, 100);
  Evaluator ev(f.g, f.sigma, full());
  auto ctx = ev.context(0, 1, 1);
  Fidelity fid;
  fid.pattern_steps = 80;
  const int tile = 80;
  const IbrResult r = immediate_best_response(ev, *ctx, 0, tile, {0.8}, {0.8}, fid, {{0.4}, {0.41}});
  EXPECT_NEAR(r.utility, 0.164, 1e-3);
  EXPECT_GE(r.loss, 0.0);
  EXPECT_NEAR(r.incumbent_utility, 0.0, 1e-12);
}
