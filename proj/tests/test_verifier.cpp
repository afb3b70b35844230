#include <gtest/gtest.h>

#include <algorithm>

#include "seqauction/env/registry.hpp"
#include "seqauction/solver/search.hpp"
#include "seqauction/verifier/brute_force.hpp"
#include "seqauction/verifier/verifier.hpp"
#include "support/tiny.hpp"

using namespace seqauction;

namespace {

struct Game {
  EnvironmentPtr env;
  std::vector<std::shared_ptr<const Tiling>> tilings;
  std::unique_ptr<BeliefSpace> space;
  PCStrategyProfile sigma;
  ClassGraph g;

  Game(int n, int k, const char* payment, int grid) {
    EnvironmentParams p;
    p.bidders = n;
    p.goods = k;
    p.payment = payment;
    env = make_environment(p);
    tilings = make_tilings(*env, {grid});
    space = std::make_unique<BeliefSpace>(*env, tilings);
    sigma = init_truthful(*env, tilings, {});
    g = enumerate_history_classes(*env, *space, sigma);
  }
};

VerifierConfig quick() {
  VerifierConfig v;
  v.fidelity.pattern_steps = 20;
  v.restarts = 2;
  v.scan = 16;
  return v;
}

}  // namespace

TEST(Verifier, SingleRoundGivesSingleNodePath) {
  Game game(2, 1, "first", 6);
  const EpsilonReport r = epsilon_bound(game.g, game.sigma, quick());
  ASSERT_EQ(r.worst_path.size(), 1u);
  EXPECT_EQ(r.worst_path[0], game.g.root().id);
  double top = 0.0;
  for (const VertexLoss& v : r.table.rows) top = std::max(top, v.loss);
  EXPECT_DOUBLE_EQ(r.epsilon, top);
  // Truthful bidding in first price leaves money on the table.
  EXPECT_GT(r.epsilon, 0.05);
}

TEST(Verifier, TruthfulSecondPriceSingleGoodIsExact) {
  // Truthful pc bids are only optimal at the lower vertex; the upper vertex of
  // a tile gains at most one tile width times the win probability.
  Game game(2, 1, "second", 8);
  const EpsilonReport r = epsilon_bound(game.g, game.sigma, quick());
  for (const VertexLoss& v : r.table.rows)
    if (v.vertex == 0) EXPECT_NEAR(v.loss, 0.0, 1e-12);
  EXPECT_LE(r.epsilon, 0.125 + 1e-12);
}

TEST(Verifier, LossesAreClampedAndTerminalClassesHaveNone) {
  Game game(3, 2, "first", 4);
  const EpsilonReport r = epsilon_bound(game.g, game.sigma, quick());
  for (const VertexLoss& v : r.table.rows) {
    EXPECT_GE(v.loss, 0.0);
    const auto ci = game.g.find(v.cls);
    ASSERT_TRUE(ci.has_value());
    EXPECT_FALSE(game.g.at(*ci).terminal);
  }
  EXPECT_EQ(r.worst_path.front(), game.g.root().id);
  EXPECT_EQ(r.per_bidder.size(), 3u);
  EXPECT_DOUBLE_EQ(r.epsilon, *std::max_element(r.per_bidder.begin(), r.per_bidder.end()));
}

TEST(Verifier, RefusesCorrelatedBeliefs) {
  Game game(3, 2, "second", 4);
  EXPECT_THROW(epsilon_bound(game.g, game.sigma, quick()), VerificationRefused);
}

TEST(Verifier, MissingRowsAreReported) {
  Game game(3, 2, "first", 4);
  VertexLossTable t = vertex_losses(game.g, game.sigma, quick());
  t.rows.erase(std::remove_if(t.rows.begin(), t.rows.end(),
                              [&](const VertexLoss& v) { return v.cls == game.g.root().id && v.bidder == 1; }),
               t.rows.end());
  EXPECT_THROW(epsilon_bound(game.g, t), IncompleteVerification);
}

TEST(Verifier, BoundsBruteForceOnTinyGames) {
  for (std::uint64_t seed : {3u, 11u, 29u}) {
    auto inst = testkit::make_tiny(seed);
    const EpsilonReport r = epsilon_bound(inst->graph, inst->sigma, quick());
    const double bf = brute_force_exploitability(inst->graph, inst->sigma, inst->deviation_grid);
    EXPECT_GE(r.epsilon + 1e-9, bf) << inst->describe();
  }
}

TEST(BruteForce, RefusesLargeInstances) {
  Game game(3, 2, "first", 10);
  std::vector<std::vector<BidVector>> grid(2, {{0.0}, {0.5}});
  EXPECT_THROW(brute_force_exploitability(game.g, game.sigma, grid), VerificationRefused);
}
