#include <gtest/gtest.h>

#include <sstream>

#include "seqauction/env/l2.hpp"
#include "seqauction/env/registry.hpp"
#include "seqauction/io/serialize.hpp"
#include "seqauction/solver/search.hpp"

using namespace seqauction;

namespace {

EnvironmentPtr sales(int n, int k, const char* payment) {
  EnvironmentParams p;
  p.bidders = n;
  p.goods = k;
  p.payment = payment;
  return make_environment(p);
}

std::string dump(const PCStrategyProfile& s) {
  std::ostringstream os;
  write_strategy(os, s, {"0000000000000000", 0});
  return os.str();
}

std::vector<RoundDistance> distances(const AuctionEnvironment& env, const SearchResult& r) {
  PCStrategyProfile s = r.sigma;
  BeliefSpace space(env, r.tilings);
  ClassGraph g = enumerate_history_classes(env, space, s);
  return round_distances(class_distances(g, s));
}

}  // namespace

TEST(Search, RepeatedRunsAgreeExactly) {
  auto env = sales(3, 2, "first");
  SolverConfig cfg;
  cfg.grid = {12};
  cfg.inner_iterations = 4;
  cfg.iterations = 1;
  EXPECT_EQ(dump(run_search(*env, cfg).sigma), dump(run_search(*env, cfg).sigma));
}

TEST(Search, MonteCarloRunsRepeatWithSameSeed) {
  // One good would hit the closed forms, which do not sample.
  auto env = sales(3, 2, "first");
  SolverConfig cfg;
  cfg.grid = {6};
  cfg.inner_iterations = 3;
  cfg.iterations = 0;
  cfg.inner.integration = Integration::MonteCarlo;
  cfg.inner.samples = 500;
  const std::string a = dump(run_search(*env, cfg).sigma);
  EXPECT_EQ(a, dump(run_search(*env, cfg).sigma));
  cfg.seed = 2;
  EXPECT_NE(a, dump(run_search(*env, cfg).sigma));
}

TEST(Search, SingleGoodFirstPriceApproachesHalfValue) {
  auto env = sales(2, 1, "first");
  SolverConfig cfg;
  cfg.grid = {40};
  cfg.inner_iterations = 40;
  cfg.iterations = 2;
  const auto rd = distances(*env, run_search(*env, cfg));
  ASSERT_EQ(rd.size(), 1u);
  EXPECT_LT(rd[0].prior, 0.02);
}

TEST(Search, HookSeesEveryIteration) {
  auto env = sales(2, 1, "second");
  SolverConfig cfg;
  cfg.grid = {8};
  cfg.inner_iterations = 3;
  cfg.inner_threshold = 0.0;
  cfg.iterations = 2;
  std::vector<int> seen;
  const SearchResult r = run_search(*env, cfg, [&](int it, const PCStrategyProfile&) { seen.push_back(it); });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(r.inner_iterations, 3);
}

TEST(Search, SymmetricBiddersShareTables) {
  auto env = sales(3, 1, "first");
  SolverConfig cfg;
  cfg.grid = {10};
  cfg.inner_iterations = 5;
  cfg.iterations = 0;
  const SearchResult r = run_search(*env, cfg);
  BeliefSpace space(*env, r.tilings);
  const ClassId root = root_class(*env, space).id;
  const BidTable& t0 = r.sigma[0].table(root);
  for (int i = 1; i < 3; ++i)
    for (int k = 0; k < t0.tiles(); ++k) EXPECT_EQ(r.sigma[i].table(root).at(k), t0.at(k));
}
