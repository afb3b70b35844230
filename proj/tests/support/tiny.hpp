#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seqauction/belief/history.hpp"
#include "seqauction/env/registry.hpp"

namespace seqauction::testkit {

// A small game with a random pc profile, small enough for brute force.
struct TinyInstance {
  EnvironmentParams params;
  int grid = 0;
  EnvironmentPtr env;
  std::vector<std::shared_ptr<const Tiling>> tilings;
  std::unique_ptr<BeliefSpace> space;
  PCStrategyProfile sigma;
  ClassGraph graph;
  std::vector<std::vector<BidVector>> deviation_grid;  // per round

  std::string describe() const;
};

// Deterministic in `seed`: 2-3 bidders, 1-2 rounds, at most 6 tiles per
// bidder, environments with independent beliefs only.
std::unique_ptr<TinyInstance> make_tiny(std::uint64_t seed);

}  // namespace seqauction::testkit
