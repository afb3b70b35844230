#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "seqauction/belief/history.hpp"

namespace seqauction {

// One joint draw: per bidder the type and its tile (-1 / empty when inactive).
struct TypeProfile {
  std::vector<TypePoint> theta;
  std::vector<int> tile;
};

// i.i.d. draws from the product posterior.
std::vector<TypeProfile> sample_types(const BeliefProfile& mu, const BeliefSpace& space, int count,
                                      std::uint64_t seed);

// Tile draws for one bidder stratified over [0,1): sample s uses the stratum
// perm[s] of `count`, so each marginal is a Latin-hypercube sample.
std::vector<int> stratified_tiles(const TileSet& support, const BidderSpace& space, int count,
                                  std::mt19937_64& rng);

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace seqauction
