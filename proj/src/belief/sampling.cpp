#include "seqauction/belief/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace seqauction {

namespace {

struct TileCdf {
  std::vector<int> tiles;
  std::vector<double> cum;

  TileCdf(const TileSet& support, const BidderSpace& space) {
    double acc = 0.0;
    support.for_each([&](int t) {
      if (space.tile_mass(t) <= 0.0) return;
      acc += space.tile_mass(t);
      tiles.push_back(t);
      cum.push_back(acc);
    });
    if (tiles.empty()) throw ContractViolation("cannot sample from an empty belief");
    for (double& c : cum) c /= acc;
  }

  int draw(double u) const {
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return tiles[std::min<std::size_t>(it - cum.begin(), tiles.size() - 1)];
  }
};

}  // namespace

std::vector<TypeProfile> sample_types(const BeliefProfile& mu, const BeliefSpace& space, int count,
                                      std::uint64_t seed) {
  if (count <= 0) throw ContractViolation("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = static_cast<int>(mu.active.size());
  std::vector<std::optional<TileCdf>> cdf(n);
  for (int i = 0; i < n; ++i)
    if (mu.active[i]) cdf[i].emplace(space.bidder(i).set(mu.beliefs[i].support), space.bidder(i));
  std::vector<TypeProfile> out(count);
  for (auto& s : out) {
    s.theta.resize(n);
    s.tile.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (!cdf[i]) continue;
      const int t = cdf[i]->draw(u(rng));
      auto r = space.bidder(i).tiling().tile(t);
      s.tile[i] = t;
      s.theta[i] = space.bidder(i).prior().sample_box(r.lower, r.upper, rng);
    }
  }
  return out;
}

std::vector<int> stratified_tiles(const TileSet& support, const BidderSpace& space, int count,
                                  std::mt19937_64& rng) {
  TileCdf cdf(support, space);
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> out(count);
  for (int s = 0; s < count; ++s) out[s] = cdf.draw((perm[s] + u(rng)) / count);
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)};
  for (auto p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t raw[2];
  seq.generate(raw, raw + 2);
  return (static_cast<std::uint64_t>(raw[0]) << 32) | raw[1];
}

}  // namespace seqauction
