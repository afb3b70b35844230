#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqauction/core/prior.hpp"
#include "seqauction/tiling/tiling.hpp"

namespace seqauction {

// Set of tile indices stored as sorted half-open runs; a single run is the
// interval case produced by monotone strategies.
class TileSet {
 public:
  TileSet() = default;
  static TileSet all(int tiles) { return range(0, tiles); }
  static TileSet range(int begin, int end);
  static TileSet from_sorted(const std::vector<int>& tiles);

  const std::vector<std::pair<int, int>>& runs() const { return runs_; }
  bool empty() const { return runs_.empty(); }
  bool contains(int tile) const;
  int count() const;
  std::vector<int> tiles() const;
  bool operator==(const TileSet&) const = default;
  std::size_t hash() const;

  template <class F>
  void for_each(F&& f) const {
    for (auto [b, e] : runs_)
      for (int t = b; t < e; ++t) f(t);
  }

 private:
  std::vector<std::pair<int, int>> runs_;
};

using SetId = int;
inline constexpr SetId kNoSet = -1;

// Per-bidder tiling, prior tile masses and an interning pool of tile sets.
class BidderSpace {
 public:
  BidderSpace(std::shared_ptr<const Tiling> tiling, const Prior& prior);

  const Tiling& tiling() const { return *tiling_; }
  std::shared_ptr<const Tiling> tiling_ptr() const { return tiling_; }
  const Prior& prior() const { return *prior_; }
  int tiles() const { return tiling_->size(); }
  double tile_mass(int t) const { return tile_mass_[t]; }

  SetId intern(const TileSet& s);
  const TileSet& set(SetId id) const;
  double mass(SetId id) const;
  SetId full() const { return full_; }

 private:
  std::shared_ptr<const Tiling> tiling_;
  const Prior* prior_;
  std::vector<double> tile_mass_;
  mutable std::mutex mu_;
  std::deque<TileSet> sets_;
  std::deque<double> masses_;
  std::unordered_multimap<std::size_t, SetId> index_;
  SetId full_ = kNoSet;
};

}  // namespace seqauction
