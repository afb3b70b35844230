#include "seqauction/belief/tileset.hpp"

#include <algorithm>
#include <climits>

namespace seqauction {

TileSet TileSet::range(int begin, int end) {
  TileSet s;
  if (end > begin) s.runs_.emplace_back(begin, end);
  return s;
}

TileSet TileSet::from_sorted(const std::vector<int>& tiles) {
  TileSet s;
  for (int t : tiles) {
    if (!s.runs_.empty() && s.runs_.back().second == t)
      ++s.runs_.back().second;
    else
      s.runs_.emplace_back(t, t + 1);
  }
  return s;
}

bool TileSet::contains(int tile) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), std::make_pair(tile, INT_MAX));
  if (it == runs_.begin()) return false;
  --it;
  return tile >= it->first && tile < it->second;
}

int TileSet::count() const {
  int n = 0;
  for (auto [b, e] : runs_) n += e - b;
  return n;
}

std::vector<int> TileSet::tiles() const {
  std::vector<int> out;
  for_each([&](int t) { out.push_back(t); });
  return out;
}

std::size_t TileSet::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto [b, e] : runs_) {
    h = (h ^ static_cast<std::size_t>(b)) * 1099511628211ull;
    h = (h ^ static_cast<std::size_t>(e)) * 1099511628211ull;
  }
  return h;
}

BidderSpace::BidderSpace(std::shared_ptr<const Tiling> tiling, const Prior& prior)
    : tiling_(std::move(tiling)), prior_(&prior) {
  tile_mass_.resize(tiling_->size());
  for (int t = 0; t < tiling_->size(); ++t) {
    auto r = tiling_->tile(t);
    tile_mass_[t] = prior.box_mass(r.lower, r.upper);
  }
  full_ = intern(TileSet::all(tiling_->size()));
}

SetId BidderSpace::intern(const TileSet& s) {
  const std::size_t h = s.hash();
  std::lock_guard lock(mu_);
  auto [lo, hi] = index_.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (sets_[it->second] == s) return it->second;
  double m = 0.0;
  s.for_each([&](int t) { m += tile_mass_[t]; });
  SetId id = static_cast<SetId>(sets_.size());
  sets_.push_back(s);
  masses_.push_back(m);
  index_.emplace(h, id);
  return id;
}

const TileSet& BidderSpace::set(SetId id) const {
  std::lock_guard lock(mu_);
  return sets_[id];
}

double BidderSpace::mass(SetId id) const {
  std::lock_guard lock(mu_);
  return masses_[id];
}

}  // namespace seqauction
