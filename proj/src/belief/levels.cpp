#include "seqauction/belief/levels.hpp"

#include <algorithm>
#include <map>

namespace seqauction {

int Levels::lb(double v) const {
  return static_cast<int>(std::lower_bound(score.begin(), score.end(), v) - score.begin());
}

int Levels::ub(double v) const {
  return static_cast<int>(std::upper_bound(score.begin(), score.end(), v) - score.begin());
}

double score_of(const SingleItemRule& rule, double bid) { return rule.reverse ? -bid : bid; }
double bid_of(const SingleItemRule& rule, double score) { return rule.reverse ? -score : score; }

namespace {

void finish(Levels& lv) {
  double total = 0.0;
  for (double m : lv.mass) total += m;
  lv.cum.assign(lv.mass.size() + 1, 0.0);
  for (std::size_t k = 0; k < lv.mass.size(); ++k) {
    lv.mass[k] /= total;
    lv.cum[k + 1] = lv.cum[k] + lv.mass[k];
  }
}

}  // namespace

Levels build_levels(int bidder, const BidTable& table, const TileSet& support, const BidderSpace& space,
                    const std::optional<SingleItemRule>& rule) {
  Levels lv;
  lv.bidder = bidder;
  // Keyed by (score, bid vector) so single-item levels come out score-sorted.
  std::map<std::pair<double, BidVector>, std::pair<double, std::vector<int>>> acc;
  support.for_each([&](int t) {
    const double m = space.tile_mass(t);
    if (m <= 0.0) return;
    BidVector b = table.at(t);
    double s = rule ? score_of(*rule, b[0]) : 0.0;
    auto& slot = acc[{s, std::move(b)}];
    slot.first += m;
    slot.second.push_back(t);
  });
  if (acc.empty()) throw ContractViolation("belief support carries no prior mass");
  for (auto& [key, val] : acc) {
    lv.score.push_back(key.first);
    lv.bid.push_back(key.second);
    lv.mass.push_back(val.first);
    lv.tiles.push_back(std::move(val.second));
  }
  finish(lv);
  return lv;
}

Levels fixed_levels(int bidder, const BidVector& bid, const std::optional<SingleItemRule>& rule) {
  Levels lv;
  lv.bidder = bidder;
  lv.bid = {bid};
  lv.score = {rule ? score_of(*rule, bid[0]) : 0.0};
  lv.mass = {1.0};
  lv.tiles = {{}};
  finish(lv);
  return lv;
}

}  // namespace seqauction
