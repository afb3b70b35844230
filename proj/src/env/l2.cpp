#include "seqauction/env/l2.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "seqauction/env/split_award.hpp"

namespace seqauction {

double l2_distance(const BidTable& table, int component, const BidderSpace& space, const TileSet& support,
                   const BidFunction& oracle, const L2Options& opt) {
  const Tiling& tiling = space.tiling();
  if (tiling.dim() != 1) throw DomainError("L2 distance needs one-dimensional types");
  if (support.empty()) throw DomainError("empty belief support");
  const Prior& prior = space.prior();
  const int last = tiling.size() - opt.exclude_top;
  double num = 0.0, den = 0.0;
  auto tile_term = [&](int k) {
    if (k >= last) return;
    const Hyperrectangle r = tiling.tile(k);
    const double b = table.get(k, component);
    auto f = [&](double x) {
      const double d = b - oracle(x);
      return d * d * prior.density({x});
    };
    num += boost::math::quadrature::gauss<double, 10>::integrate(f, r.lower[0], r.upper[0]);
    den += space.tile_mass(k);
  };
  if (opt.measure == L2Measure::Belief) {
    support.for_each(tile_term);
  } else {
    for (int k = 0; k < tiling.size(); ++k) tile_term(k);
  }
  if (den <= 0.0) throw DomainError("support carries no prior mass");
  return std::sqrt(num / den);
}

std::vector<ClassDistance> class_distances(const ClassGraph& g, const PCStrategyProfile& sigma, int interior_exclude) {
  const AuctionEnvironment& env = g.env();
  std::vector<ClassDistance> out;
  for (int ci = 0; ci < g.size(); ++ci) {
    const HistoryClass& c = g.at(ci);
    if (c.terminal) continue;
    double sb = 0.0, sp = 0.0, si = 0.0;
    int n = 0;
    bool complete = true;
    for (int i = 0; i < env.num_bidders() && complete; ++i) {
      if (!c.beliefs.active[i]) continue;
      const TypeSpace& ts = env.type_space(i);
      auto probe = env.oracle(i, c.history, ts.lower[0]);
      if (!probe) {
        complete = false;
        break;
      }
      const int comp = probe->component;
      BidFunction f = [&env, &c, i, &ts](double x) {
        return env.oracle(i, c.history, std::clamp(x, ts.lower[0], ts.upper[0]))->bid;
      };
      const BidderSpace& bs = g.space().bidder(i);
      const TileSet& sup = bs.set(c.beliefs.beliefs[i].support);
      const BidTable& tab = sigma[i].table(c.id);
      const double db = l2_distance(tab, comp, bs, sup, f, {L2Measure::Belief, 0});
      const double dp = l2_distance(tab, comp, bs, sup, f, {L2Measure::Prior, 0});
      // Supports lying entirely in the excluded top tiles keep the full distance.
      bool interior = false;
      sup.for_each([&](int k) { interior = interior || k < bs.tiles() - interior_exclude; });
      const double di = interior ? l2_distance(tab, comp, bs, sup, f, {L2Measure::Belief, interior_exclude}) : db;
      sb += db * db;
      sp += dp * dp;
      si += di * di;
      ++n;
    }
    if (!complete || n == 0) continue;
    out.push_back(ClassDistance{c.round + 1, c.id, c.reach, std::sqrt(sb / n), std::sqrt(sp / n), std::sqrt(si / n)});
  }
  return out;
}

std::vector<RoundDistance> round_distances(const std::vector<ClassDistance>& classes) {
  std::map<int, std::array<double, 4>> acc;
  std::map<int, int> count;
  for (const ClassDistance& c : classes) {
    if (c.reach <= 0.0) continue;
    auto& a = acc[c.round];
    a[0] += c.reach * c.belief * c.belief;
    a[1] += c.reach * c.prior * c.prior;
    a[2] += c.reach * c.interior * c.interior;
    a[3] += c.reach;
    ++count[c.round];
  }
  std::vector<RoundDistance> out;
  for (const auto& [r, a] : acc)
    out.push_back(RoundDistance{r, std::sqrt(a[0] / a[3]), std::sqrt(a[1] / a[3]), std::sqrt(a[2] / a[3]), count[r]});
  return out;
}

double split_sole_consistency(const ClassGraph& g, const PCStrategyProfile& sigma) {
  const HistoryClass& root = g.root();
  if (g.env().bid_dim(root.history) != 2) throw ContractViolation("not a split-award environment");
  double min_split = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sigma.size(); ++i) {
    const BidTable& t = sigma[i].table(root.id);
    for (int k = 0; k < t.tiles(); ++k) min_split = std::min(min_split, t.get(k, 0));
  }
  int ok = 0, total = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    const BidTable& t = sigma[i].table(root.id);
    for (int k = 0; k < t.tiles(); ++k, ++total)
      if (2.0 * min_split <= t.get(k, 1)) ++ok;
  }
  return total ? static_cast<double>(ok) / total : 1.0;
}

}  // namespace seqauction
