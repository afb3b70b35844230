#include "seqauction/solver/pattern_search.hpp"

#include <algorithm>

namespace seqauction {

PatternResult pattern_search(const std::function<double(const BidVector&)>& f, const BidVector& start,
                             const BidVector& lower, const BidVector& upper, const Fidelity& fid) {
  const int q = static_cast<int>(start.size());
  PatternResult r;
  r.bid = start;
  for (int j = 0; j < q; ++j) r.bid[j] = std::clamp(r.bid[j], lower[j], upper[j]);
  r.value = f(r.bid);
  r.evaluations = 1;
  BidVector step(q);
  for (int j = 0; j < q; ++j) step[j] = fid.init_step * (upper[j] - lower[j]);

  std::vector<BidVector> dirs;
  for (int j = 0; j < q; ++j)
    for (double sgn : {1.0, -1.0}) {
      BidVector d(q, 0.0);
      d[j] = sgn;
      dirs.push_back(d);
    }
  if (q == 2)
    for (double a : {1.0, -1.0})
      for (double b : {1.0, -1.0}) dirs.push_back({a, b});

  const int m = fid.points_per_direction;
  for (int it = 0; it < fid.pattern_steps; ++it) {
    BidVector best = r.bid;
    double best_v = r.value;
    for (const BidVector& d : dirs)
      for (int k = 1; k <= m; ++k) {
        BidVector p = r.bid;
        bool moved = false;
        for (int j = 0; j < q; ++j) {
          p[j] = std::clamp(r.bid[j] + d[j] * step[j] * k / m, lower[j], upper[j]);
          moved = moved || p[j] != r.bid[j];
        }
        if (!moved) continue;
        const double v = f(p);
        ++r.evaluations;
        if (v > best_v) {
          best_v = v;
          best = p;
        }
      }
    if (best_v > r.value) {
      r.bid = best;
      r.value = best_v;
    } else {
      for (double& s : step) s *= fid.shrink;
    }
  }
  return r;
}

std::pair<BidVector, BidVector> bid_bounds(const AuctionEnvironment& env, const AllocationHistory& h) {
  const int q = env.bid_dim(h);
  BidVector lo(q, 0.0), hi(q);
  for (int j = 0; j < q; ++j) hi[j] = env.bid_upper(h, j);
  return {lo, hi};
}

IbrResult immediate_best_response(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int tile,
                                  const TypePoint& vertex, const BidVector& incumbent, const Fidelity& fid,
                                  const std::vector<BidVector>& extra_starts) {
  const auto [lo, hi] = bid_bounds(ev.graph().env(), ev.graph().at(cls).history);
  auto f = [&](const BidVector& b) { return ev.utility(ctx, tile, b).value(vertex); };
  PatternResult best = pattern_search(f, incumbent, lo, hi, fid);
  for (const BidVector& s : extra_starts) {
    PatternResult r = pattern_search(f, s, lo, hi, fid);
    if (r.value > best.value) best = std::move(r);
  }
  IbrResult out;
  out.bid = best.bid;
  const bool sampled = ev.settings().integration == Integration::MonteCarlo;
  Estimate eb = ev.utility(ctx, tile, best.bid, sampled);
  Estimate ei = ev.utility(ctx, tile, incumbent, sampled);
  out.utility = eb.value(vertex);
  out.incumbent_utility = ei.value(vertex);
  out.loss = std::max(0.0, out.utility - out.incumbent_utility);
  out.se = paired_se(eb, ei, vertex);
  return out;
}

}  // namespace seqauction
