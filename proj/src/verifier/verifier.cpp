#include "seqauction/verifier/verifier.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqauction/belief/sampling.hpp"
#include "seqauction/solver/pattern_search.hpp"
#include "seqauction/solver/search.hpp"

namespace seqauction {

IbrResult verify_ibr(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int tile, const TypePoint& vertex,
                     const BidVector& incumbent, const VerifierConfig& cfg) {
  const auto [lo, hi] = bid_bounds(ev.graph().env(), ev.graph().at(cls).history);
  const int q = static_cast<int>(lo.size());
  auto f = [&](const BidVector& b) { return ev.utility(ctx, tile, b).value(vertex); };

  std::vector<std::vector<double>> cand(q);
  auto opp = ev.opponent_bids(ctx);
  for (int j = 0; j < q; ++j) {
    auto& c = cand[j];
    c = {lo[j], hi[j], incumbent[j]};
    for (int s = 1; s < cfg.scan; ++s) c.push_back(lo[j] + (hi[j] - lo[j]) * s / cfg.scan);
    if (cfg.breakpoints && j < static_cast<int>(opp.size()))
      for (double b : opp[j])
        for (double x : {b, std::nextafter(b, -std::numeric_limits<double>::infinity()),
                         std::nextafter(b, std::numeric_limits<double>::infinity())})
          c.push_back(x);
    for (double& x : c) x = std::clamp(x, lo[j], hi[j]);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  // Coordinate scan over the candidates, twice when bids are vectors.
  BidVector best = incumbent;
  for (int j = 0; j < q; ++j) best[j] = std::clamp(best[j], lo[j], hi[j]);
  double best_v = f(best);
  for (int pass = 0; pass < (q > 1 ? 2 : 1); ++pass)
    for (int j = 0; j < q; ++j)
      for (double x : cand[j]) {
        BidVector b = best;
        b[j] = x;
        const double v = f(b);
        if (v > best_v) {
          best_v = v;
          best = b;
        }
      }
  std::vector<BidVector> starts{best};
  for (int r = 0; r < cfg.restarts; ++r) {
    BidVector s(q);
    for (int j = 0; j < q; ++j) s[j] = lo[j] + (hi[j] - lo[j]) * (r + 0.5) / cfg.restarts;
    starts.push_back(s);
  }
  return immediate_best_response(ev, ctx, cls, tile, vertex, incumbent, cfg.fidelity, starts);
}

VertexLoss vertex_loss(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int bidder, int tile,
                       int vertex, const VerifierConfig& cfg) {
  const ClassGraph& g = ev.graph();
  const HistoryClass& c = g.at(cls);
  VertexLoss out;
  out.cls = c.id;
  out.bidder = bidder;
  out.tile = tile;
  out.vertex = vertex;
  if (c.terminal || !c.beliefs.active[bidder]) return out;
  const auto corners = vertices(g.space().bidder(bidder).tiling().tile(tile));
  if (vertex < 0 || vertex >= static_cast<int>(corners.size())) throw ContractViolation("vertex index out of range");
  const BidVector incumbent = ev.sigma()[bidder].table(c.id).at(tile);
  IbrResult r = verify_ibr(ev, ctx, cls, tile, corners[vertex], incumbent, cfg);
  out.loss = r.loss;
  out.se = r.se;
  out.ibr_utility = r.utility;
  out.sigma_utility = r.incumbent_utility;
  return out;
}

void fill_cache(const Evaluator& ev, SubgameCache& cache, std::uint64_t seed) {
  const ClassGraph& g = ev.graph();
  for (int t = g.rounds() - 1; t >= 0; --t)
    for (int ci : g.round(t))
      for (int i = 0; i < g.env().num_bidders(); ++i)
        refresh_cache(ev, cache, ci, i, derive_seed(seed, {g.at(ci).id, static_cast<std::uint64_t>(i), 1}));
}

VertexLossTable vertex_losses(const ClassGraph& g, const PCStrategyProfile& sigma, const VerifierConfig& cfg) {
  SubgameCache cache;
  cache.reset(g.size(), g.env().num_bidders());
  Evaluator ev(g, sigma, eval_settings(cfg.fidelity, cfg.continuation), &cache);
  if (cfg.continuation == ContinuationMode::Cached) fill_cache(ev, cache, cfg.seed);
  VertexLossTable table;
  table.integration = to_string(cfg.fidelity.integration);
  table.samples = cfg.fidelity.integration == Integration::MonteCarlo ? cfg.fidelity.samples : 0;
  table.pattern_steps = cfg.fidelity.pattern_steps;
  for (int ci = 0; ci < g.size(); ++ci) {
    const HistoryClass& c = g.at(ci);
    if (c.terminal) continue;
    for (int i = 0; i < g.env().num_bidders(); ++i) {
      if (!c.beliefs.active[i]) continue;
      auto ctx = ev.context(ci, i, derive_seed(cfg.seed, {c.id, static_cast<std::uint64_t>(i), 2}));
      const Tiling& tiling = g.space().bidder(i).tiling();
      const int nv = 1 << tiling.dim();
      std::vector<VertexLoss> rows(static_cast<std::size_t>(tiling.size()) * nv);
      tbb::parallel_for(0, tiling.size(), [&](int k) {
        for (int v = 0; v < nv; ++v) rows[static_cast<std::size_t>(k) * nv + v] = vertex_loss(ev, *ctx, ci, i, k, v, cfg);
      });
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  }
  return table;
}

EpsilonReport epsilon_bound(const ClassGraph& g, const VertexLossTable& table, double margin_se) {
  const int n = g.env().num_bidders();
  const int m = g.size();
  std::vector<std::vector<double>> L(n, std::vector<double>(m, 0.0)), Lm = L;
  std::vector<std::vector<char>> seen(n, std::vector<char>(m, 0));
  for (const VertexLoss& r : table.rows) {
    auto ci = g.find(r.cls);
    if (!ci || r.bidder < 0 || r.bidder >= n) throw IncompleteVerification("loss row for an unknown class or bidder");
    const double l = std::max(0.0, r.loss);
    L[r.bidder][*ci] = std::max(L[r.bidder][*ci], l);
    Lm[r.bidder][*ci] = std::max(Lm[r.bidder][*ci], l + margin_se * r.se);
    seen[r.bidder][*ci] = 1;
  }
  for (int ci = 0; ci < m; ++ci) {
    const HistoryClass& c = g.at(ci);
    if (c.terminal) continue;
    for (int i = 0; i < n; ++i)
      if (c.beliefs.active[i] && !seen[i][ci])
        throw IncompleteVerification("no vertex losses for bidder " + std::to_string(i) + " at a history class");
  }
  EpsilonReport rep;
  rep.per_bidder.assign(n, 0.0);
  rep.per_bidder_with_margin.assign(n, 0.0);
  std::vector<std::vector<int>> next(n, std::vector<int>(m, kLeaf));
  for (int i = 0; i < n; ++i) {
    std::vector<double> E(m, 0.0), Em(m, 0.0);
    for (int t = g.rounds() - 1; t >= 0; --t)
      for (int ci : g.round(t)) {
        double best = 0.0, best_m = 0.0;
        for (int ch : g.at(ci).children()) {
          if (next[i][ci] == kLeaf || E[ch] > best) {
            best = E[ch];
            next[i][ci] = ch;
          }
          best_m = std::max(best_m, Em[ch]);
        }
        E[ci] = L[i][ci] + best;
        Em[ci] = Lm[i][ci] + best_m;
      }
    rep.per_bidder[i] = E[0];
    rep.per_bidder_with_margin[i] = Em[0];
  }
  rep.worst_bidder = static_cast<int>(std::max_element(rep.per_bidder.begin(), rep.per_bidder.end()) - rep.per_bidder.begin());
  rep.epsilon = rep.per_bidder[rep.worst_bidder];
  rep.epsilon_with_margin = *std::max_element(rep.per_bidder_with_margin.begin(), rep.per_bidder_with_margin.end());
  for (int ci = 0; ci != kLeaf; ci = next[rep.worst_bidder][ci]) rep.worst_path.push_back(g.at(ci).id);
  rep.table = table;
  return rep;
}

EpsilonReport epsilon_bound(const ClassGraph& g, const PCStrategyProfile& sigma, const VerifierConfig& cfg) {
  if (!g.env().independent_beliefs())
    throw VerificationRefused(
        "environment '" + g.env().name() +
        "' does not keep posteriors independent of the deviator's own type; the vertex bound does not apply");
  return epsilon_bound(g, vertex_losses(g, sigma, cfg), cfg.margin_se);
}

}  // namespace seqauction
