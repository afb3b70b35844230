#include "seqauction/solver/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "seqauction/belief/sampling.hpp"

namespace seqauction {

// ---------------------------------------------------------------- cache

void SubgameCache::reset(int classes, int bidders) {
  bidders_ = bidders;
  entries_.assign(static_cast<std::size_t>(classes) * bidders, Entry{});
}

bool SubgameCache::has(int cls, int bidder) const {
  std::size_t k = static_cast<std::size_t>(cls) * bidders_ + bidder;
  return k < entries_.size() && entries_[k].filled;
}

const std::vector<Affine>& SubgameCache::values(int cls, int bidder) const {
  if (!has(cls, bidder))
    throw SweepOrderViolation("continuation requested for class " + std::to_string(cls) + " before it was processed");
  return entries_[static_cast<std::size_t>(cls) * bidders_ + bidder].values;
}

double SubgameCache::se(int cls, int bidder, int tile) const {
  values(cls, bidder);
  const auto& e = entries_[static_cast<std::size_t>(cls) * bidders_ + bidder];
  return e.se.empty() ? 0.0 : e.se[tile];
}

int SubgameCache::samples(int cls, int bidder) const {
  values(cls, bidder);
  return entries_[static_cast<std::size_t>(cls) * bidders_ + bidder].samples;
}

void SubgameCache::put(int cls, int bidder, std::vector<Affine> values, std::vector<double> se, int samples) {
  std::size_t k = static_cast<std::size_t>(cls) * bidders_ + bidder;
  if (k >= entries_.size()) throw ContractViolation("cache slot out of range");
  entries_[k] = Entry{true, std::move(values), std::move(se), samples};
}

// ---------------------------------------------------------------- estimates

double Estimate::se(const TypePoint& theta) const {
  const std::size_t n = draws.size();
  if (n < 2) return 0.0;
  const double m = mean.at(theta);
  double ss = 0.0;
  for (const Affine& d : draws) ss += (d.at(theta) - m) * (d.at(theta) - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double paired_se(const Estimate& a, const Estimate& b, const TypePoint& theta) {
  const std::size_t n = a.draws.size();
  if (n < 2 || b.draws.size() != n) return 0.0;
  const double m = a.mean.at(theta) - b.mean.at(theta);
  double ss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double d = a.draws[s].at(theta) - b.draws[s].at(theta) - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

// ---------------------------------------------------------------- internals

namespace {

struct Slot;

// Continuation after one outcome event: nothing (leaf, exit, terminal), a
// cached per-tile value, or a signed sum of conditional continuations.
struct Cont {
  int child = kLeaf;
  const std::vector<Affine>* cached = nullptr;
  std::vector<std::pair<double, Slot*>> full;
};

// Product event over the opponents: level ranges indexed like Context::opp.
struct OppTerm {
  double prob = 0.0;
  std::vector<Factor> f;
};

struct MemoKey {
  int cls = 0;
  int bidder = 0;
  std::vector<SetId> sets;
  bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.cls) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::size_t>(k.bidder);
    for (SetId s : k.sets) h = (h ^ static_cast<std::size_t>(s + 1)) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace

struct Evaluator::Context {
  enum class Kind { Empty, Single, Generic, Sampled };
  Kind kind = Kind::Empty;
  int cls = 0;
  int bidder = 0;
  std::vector<SetId> supports;
  std::optional<SingleItemRule> rule;
  std::vector<Levels> opp;
  int self_pos = 0;  // opponents with a lower index
  Affine win_value;

  struct Pre {
    double v = 0.0;  // price score
    double prob = 0.0;
    double price = 0.0;  // price in bid units
    Cont cont;
  };
  std::vector<Pre> lose;  // evaluated bidder strictly below the price, by v
  std::vector<Pre> win;   // second price: evaluated bidder wins at price v, by v

  struct Profile {
    double prob = 0.0;
    std::vector<int> level;
    std::vector<SetId> sets;  // single-level supports per bidder
  };
  std::vector<Profile> profiles;

  std::vector<std::vector<int>> samples;  // [draw][opponent] tile
};

namespace {

struct Slot {
  MemoKey key;
  std::once_flag built;
  std::shared_ptr<const Evaluator::Context> ctx;
  std::mutex mu;
  std::vector<std::optional<Affine>> value;
};

}  // namespace

struct Evaluator::Impl {
  const ClassGraph& g;
  const PCStrategyProfile& sigma;
  EvalSettings s;
  const SubgameCache* cache;
  mutable std::mutex mu;
  std::unordered_map<MemoKey, std::unique_ptr<Slot>, MemoHash> memo;

  Impl(const ClassGraph& graph, const PCStrategyProfile& sg, EvalSettings st, const SubgameCache* c)
      : g(graph), sigma(sg), s(st), cache(c) {}

  const AuctionEnvironment& env() const { return g.env(); }

  bool continues(int child, int bidder) const {
    if (child == kLeaf) return false;
    const HistoryClass& c = g.at(child);
    return !c.terminal && c.beliefs.active[bidder];
  }

  Slot* slot(int child, int bidder, std::vector<SetId> sets) {
    MemoKey key{child, bidder, std::move(sets)};
    std::lock_guard lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second.get();
    auto sl = std::make_unique<Slot>();
    sl->key = key;
    sl->value.resize(g.space().bidder(bidder).tiles());
    Slot* raw = sl.get();
    memo.emplace(std::move(key), std::move(sl));
    return raw;
  }

  Affine slot_value(Evaluator& self, Slot& sl, int tile);

  SetId level_set(const Context& ctx, int p, Factor f) {
    const Levels& L = ctx.opp[p];
    if (f.lo == 0 && f.hi == L.size()) return ctx.supports[L.bidder];
    std::vector<int> tiles;
    for (int l = f.lo; l < f.hi; ++l) tiles.insert(tiles.end(), L.tiles[l].begin(), L.tiles[l].end());
    std::sort(tiles.begin(), tiles.end());
    return g.space().bidder(L.bidder).intern(TileSet::from_sorted(tiles));
  }

  Cont resolve(const Context& ctx, const RoundOutcome& o, const std::vector<OppTerm>& terms) {
    Cont k;
    k.child = g.successor(ctx.cls, o);
    if (!continues(k.child, ctx.bidder)) {
      k.child = kLeaf;
      return k;
    }
    if (s.continuation == ContinuationMode::Cached) {
      if (!cache) throw SweepOrderViolation("cached continuation requested without a cache");
      k.cached = &cache->values(k.child, ctx.bidder);
      return k;
    }
    if (s.integration != Integration::Exact) return k;  // rollouts
    const auto& active = g.at(k.child).beliefs.active;
    for (const OppTerm& t : terms) {
      std::vector<SetId> sets(env().num_bidders(), kNoSet);
      for (std::size_t p = 0; p < ctx.opp.size(); ++p) {
        const int b = ctx.opp[p].bidder;
        if (active[b]) sets[b] = level_set(ctx, static_cast<int>(p), t.f[p]);
      }
      k.full.emplace_back(t.prob, slot(k.child, ctx.bidder, std::move(sets)));
    }
    return k;
  }

  std::shared_ptr<Context> build(int cls, int bidder, const std::vector<SetId>& supports, std::uint64_t seed);
  void build_single(Context& ctx);
  void build_generic(Context& ctx);
  void build_sampled(Context& ctx, std::uint64_t seed);

  Affine cont_value(Evaluator& self, const Cont& k, double prob, int tile) {
    if (k.child == kLeaf) return Affine{};
    if (k.cached) return (*k.cached)[tile] * prob;
    Affine out;
    for (const auto& [p, sl] : k.full) out += slot_value(self, *sl, tile) * p;
    return out;
  }

  Affine rollout(int child, int bidder, int tile, const Context& ctx, const std::vector<int>& draw) const;

  Estimate utility(Evaluator& self, const Context& ctx, int tile, const BidVector& bid, bool keep);
  Affine single(Evaluator& self, const Context& ctx, int tile, const BidVector& bid);
  Affine generic(Evaluator& self, const Context& ctx, int tile, const BidVector& bid);
};

namespace {

double range_prod(const std::vector<Levels>& opp, const std::vector<Factor>& f) {
  double p = 1.0;
  for (std::size_t k = 0; k < opp.size() && p != 0.0; ++k) p *= opp[k].range(f[k].lo, f[k].hi);
  return p;
}

}  // namespace

std::shared_ptr<Evaluator::Context> Evaluator::Impl::build(int cls, int bidder, const std::vector<SetId>& supports,
                                                           std::uint64_t seed) {
  auto ctx = std::make_shared<Context>();
  ctx->cls = cls;
  ctx->bidder = bidder;
  ctx->supports = supports;
  const HistoryClass& c = g.at(cls);
  if (c.terminal || !c.beliefs.active[bidder]) return ctx;
  ctx->rule = s.closed_form ? env().single_item(c.history) : std::nullopt;
  for (int k = 0; k < env().num_bidders(); ++k) {
    if (k == bidder || !c.beliefs.active[k]) continue;
    if (supports[k] == kNoSet) throw ContractViolation("active opponent without a belief support");
    const BidderSpace& bs = g.space().bidder(k);
    ctx->opp.push_back(build_levels(k, sigma[k].table(c.id), bs.set(supports[k]), bs, env().single_item(c.history)));
    if (k < bidder) ++ctx->self_pos;
  }
  if (s.integration == Integration::MonteCarlo) {
    build_sampled(*ctx, seed);
  } else if (ctx->rule) {
    build_single(*ctx);
  } else {
    build_generic(*ctx);
  }
  return ctx;
}

void Evaluator::Impl::build_single(Context& ctx) {
  ctx.kind = Context::Kind::Single;
  const SingleItemRule rule = *ctx.rule;
  const AllocationHistory& h = g.at(ctx.cls).history;
  ctx.win_value = env().valuation(ctx.bidder, Allocation{rule.kind, {ctx.bidder}}, h);
  const double low = -std::numeric_limits<double>::infinity();
  // Evaluated bidder placed below every level: the branches where an opponent
  // wins at a price it does not set.
  Levels floor = fixed_levels(ctx.bidder, {bid_of(rule, low)}, rule);
  std::vector<const Levels*> parts;
  for (int p = 0; p < static_cast<int>(ctx.opp.size()); ++p) {
    if (p == ctx.self_pos) parts.push_back(&floor);
    parts.push_back(&ctx.opp[p]);
  }
  if (ctx.self_pos == static_cast<int>(ctx.opp.size())) parts.push_back(&floor);
  auto strip = [&](const std::vector<Term>& terms) {
    std::vector<OppTerm> out;
    for (const Term& t : terms) {
      OppTerm o{t.prob, t.f};
      o.f.erase(o.f.begin() + ctx.self_pos);
      out.push_back(std::move(o));
    }
    return out;
  };
  for (const Branch& br : single_item_branches(env(), rule, parts)) {
    const int w = br.outcome.allocation.winners[0];
    const double price = env().price(br.outcome);
    const double v = score_of(rule, price);
    if (w == ctx.bidder || v == low) continue;
    Context::Pre pre{v, br.prob, price, {}};
    pre.cont = resolve(ctx, br.outcome, strip(br.terms));
    ctx.lose.push_back(std::move(pre));
  }
  std::stable_sort(ctx.lose.begin(), ctx.lose.end(), [](const auto& a, const auto& b) { return a.v < b.v; });
  if (!rule.second_price) return;
  std::vector<double> cands;
  for (const Levels& L : ctx.opp) cands.insert(cands.end(), L.score.begin(), L.score.end());
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  const int n = static_cast<int>(ctx.opp.size());
  for (double m : cands) {
    OppTerm plus, minus;
    plus.f.resize(n);
    minus.f.resize(n);
    for (int p = 0; p < n; ++p) {
      plus.f[p] = Factor{0, ctx.opp[p].ub(m)};
      minus.f[p] = Factor{0, ctx.opp[p].lb(m)};
    }
    plus.prob = range_prod(ctx.opp, plus.f);
    minus.prob = -range_prod(ctx.opp, minus.f);
    const double prob = plus.prob + minus.prob;
    if (prob <= kProbTol) continue;
    std::vector<OppTerm> terms{plus};
    if (minus.prob != 0.0) terms.push_back(minus);
    const double price = bid_of(rule, m);
    Context::Pre pre{m, prob, price, {}};
    pre.cont = resolve(ctx, env().single_item_outcome(rule, ctx.bidder, price), terms);
    ctx.win.push_back(std::move(pre));
  }
}

void Evaluator::Impl::build_generic(Context& ctx) {
  ctx.kind = Context::Kind::Generic;
  const int n = static_cast<int>(ctx.opp.size());
  std::vector<int> idx(n, 0);
  while (true) {
    Context::Profile pr;
    pr.prob = 1.0;
    pr.level = idx;
    pr.sets.assign(env().num_bidders(), kNoSet);
    for (int p = 0; p < n; ++p) pr.prob *= ctx.opp[p].mass[idx[p]];
    if (pr.prob > 0.0) {
      if (s.continuation == ContinuationMode::Full)
        for (int p = 0; p < n; ++p)
          pr.sets[ctx.opp[p].bidder] = level_set(ctx, p, Factor{idx[p], idx[p] + 1});
      ctx.profiles.push_back(std::move(pr));
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == ctx.opp[k].size()) idx[k--] = 0;
    if (k < 0) break;
  }
}

void Evaluator::Impl::build_sampled(Context& ctx, std::uint64_t seed) {
  ctx.kind = Context::Kind::Sampled;
  if (s.samples <= 0) throw ContractViolation("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> per(ctx.opp.size());
  for (std::size_t p = 0; p < ctx.opp.size(); ++p) {
    const int b = ctx.opp[p].bidder;
    const BidderSpace& bs = g.space().bidder(b);
    per[p] = stratified_tiles(bs.set(ctx.supports[b]), bs, s.samples, rng);
  }
  ctx.samples.assign(s.samples, std::vector<int>(ctx.opp.size()));
  for (int d = 0; d < s.samples; ++d)
    for (std::size_t p = 0; p < ctx.opp.size(); ++p) ctx.samples[d][p] = per[p][d];
}

Affine Evaluator::Impl::slot_value(Evaluator& self, Slot& sl, int tile) {
  {
    std::lock_guard lock(sl.mu);
    if (sl.value[tile]) return *sl.value[tile];
  }
  std::call_once(sl.built, [&] { sl.ctx = build(sl.key.cls, sl.key.bidder, sl.key.sets, 0); });
  const HistoryClass& c = g.at(sl.key.cls);
  Affine v = utility(self, *sl.ctx, tile, sigma[sl.key.bidder].table(c.id).at(tile), false).mean;
  std::lock_guard lock(sl.mu);
  sl.value[tile] = v;
  return v;
}

Affine Evaluator::Impl::single(Evaluator& self, const Context& ctx, int tile, const BidVector& bid) {
  const SingleItemRule rule = *ctx.rule;
  const double b = bid[0];
  const double sc = score_of(rule, b);
  const int n = static_cast<int>(ctx.opp.size());
  const int i = ctx.bidder;
  const bool full = s.continuation == ContinuationMode::Full;
  auto pay = [&](double price) { return rule.reverse ? -price : price; };
  Affine u;
  auto add_win = [&](double prob, double price, const Cont& k) {
    u += ctx.win_value * prob;
    u.c -= prob * pay(price);
    u += cont_value(self, k, prob, tile);
  };
  // Opponent wins at a price strictly above the bid.
  for (auto it = std::upper_bound(ctx.lose.begin(), ctx.lose.end(), sc,
                                  [](double v, const Context::Pre& p) { return v < p.v; });
       it != ctx.lose.end(); ++it)
    u += cont_value(self, it->cont, it->prob, tile);

  std::vector<int> lb(n), ub(n);
  for (int p = 0; p < n; ++p) {
    lb[p] = ctx.opp[p].lb(sc);
    ub[p] = ctx.opp[p].ub(sc);
  }
  auto event = [&](std::vector<OppTerm>& terms, const RoundOutcome& o) {
    double prob = 0.0;
    for (auto& t : terms) prob += t.prob;
    if (prob <= kProbTol) return std::pair<double, Cont>{0.0, Cont{}};
    std::vector<OppTerm> kept;
    if (full)
      for (auto& t : terms)
        if (t.prob != 0.0) kept.push_back(t);
    return std::pair<double, Cont>{prob, resolve(ctx, o, kept)};
  };
  // Own win with ties resolved by index.
  OppTerm wt;
  wt.f.resize(n);
  for (int p = 0; p < n; ++p) wt.f[p] = Factor{0, p < ctx.self_pos ? lb[p] : ub[p]};
  wt.prob = range_prod(ctx.opp, wt.f);

  if (!rule.second_price) {
    std::vector<OppTerm> terms{wt};
    auto [pw, kw] = event(terms, env().single_item_outcome(rule, i, b));
    if (pw > 0.0) add_win(pw, b, kw);
    // Lower-indexed opponent bidding exactly the same amount wins the tie.
    for (int j = 0; j < ctx.self_pos; ++j) {
      if (ub[j] <= lb[j]) continue;
      OppTerm t;
      t.f.resize(n);
      for (int p = 0; p < n; ++p) t.f[p] = p == j ? Factor{lb[p], ub[p]} : Factor{0, p < j ? lb[p] : ub[p]};
      t.prob = range_prod(ctx.opp, t.f);
      std::vector<OppTerm> ts{t};
      auto [pj, kj] = event(ts, env().single_item_outcome(rule, ctx.opp[j].bidder, b));
      if (pj > 0.0) u += cont_value(self, kj, pj, tile);
    }
    return u;
  }

  // Own win at a price set strictly below the bid.
  for (auto it = ctx.win.begin(); it != ctx.win.end() && it->v < sc; ++it) add_win(it->prob, it->price, it->cont);
  // Own win at a price equal to the bid.
  {
    OppTerm minus;
    minus.f.resize(n);
    for (int p = 0; p < n; ++p) minus.f[p] = Factor{0, lb[p]};
    minus.prob = -range_prod(ctx.opp, minus.f);
    std::vector<OppTerm> terms{wt, minus};
    auto [pw, kw] = event(terms, env().single_item_outcome(rule, i, b));
    if (pw > 0.0) add_win(pw, b, kw);
  }
  // Opponent wins and the bid sets the price.
  for (int j = 0; j < n; ++j) {
    std::vector<OppTerm> terms;
    OppTerm above;
    above.f.resize(n);
    for (int p = 0; p < n; ++p) above.f[p] = p == j ? Factor{ub[p], ctx.opp[p].size()} : Factor{0, ub[p]};
    above.prob = range_prod(ctx.opp, above.f);
    terms.push_back(above);
    if (j < ctx.self_pos && ub[j] > lb[j]) {
      OppTerm at;
      at.f.resize(n);
      for (int p = 0; p < n; ++p) at.f[p] = p == j ? Factor{lb[p], ub[p]} : Factor{0, p < j ? lb[p] : ub[p]};
      at.prob = range_prod(ctx.opp, at.f);
      terms.push_back(at);
    }
    auto [pj, kj] = event(terms, env().single_item_outcome(rule, ctx.opp[j].bidder, b));
    if (pj > 0.0) u += cont_value(self, kj, pj, tile);
  }
  return u;
}

Affine Evaluator::Impl::generic(Evaluator& self, const Context& ctx, int tile, const BidVector& bid) {
  const HistoryClass& c = g.at(ctx.cls);
  const int i = ctx.bidder;
  std::vector<BidVector> bids(env().num_bidders(), BidVector(bid.size(), 0.0));
  bids[i] = bid;
  Affine u;
  for (const auto& pr : ctx.profiles) {
    for (std::size_t p = 0; p < ctx.opp.size(); ++p) bids[ctx.opp[p].bidder] = ctx.opp[p].bid[pr.level[p]];
    RoundOutcome o = env().apply(c.history, bids);
    if (o.allocation.has_winner(i)) u += env().valuation(i, o.allocation, c.history) * pr.prob;
    u.c -= pr.prob * o.payments[i];
    Cont k;
    k.child = g.successor(ctx.cls, o);
    if (!continues(k.child, i)) continue;
    if (s.continuation == ContinuationMode::Cached) {
      if (!cache) throw SweepOrderViolation("cached continuation requested without a cache");
      u += cache->values(k.child, i)[tile] * pr.prob;
      continue;
    }
    const auto& active = g.at(k.child).beliefs.active;
    std::vector<SetId> sets(env().num_bidders(), kNoSet);
    for (std::size_t p = 0; p < ctx.opp.size(); ++p) {
      const int b = ctx.opp[p].bidder;
      if (active[b]) sets[b] = pr.sets[b];
    }
    u += slot_value(self, *slot(k.child, i, std::move(sets)), tile) * pr.prob;
  }
  return u;
}

Affine Evaluator::Impl::rollout(int child, int bidder, int tile, const Context& ctx,
                                const std::vector<int>& draw) const {
  std::vector<int> tiles(env().num_bidders(), -1);
  tiles[bidder] = tile;
  for (std::size_t p = 0; p < ctx.opp.size(); ++p) tiles[ctx.opp[p].bidder] = draw[p];
  Affine u;
  while (continues(child, bidder)) {
    const HistoryClass& c = g.at(child);
    const int q = env().bid_dim(c.history);
    std::vector<BidVector> bids(env().num_bidders(), BidVector(q, 0.0));
    for (int k = 0; k < env().num_bidders(); ++k)
      if (c.beliefs.active[k]) {
        if (tiles[k] < 0) throw ContractViolation("rollout reached a bidder without a sampled type");
        bids[k] = sigma[k].table(c.id).at(tiles[k]);
      }
    RoundOutcome o = env().apply(c.history, bids);
    if (o.allocation.has_winner(bidder)) u += env().valuation(bidder, o.allocation, c.history);
    u.c -= o.payments[bidder];
    child = g.successor(child, o);
  }
  return u;
}

Estimate Evaluator::Impl::utility(Evaluator& self, const Context& ctx, int tile, const BidVector& bid, bool keep) {
  Estimate e;
  switch (ctx.kind) {
    case Context::Kind::Empty:
      return e;
    case Context::Kind::Single:
      e.mean = single(self, ctx, tile, bid);
      return e;
    case Context::Kind::Generic:
      e.mean = generic(self, ctx, tile, bid);
      return e;
    case Context::Kind::Sampled:
      break;
  }
  const HistoryClass& c = g.at(ctx.cls);
  const int i = ctx.bidder;
  std::vector<BidVector> bids(env().num_bidders(), BidVector(bid.size(), 0.0));
  bids[i] = bid;
  const double inv = 1.0 / static_cast<double>(ctx.samples.size());
  if (keep) e.draws.reserve(ctx.samples.size());
  for (const auto& draw : ctx.samples) {
    for (std::size_t p = 0; p < ctx.opp.size(); ++p)
      bids[ctx.opp[p].bidder] = sigma[ctx.opp[p].bidder].table(c.id).at(draw[p]);
    RoundOutcome o = env().apply(c.history, bids);
    Affine d;
    if (o.allocation.has_winner(i)) d += env().valuation(i, o.allocation, c.history);
    d.c -= o.payments[i];
    const int child = g.successor(ctx.cls, o);
    if (continues(child, i)) {
      if (s.continuation == ContinuationMode::Cached) {
        if (!cache) throw SweepOrderViolation("cached continuation requested without a cache");
        d += cache->values(child, i)[tile];
      } else {
        d += rollout(child, i, tile, ctx, draw);
      }
    }
    e.mean += d * inv;
    if (keep) e.draws.push_back(d);
  }
  return e;
}

// ---------------------------------------------------------------- public

Evaluator::Evaluator(const ClassGraph& g, const PCStrategyProfile& sigma, EvalSettings settings,
                     const SubgameCache* cache)
    : impl_(std::make_unique<Impl>(g, sigma, settings, cache)) {}

Evaluator::~Evaluator() = default;

const ClassGraph& Evaluator::graph() const { return impl_->g; }
const EvalSettings& Evaluator::settings() const { return impl_->s; }
const PCStrategyProfile& Evaluator::sigma() const { return impl_->sigma; }

std::shared_ptr<const Evaluator::Context> Evaluator::context(int cls, int bidder, std::uint64_t seed) const {
  const HistoryClass& c = impl_->g.at(cls);
  std::vector<SetId> sup(impl_->env().num_bidders(), kNoSet);
  for (int k = 0; k < impl_->env().num_bidders(); ++k)
    if (k != bidder && c.beliefs.active[k]) sup[k] = c.beliefs.beliefs[k].support;
  return impl_->build(cls, bidder, sup, seed);
}

std::shared_ptr<const Evaluator::Context> Evaluator::context(int cls, int bidder, const std::vector<SetId>& supports,
                                                             std::uint64_t seed) const {
  return impl_->build(cls, bidder, supports, seed);
}

Estimate Evaluator::utility(const Context& ctx, int tile, const BidVector& bid, bool keep_draws) const {
  return impl_->utility(const_cast<Evaluator&>(*this), ctx, tile, bid, keep_draws);
}

std::vector<std::vector<double>> Evaluator::opponent_bids(const Context& ctx) const {
  std::vector<std::vector<double>> out;
  for (const Levels& L : ctx.opp)
    for (const BidVector& b : L.bid) {
      if (out.size() < b.size()) out.resize(b.size());
      for (std::size_t j = 0; j < b.size(); ++j) out[j].push_back(b[j]);
    }
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

std::vector<Estimate> Evaluator::follow(int cls, int bidder, std::uint64_t seed) const {
  const HistoryClass& c = impl_->g.at(cls);
  const int tiles = impl_->g.space().bidder(bidder).tiles();
  std::vector<Estimate> out(tiles);
  if (c.terminal || !c.beliefs.active[bidder]) return out;
  auto ctx = context(cls, bidder, seed);
  const BidTable& tab = impl_->sigma[bidder].table(c.id);
  for (int t = 0; t < tiles; ++t) out[t] = utility(*ctx, t, tab.at(t), true);
  return out;
}

void Evaluator::clear_memo() {
  std::lock_guard lock(impl_->mu);
  impl_->memo.clear();
}

std::size_t Evaluator::memo_size() const {
  std::lock_guard lock(impl_->mu);
  return impl_->memo.size();
}

void refresh_cache(const Evaluator& ev, SubgameCache& cache, int cls, int bidder, std::uint64_t seed) {
  auto est = ev.follow(cls, bidder, seed);
  const Tiling& tiling = ev.graph().space().bidder(bidder).tiling();
  std::vector<Affine> values;
  std::vector<double> se;
  for (std::size_t t = 0; t < est.size(); ++t) {
    values.push_back(est[t].mean);
    se.push_back(est[t].se(tiling.lower_vertex(static_cast<int>(t))));
  }
  const int samples = ev.settings().integration == Integration::MonteCarlo ? ev.settings().samples : 0;
  cache.put(cls, bidder, std::move(values), std::move(se), samples);
}

Estimate expected_utility(const Evaluator& ev, int cls, int bidder, const TypePoint& theta, const BidVector& bid,
                          std::uint64_t seed) {
  const Tiling& tiling = ev.graph().space().bidder(bidder).tiling();
  auto ctx = ev.context(cls, bidder, seed);
  return ev.utility(*ctx, locate_tile(tiling, theta), bid, true);
}

}  // namespace seqauction
