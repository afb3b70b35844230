#include "seqauction/belief/history.hpp"

#include <algorithm>
#include <climits>

#include <openssl/evp.h>

namespace seqauction {

BeliefRule parse_belief_rule(const std::string& s) {
  if (s == "round_down") return BeliefRule::RoundDown;
  if (s == "reset_to_prior") return BeliefRule::ResetToPrior;
  if (s == "keep_last") return BeliefRule::KeepLast;
  throw DomainError("unknown belief rule: " + s);
}

std::string to_string(BeliefRule r) {
  switch (r) {
    case BeliefRule::RoundDown: return "round_down";
    case BeliefRule::ResetToPrior: return "reset_to_prior";
    case BeliefRule::KeepLast: return "keep_last";
  }
  return "?";
}

BeliefSpace::BeliefSpace(const AuctionEnvironment& env, const std::vector<std::shared_ptr<const Tiling>>& tilings) {
  if (static_cast<int>(tilings.size()) != env.num_bidders())
    throw ContractViolation("one tiling per bidder required");
  for (int i = 0; i < env.num_bidders(); ++i) {
    if (!(tilings[i]->space().lower == env.type_space(i).lower &&
          tilings[i]->space().upper == env.type_space(i).upper))
      throw ContractViolation("tiling does not cover the bidder's type space");
    spaces_.push_back(std::make_unique<BidderSpace>(tilings[i], env.prior(i)));
  }
}

std::vector<std::shared_ptr<const Tiling>> BeliefSpace::tilings() const {
  std::vector<std::shared_ptr<const Tiling>> out;
  for (const auto& s : spaces_) out.push_back(s->tiling_ptr());
  return out;
}

bool BeliefProfile::operator==(const BeliefProfile& o) const {
  if (active != o.active || beliefs.size() != o.beliefs.size()) return false;
  for (std::size_t i = 0; i < beliefs.size(); ++i)
    if (active[i] && beliefs[i].support != o.beliefs[i].support) return false;
  return true;
}

std::vector<int> HistoryClass::children() const {
  std::vector<int> out;
  for (const auto& e : edges) {
    for (auto [p, c] : e.by_price)
      if (c != kLeaf) out.push_back(c);
    if (e.has_fallback && e.fallback != kLeaf) out.push_back(e.fallback);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<int> ClassGraph::find(ClassId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ClassId> ClassGraph::ids() const {
  std::vector<ClassId> out;
  for (const auto& c : classes_) out.push_back(c.id);
  return out;
}

int ClassGraph::successor(int from, const RoundOutcome& outcome) const {
  const HistoryClass& c = classes_[from];
  const HistoryClass::Edge* e = nullptr;
  for (const auto& edge : c.edges)
    if (edge.allocation == outcome.allocation) e = &edge;
  if (!e) throw ContractViolation("allocation impossible at this history class");
  const double p = env_->price(outcome);
  const auto& v = e->by_price;
  auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(p, INT_MIN));
  if (it != v.end() && it->first == p) return it->second;
  if (rule_ != BeliefRule::RoundDown || v.empty()) {
    if (!e->has_fallback) throw ContractViolation("no fallback class for off-path outcome");
    return e->fallback;
  }
  // Largest on-path price below the observation, else the smallest above it.
  if (it == v.begin()) return v.front().second;
  return std::prev(it)->second;
}

bool ClassGraph::on_path(int from, const RoundOutcome& outcome) const {
  const double p = env_->price(outcome);
  for (const auto& e : classes_[from].edges)
    if (e.allocation == outcome.allocation)
      for (auto [q, c] : e.by_price)
        if (q == p) return true;
  return false;
}

ClassId class_id(const AllocationHistory& h, const BeliefProfile& b, const BeliefSpace& space) {
  std::vector<std::int64_t> words;
  words.push_back(h.round());
  for (const auto& x : h.rounds) {
    words.push_back(x.kind);
    words.push_back(static_cast<std::int64_t>(x.winners.size()));
    words.insert(words.end(), x.winners.begin(), x.winners.end());
  }
  for (std::size_t i = 0; i < b.active.size(); ++i) {
    words.push_back(b.active[i]);
    if (!b.active[i]) continue;
    const auto& runs = space.bidder(static_cast<int>(i)).set(b.beliefs[i].support).runs();
    words.push_back(static_cast<std::int64_t>(runs.size()));
    for (auto [lo, hi] : runs) {
      words.push_back(lo);
      words.push_back(hi);
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(words.data(), words.size() * sizeof(std::int64_t), md, &len, EVP_sha256(), nullptr);
  ClassId id = 0;
  for (int k = 0; k < 8; ++k) id = (id << 8) | md[k];
  return id;
}

BeliefProfile prior_beliefs(const AuctionEnvironment& env, BeliefSpace& space, const AllocationHistory& h) {
  BeliefProfile b;
  b.active = env.active(h);
  b.beliefs.resize(env.num_bidders());
  for (int i = 0; i < env.num_bidders(); ++i)
    if (b.active[i]) {
      SetId s = space.bidder(i).full();
      b.beliefs[i] = Belief{s, space.bidder(i).mass(s)};
    }
  return b;
}

ClassRef root_class(const AuctionEnvironment& env, BeliefSpace& space) {
  AllocationHistory h;
  return ClassRef{class_id(h, prior_beliefs(env, space, h), space), h};
}

std::vector<Levels> class_levels(const HistoryClass& c, const PCStrategyProfile& sigma, const BeliefSpace& space,
                                 const AuctionEnvironment& env) {
  std::vector<Levels> out;
  auto rule = env.single_item(c.history);
  for (int i = 0; i < env.num_bidders(); ++i) {
    if (!c.beliefs.active[i]) continue;
    const BidderSpace& bs = space.bidder(i);
    out.push_back(build_levels(i, sigma[i].table(c.id), bs.set(c.beliefs.beliefs[i].support), bs, rule));
  }
  return out;
}

namespace {

std::vector<const Levels*> pointers(const std::vector<Levels>& v) {
  std::vector<const Levels*> out;
  for (const auto& l : v) out.push_back(&l);
  return out;
}

BeliefProfile posterior(const AuctionEnvironment& env, BeliefSpace& space, const AllocationHistory& next,
                        const Branch& br, const std::vector<const Levels*>& parts) {
  BeliefProfile b;
  b.active = env.active(next);
  b.beliefs.resize(env.num_bidders());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const int i = parts[p]->bidder;
    if (!b.active[i]) continue;
    std::vector<int> tiles;
    for (int l : marginal_levels(br, parts, static_cast<int>(p)))
      tiles.insert(tiles.end(), parts[p]->tiles[l].begin(), parts[p]->tiles[l].end());
    std::sort(tiles.begin(), tiles.end());
    SetId s = space.bidder(i).intern(TileSet::from_sorted(tiles));
    b.beliefs[i] = Belief{s, space.bidder(i).mass(s)};
  }
  return b;
}

}  // namespace

ClassGraph enumerate_history_classes(const AuctionEnvironment& env, BeliefSpace& space, PCStrategyProfile& sigma,
                                     BeliefRule rule, int budget, const ClassInitializer& init) {
  ClassGraph g;
  g.env_ = &env;
  g.space_ = &space;
  g.rule_ = rule;
  const int T = env.num_rounds();
  g.by_round_.assign(T, {});

  auto get_or_add = [&](const AllocationHistory& h, BeliefProfile b, int parent) {
    ClassId id = class_id(h, b, space);
    if (auto it = g.index_.find(id); it != g.index_.end()) return it->second;
    HistoryClass c;
    c.id = id;
    c.index = static_cast<int>(g.classes_.size());
    c.round = h.round();
    c.history = h;
    c.beliefs = std::move(b);
    c.terminal = env.terminal(h);
    c.parent = parent;
    g.classes_.push_back(std::move(c));
    g.index_.emplace(id, g.classes_.back().index);
    g.by_round_[h.round()].push_back(g.classes_.back().index);
    if (g.size() > budget)
      throw ClassBudgetExceeded("history class budget of " + std::to_string(budget) + " exceeded");
    return g.classes_.back().index;
  };

  AllocationHistory h0;
  int root = get_or_add(h0, prior_beliefs(env, space, h0), -1);
  g.classes_[root].reach = 1.0;

  for (int t = 0; t < T; ++t) {
    for (std::size_t pos = 0; pos < g.by_round_[t].size(); ++pos) {
      const int ci = g.by_round_[t][pos];
      if (g.classes_[ci].terminal) continue;
      if (init) init(g.classes_[ci], sigma);
      sigma.ensure(g.classes_[ci].ref(), env);
      const AllocationHistory h = g.classes_[ci].history;
      const double reach = g.classes_[ci].reach;
      auto levels = class_levels(g.classes_[ci], sigma, space, env);
      auto parts = pointers(levels);
      std::vector<HistoryClass::Edge> edges;
      auto edge_for = [&](const Allocation& x) -> HistoryClass::Edge& {
        for (auto& e : edges)
          if (e.allocation == x) return e;
        edges.push_back(HistoryClass::Edge{x, {}, kLeaf, false});
        return edges.back();
      };
      for (const Branch& br : round_branches(env, h, parts)) {
        const AllocationHistory next = h.extended(br.outcome.allocation);
        int child = kLeaf;
        if (next.round() < T) {
          child = get_or_add(next, posterior(env, space, next, br, parts), ci);
          g.classes_[child].reach += reach * br.prob;
        }
        edge_for(br.outcome.allocation).by_price.emplace_back(env.price(br.outcome), child);
      }
      for (const Allocation& x : env.possible_allocations(h)) {
        auto& e = edge_for(x);
        if (rule == BeliefRule::RoundDown && !e.by_price.empty()) continue;
        const AllocationHistory next = h.extended(x);
        int child = kLeaf;
        if (next.round() < T) {
          BeliefProfile b = prior_beliefs(env, space, next);
          if (rule != BeliefRule::ResetToPrior) {
            const auto& cur = g.classes_[ci].beliefs;
            for (int i = 0; i < env.num_bidders(); ++i)
              if (b.active[i]) b.beliefs[i] = cur.beliefs[i];
          }
          child = get_or_add(next, std::move(b), ci);
        }
        e.fallback = child;
        e.has_fallback = true;
      }
      for (auto& e : edges) std::sort(e.by_price.begin(), e.by_price.end());
      g.classes_[ci].edges = std::move(edges);
    }
  }
  return g;
}

BeliefProfile bayes_update(const ClassGraph& g, const PCStrategyProfile& sigma, int cls,
                           const RoundOutcome& outcome) {
  const HistoryClass& c = g.at(cls);
  const auto& env = g.env();
  auto levels = class_levels(c, sigma, g.space(), env);
  auto parts = pointers(levels);
  const double p = env.price(outcome);
  for (const Branch& br : round_branches(env, c.history, parts)) {
    if (br.outcome.allocation == outcome.allocation && env.price(br.outcome) == p)
      return posterior(env, g.space(), c.history.extended(outcome.allocation), br, parts);
  }
  throw OffPathOutcome("outcome has zero probability under the profile");
}

BeliefProfile finite_belief_choice(const ClassGraph& g, int cls, const RoundOutcome& outcome) {
  int child = g.successor(cls, outcome);
  if (child == kLeaf) return BeliefProfile{};
  return g.at(child).beliefs;
}

}  // namespace seqauction
