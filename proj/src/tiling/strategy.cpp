#include "seqauction/tiling/strategy.hpp"

#include <cmath>
#include <numbers>

namespace seqauction {

BidVector BidTable::at(int tile) const {
  auto first = bids.begin() + static_cast<std::ptrdiff_t>(tile) * q;
  return BidVector(first, first + q);
}

void BidTable::set(int tile, const BidVector& b) {
  if (static_cast<int>(b.size()) != q) throw ContractViolation("bid length mismatch");
  std::copy(b.begin(), b.end(), bids.begin() + static_cast<std::ptrdiff_t>(tile) * q);
}

const BidTable& PCStrategy::table(ClassId c) const {
  auto it = tables_.find(c);
  if (it == tables_.end()) throw ContractViolation("strategy has no entry for history class");
  return it->second;
}

BidTable& PCStrategy::mutable_table(ClassId c) {
  auto it = tables_.find(c);
  if (it == tables_.end()) throw ContractViolation("strategy has no entry for history class");
  return it->second;
}

void PCStrategy::set_table(ClassId c, BidTable t) {
  if (t.tiles() != tiling_->size()) throw ContractViolation("bid table does not match tiling");
  tables_[c] = std::move(t);
}

void PCStrategy::retain(const std::vector<ClassId>& keep) {
  std::map<ClassId, BidTable> kept;
  for (ClassId c : keep) {
    auto it = tables_.find(c);
    if (it != tables_.end()) kept.emplace(c, std::move(it->second));
  }
  tables_ = std::move(kept);
}

void PCStrategy::ensure(const ClassRef& c, const AuctionEnvironment& env) {
  if (!has(c.id)) tables_.emplace(c.id, truthful_table(env, bidder_, *tiling_, c.history));
}

void PCStrategyProfile::ensure(const ClassRef& c, const AuctionEnvironment& env) {
  for (auto& s : strategies) s.ensure(c, env);
}

BidTable truthful_table(const AuctionEnvironment& env, int bidder, const Tiling& tiling,
                        const AllocationHistory& h) {
  BidTable t;
  t.q = env.bid_dim(h);
  t.bids.resize(static_cast<std::size_t>(tiling.size()) * t.q);
  for (int k = 0; k < tiling.size(); ++k) {
    BidVector b = env.truthful_bid(bidder, tiling.lower_vertex(k), h);
    for (double& x : b) x = std::max(0.0, x);
    t.set(k, b);
  }
  return t;
}

PCStrategyProfile init_truthful(const AuctionEnvironment& env,
                                const std::vector<std::shared_ptr<const Tiling>>& tilings,
                                const std::vector<ClassRef>& classes) {
  if (static_cast<int>(tilings.size()) != env.num_bidders())
    throw ContractViolation("one tiling per bidder required");
  PCStrategyProfile p;
  for (int i = 0; i < env.num_bidders(); ++i) p.strategies.emplace_back(i, tilings[i]);
  for (const auto& c : classes) p.ensure(c, env);
  return p;
}

double update_rate(double loss, const UpdateRule& rule) {
  return 2.0 / std::numbers::pi * std::atan(rule.c * std::max(0.0, loss)) *
             (rule.gamma_max - rule.gamma_min) +
         rule.gamma_min;
}

BidTable update_table(const BidTable& old, const BidTable& best_response,
                      const std::vector<double>& losses, const UpdateRule& rule) {
  if (old.q != best_response.q || old.bids.size() != best_response.bids.size())
    throw ContractViolation("update needs matching bid tables");
  if (static_cast<int>(losses.size()) != old.tiles()) throw ContractViolation("one loss per tile");
  double shared = 0.0;
  if (!rule.per_tile)
    for (double l : losses) shared = std::max(shared, l);
  BidTable out = old;
  for (int k = 0; k < old.tiles(); ++k) {
    const double g = update_rate(rule.per_tile ? losses[k] : shared, rule);
    for (int j = 0; j < old.q; ++j) {
      const std::size_t at = static_cast<std::size_t>(k) * old.q + j;
      out.bids[at] = (1.0 - g) * old.bids[at] + g * best_response.bids[at];
    }
  }
  return out;
}

PCStrategy update_strategy(const PCStrategy& old, const PCStrategy& best_response,
                           const std::map<ClassId, std::vector<double>>& losses, const UpdateRule& rule) {
  if (!(old.tiling() == best_response.tiling())) throw ContractViolation("tilings differ");
  PCStrategy out = old;
  for (const auto& [c, br] : best_response.tables()) {
    auto it = losses.find(c);
    if (it == losses.end()) throw ContractViolation("missing losses for history class");
    out.set_table(c, update_table(old.table(c), br, it->second, rule));
  }
  return out;
}

std::vector<double> isotonic(const std::vector<double>& y, MonotoneDirection dir) {
  const double sign = dir == MonotoneDirection::Nondecreasing ? 1.0 : -1.0;
  // Blocks of (sum, count); merged while the last two violate the order.
  std::vector<double> sum;
  std::vector<int> cnt;
  for (double v : y) {
    sum.push_back(sign * v);
    cnt.push_back(1);
    while (sum.size() > 1 &&
           sum[sum.size() - 2] / cnt[cnt.size() - 2] > sum.back() / cnt.back()) {
      sum[sum.size() - 2] += sum.back();
      cnt[cnt.size() - 2] += cnt.back();
      sum.pop_back();
      cnt.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t b = 0; b < sum.size(); ++b) out.insert(out.end(), cnt[b], sign * sum[b] / cnt[b]);
  return out;
}

BidTable enforce_monotone(const BidTable& table, const Tiling& tiling, MonotoneDirection dir) {
  if (tiling.dim() != 1) throw ContractViolation("monotone projection is only supported for d = 1");
  BidTable out = table;
  std::vector<double> col(table.tiles());
  for (int j = 0; j < table.q; ++j) {
    for (int k = 0; k < table.tiles(); ++k) col[k] = table.get(k, j);
    auto fit = isotonic(col, dir);
    for (int k = 0; k < table.tiles(); ++k) out.bids[static_cast<std::size_t>(k) * table.q + j] = fit[k];
  }
  return out;
}

PCStrategy enforce_monotone(const PCStrategy& strategy, MonotoneDirection dir) {
  PCStrategy out = strategy;
  for (const auto& [c, t] : strategy.tables()) out.set_table(c, enforce_monotone(t, strategy.tiling(), dir));
  return out;
}

}  // namespace seqauction
