#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "seqauction/core/environment.hpp"
#include "seqauction/tiling/tiling.hpp"

namespace seqauction {

using ClassId = std::uint64_t;

// Bids of one bidder at one history class, tile-major with q entries per tile.
struct BidTable {
  int q = 1;
  std::vector<double> bids;

  int tiles() const { return q == 0 ? 0 : static_cast<int>(bids.size()) / q; }
  BidVector at(int tile) const;
  double get(int tile, int comp) const { return bids[static_cast<std::size_t>(tile) * q + comp]; }
  void set(int tile, const BidVector& b);
  bool operator==(const BidTable&) const = default;
};

struct ClassRef {
  ClassId id = 0;
  AllocationHistory history;
};

class PCStrategy {
 public:
  PCStrategy() = default;
  PCStrategy(int bidder, std::shared_ptr<const Tiling> tiling) : bidder_(bidder), tiling_(std::move(tiling)) {}

  int bidder() const { return bidder_; }
  const Tiling& tiling() const { return *tiling_; }
  std::shared_ptr<const Tiling> tiling_ptr() const { return tiling_; }

  bool has(ClassId c) const { return tables_.count(c) != 0; }
  const BidTable& table(ClassId c) const;
  BidTable& mutable_table(ClassId c);
  void set_table(ClassId c, BidTable t);
  const std::map<ClassId, BidTable>& tables() const { return tables_; }
  void retain(const std::vector<ClassId>& keep);

  // Adds truthful bids at every tile's lower vertex if the class is new.
  void ensure(const ClassRef& c, const AuctionEnvironment& env);

 private:
  int bidder_ = 0;
  std::shared_ptr<const Tiling> tiling_;
  std::map<ClassId, BidTable> tables_;
};

struct PCStrategyProfile {
  std::vector<PCStrategy> strategies;

  int size() const { return static_cast<int>(strategies.size()); }
  PCStrategy& operator[](int i) { return strategies[i]; }
  const PCStrategy& operator[](int i) const { return strategies[i]; }
  void ensure(const ClassRef& c, const AuctionEnvironment& env);
};

BidTable truthful_table(const AuctionEnvironment& env, int bidder, const Tiling& tiling,
                        const AllocationHistory& h);

PCStrategyProfile init_truthful(const AuctionEnvironment& env,
                                const std::vector<std::shared_ptr<const Tiling>>& tilings,
                                const std::vector<ClassRef>& classes);

struct UpdateRule {
  double gamma_min = 0.05;
  double gamma_max = 0.3;
  double c = 100.0;
  bool per_tile = true;
};

// gamma = (2/pi) atan(c l) (gamma_max - gamma_min) + gamma_min
double update_rate(double loss, const UpdateRule& rule);

BidTable update_table(const BidTable& old, const BidTable& best_response,
                      const std::vector<double>& losses, const UpdateRule& rule);

// Applies update_table to every class present in best_response.
PCStrategy update_strategy(const PCStrategy& old, const PCStrategy& best_response,
                           const std::map<ClassId, std::vector<double>>& losses, const UpdateRule& rule);

enum class MonotoneDirection { Nondecreasing, Nonincreasing };

// Least-squares isotonic fit with equal weights (pool adjacent violators).
std::vector<double> isotonic(const std::vector<double>& y, MonotoneDirection dir);

BidTable enforce_monotone(const BidTable& table, const Tiling& tiling, MonotoneDirection dir);
PCStrategy enforce_monotone(const PCStrategy& strategy, MonotoneDirection dir);

}  // namespace seqauction
