#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "seqauction/belief/history.hpp"
#include "seqauction/solver/config.hpp"

namespace seqauction {

class SweepOrderViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Per (class, bidder): the value of following sigma from that class on, per
// tile, as an affine function of the bidder's own type.
class SubgameCache {
 public:
  void reset(int classes, int bidders);
  bool has(int cls, int bidder) const;
  const std::vector<Affine>& values(int cls, int bidder) const;
  double se(int cls, int bidder, int tile) const;
  int samples(int cls, int bidder) const;
  void put(int cls, int bidder, std::vector<Affine> values, std::vector<double> se, int samples);

 private:
  struct Entry {
    bool filled = false;
    std::vector<Affine> values;
    std::vector<double> se;
    int samples = 0;
  };
  int bidders_ = 0;
  std::vector<Entry> entries_;
};

// Utility estimate as an affine function of the own type; `draws` holds the
// per-sample values when sampling so that paired errors can be formed.
struct Estimate {
  Affine mean;
  std::vector<Affine> draws;

  double value(const TypePoint& theta) const { return mean.at(theta); }
  double se(const TypePoint& theta) const;
};

double paired_se(const Estimate& a, const Estimate& b, const TypePoint& theta);

struct EvalSettings {
  Integration integration = Integration::Exact;
  ContinuationMode continuation = ContinuationMode::Cached;
  int samples = 2000;
  bool closed_form = true;  // single-item closed forms when available
};

// Expected utility of one bidder at a history class (round utility plus
// continuation). sigma must stay fixed for the opponents over the lifetime of
// the evaluator; the evaluated bidder's tables may change at classes whose
// continuation has not been requested yet.
class Evaluator {
 public:
  struct Context;

  Evaluator(const ClassGraph& g, const PCStrategyProfile& sigma, EvalSettings settings,
            const SubgameCache* cache = nullptr);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  const ClassGraph& graph() const;
  const EvalSettings& settings() const;
  const PCStrategyProfile& sigma() const;

  // Opponents distributed by the class's public beliefs.
  std::shared_ptr<const Context> context(int cls, int bidder, std::uint64_t seed) const;
  // Opponents distributed by explicit supports (kNoSet for non-participants).
  std::shared_ptr<const Context> context(int cls, int bidder, const std::vector<SetId>& supports,
                                         std::uint64_t seed) const;

  Estimate utility(const Context& ctx, int tile, const BidVector& bid, bool keep_draws = false) const;

  // Distinct opponent bids per bid component, ascending: the points where the
  // utility can jump.
  std::vector<std::vector<double>> opponent_bids(const Context& ctx) const;

  // Value of following sigma at every tile of the bidder.
  std::vector<Estimate> follow(int cls, int bidder, std::uint64_t seed) const;

  // Drops the conditional-continuation memo (needed when sigma changes).
  void clear_memo();
  std::size_t memo_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Writes follow() results for (cls, bidder) into the cache.
void refresh_cache(const Evaluator& ev, SubgameCache& cache, int cls, int bidder, std::uint64_t seed);

// Single-point convenience wrapper.
Estimate expected_utility(const Evaluator& ev, int cls, int bidder, const TypePoint& theta, const BidVector& bid,
                          std::uint64_t seed);

}  // namespace seqauction
