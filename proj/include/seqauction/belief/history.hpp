#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqauction/belief/branches.hpp"
#include "seqauction/belief/tileset.hpp"
#include "seqauction/tiling/strategy.hpp"

namespace seqauction {

class ClassBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OffPathOutcome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BeliefRule { RoundDown, ResetToPrior, KeepLast };

BeliefRule parse_belief_rule(const std::string& s);
std::string to_string(BeliefRule r);

// Shared per-run context: one BidderSpace per bidder.
class BeliefSpace {
 public:
  BeliefSpace(const AuctionEnvironment& env, const std::vector<std::shared_ptr<const Tiling>>& tilings);

  int bidders() const { return static_cast<int>(spaces_.size()); }
  BidderSpace& bidder(int i) { return *spaces_[i]; }
  const BidderSpace& bidder(int i) const { return *spaces_[i]; }
  std::vector<std::shared_ptr<const Tiling>> tilings() const;

 private:
  std::vector<std::unique_ptr<BidderSpace>> spaces_;
};

// Posterior of one bidder: the prior restricted to a union of tiles.
struct Belief {
  SetId support = kNoSet;
  double mass = 0.0;  // prior mass of the support (normalizer)
};

// Product of per-bidder beliefs; bidders that left carry no belief.
struct BeliefProfile {
  std::vector<char> active;
  std::vector<Belief> beliefs;

  bool operator==(const BeliefProfile& o) const;
};

inline constexpr int kLeaf = -1;  // successor after the final round

struct HistoryClass {
  ClassId id = 0;
  int index = 0;
  int round = 0;  // completed rounds t_h
  AllocationHistory history;
  BeliefProfile beliefs;
  bool terminal = false;
  double reach = 0.0;  // on-path probability under the enumerating profile
  int parent = -1;

  struct Edge {
    Allocation allocation;
    std::vector<std::pair<double, int>> by_price;  // on-path prices, ascending
    int fallback = kLeaf;
    bool has_fallback = false;
  };
  std::vector<Edge> edges;

  std::vector<int> children() const;
  ClassRef ref() const { return ClassRef{id, history}; }
};

// Called for every non-terminal class before its tables are read; may add
// tables for classes sigma does not know yet.
using ClassInitializer = std::function<void(const HistoryClass&, PCStrategyProfile&)>;

// The finite quotient of histories reachable under a profile, closed under the
// finite belief choice rule.
class ClassGraph {
 public:
  const AuctionEnvironment& env() const { return *env_; }
  BeliefSpace& space() const { return *space_; }
  BeliefRule rule() const { return rule_; }

  int size() const { return static_cast<int>(classes_.size()); }
  const HistoryClass& at(int index) const { return classes_[index]; }
  const HistoryClass& root() const { return classes_.front(); }
  std::optional<int> find(ClassId id) const;
  const std::vector<int>& round(int t) const { return by_round_[t]; }
  int rounds() const { return static_cast<int>(by_round_.size()); }
  std::vector<ClassId> ids() const;

  // Class reached from `from` after observing `outcome` (kLeaf after the last
  // round). Off-path observations go through the finite belief choice rule.
  int successor(int from, const RoundOutcome& outcome) const;
  bool on_path(int from, const RoundOutcome& outcome) const;

 private:
  friend ClassGraph enumerate_history_classes(const AuctionEnvironment&, BeliefSpace&, PCStrategyProfile&,
                                              BeliefRule, int, const ClassInitializer&);
  const AuctionEnvironment* env_ = nullptr;
  BeliefSpace* space_ = nullptr;
  BeliefRule rule_ = BeliefRule::RoundDown;
  std::vector<HistoryClass> classes_;
  std::unordered_map<ClassId, int> index_;
  std::vector<std::vector<int>> by_round_;
};

ClassId class_id(const AllocationHistory& h, const BeliefProfile& b, const BeliefSpace& space);
BeliefProfile prior_beliefs(const AuctionEnvironment& env, BeliefSpace& space, const AllocationHistory& h);
ClassRef root_class(const AuctionEnvironment& env, BeliefSpace& space);

// Level tables of the active bidders at a class under sigma (optionally with
// some bidders' supports replaced).
std::vector<Levels> class_levels(const HistoryClass& c, const PCStrategyProfile& sigma, const BeliefSpace& space,
                                 const AuctionEnvironment& env);

// Enumerates all classes reachable under sigma. Classes still missing from
// sigma afterwards get truthful tables. Throws ClassBudgetExceeded above
// `budget`.
ClassGraph enumerate_history_classes(const AuctionEnvironment& env, BeliefSpace& space, PCStrategyProfile& sigma,
                                     BeliefRule rule = BeliefRule::RoundDown, int budget = 200000,
                                     const ClassInitializer& init = {});

// Posterior after an on-path outcome; throws OffPathOutcome otherwise.
BeliefProfile bayes_update(const ClassGraph& g, const PCStrategyProfile& sigma, int cls,
                           const RoundOutcome& outcome);

// Belief profile assigned to an outcome by the configured finite belief choice rule.
BeliefProfile finite_belief_choice(const ClassGraph& g, int cls, const RoundOutcome& outcome);

}  // namespace seqauction
