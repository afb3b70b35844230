#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "seqauction/solver/config.hpp"
#include "seqauction/solver/evaluator.hpp"

namespace seqauction {

struct TraceRow {
  int iteration = 0;
  int bidder = 0;
  int round = 0;  // auction round, 1-based
  ClassId cls = 0;
  double max_loss = 0.0;
  bool outer = false;
};

struct SearchResult {
  PCStrategyProfile sigma;
  std::vector<std::shared_ptr<const Tiling>> tilings;
  std::vector<TraceRow> trace;
  int inner_iterations = 0;
};

// Called after every completed iteration with its 1-based index.
using IterationHook = std::function<void(int, const PCStrategyProfile&)>;

std::vector<std::shared_ptr<const Tiling>> make_tilings(const AuctionEnvironment& env, const std::vector<int>& grid);

EvalSettings eval_settings(const Fidelity& fid, ContinuationMode mode);

SearchResult run_search(const AuctionEnvironment& env, const SolverConfig& cfg, const IterationHook& hook = {});

}  // namespace seqauction
