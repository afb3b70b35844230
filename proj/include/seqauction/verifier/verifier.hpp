#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seqauction/solver/config.hpp"
#include "seqauction/solver/evaluator.hpp"
#include "seqauction/solver/pattern_search.hpp"

namespace seqauction {

class VerificationRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteVerification : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifierConfig {
  Fidelity fidelity{Integration::Exact, 20000, 40, 1, 0.1, 0.5};
  ContinuationMode continuation = ContinuationMode::Cached;
  int restarts = 4;       // extra pattern-search starts spread over the bid box
  int scan = 32;          // uniform scan points per bid component
  bool breakpoints = true;  // scan opponents' bids and their neighbours
  double margin_se = 3.0;
  std::uint64_t seed = 7;
};

struct VertexLoss {
  ClassId cls = 0;
  int bidder = 0;
  int tile = 0;
  int vertex = 0;
  double loss = 0.0;
  double se = 0.0;
  double ibr_utility = 0.0;
  double sigma_utility = 0.0;
};

struct VertexLossTable {
  std::vector<VertexLoss> rows;
  std::string integration;
  int samples = 0;
  int pattern_steps = 0;
};

struct EpsilonReport {
  double epsilon = 0.0;
  double epsilon_with_margin = 0.0;
  std::vector<double> per_bidder;
  std::vector<double> per_bidder_with_margin;
  int worst_bidder = 0;
  std::vector<ClassId> worst_path;
  VertexLossTable table;
};

// Best single-round deviation utility at a vertex: pattern search from the
// incumbent and from spread starts, after a scan of candidate bids.
IbrResult verify_ibr(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int tile, const TypePoint& vertex,
                     const BidVector& incumbent, const VerifierConfig& cfg);

// Loss at one vertex of one tile: IBR utility minus the utility of the tile's
// bid, clamped at zero.
VertexLoss vertex_loss(const Evaluator& ev, const Evaluator::Context& ctx, int cls, int bidder, int tile,
                       int vertex, const VerifierConfig& cfg);

// Fills a cache with the value of following sigma, successors first.
void fill_cache(const Evaluator& ev, SubgameCache& cache, std::uint64_t seed);

VertexLossTable vertex_losses(const ClassGraph& g, const PCStrategyProfile& sigma, const VerifierConfig& cfg);

// Longest-path aggregation of per-class losses over the class DAG.
EpsilonReport epsilon_bound(const ClassGraph& g, const VertexLossTable& table, double margin_se = 3.0);

// Full pipeline; refuses environments without independent beliefs.
EpsilonReport epsilon_bound(const ClassGraph& g, const PCStrategyProfile& sigma, const VerifierConfig& cfg);

}  // namespace seqauction
