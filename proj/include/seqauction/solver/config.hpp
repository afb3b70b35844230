#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqauction/belief/history.hpp"
#include "seqauction/tiling/strategy.hpp"

namespace seqauction {

enum class Integration { Exact, MonteCarlo };

enum class UpdateOrder { Sequential, Simultaneous };

// Cached: continuation values of successor classes computed under their public
// beliefs. Full: continuation under the deviator's own conditional beliefs
// (exact recursion, or whole-path rollout when sampling).
enum class ContinuationMode { Cached, Full };

Integration parse_integration(const std::string& s);
ContinuationMode parse_continuation(const std::string& s);
std::string to_string(Integration m);
std::string to_string(ContinuationMode m);
UpdateOrder parse_update_order(const std::string& s);
std::string to_string(UpdateOrder o);

struct Fidelity {
  Integration integration = Integration::Exact;
  int samples = 2000;
  int pattern_steps = 24;
  int points_per_direction = 1;
  double init_step = 0.1;  // fraction of the bid range
  double shrink = 0.5;
};

struct SolverConfig {
  std::vector<int> grid;  // tiles per type dimension, shared by all bidders
  Fidelity inner;
  Fidelity outer;
  UpdateRule update;
  int iterations = 5;         // outer (high-fidelity) iterations
  int inner_iterations = 40;  // cap on the low-fidelity loop
  double inner_threshold = 1e-3;  // fraction of the bid range
  bool monotone = false;
  // Average the tables of bidders with the same role and belief in a class
  // (only in environments with exchangeable bidders).
  bool symmetric = true;
  UpdateOrder order = UpdateOrder::Simultaneous;
  ContinuationMode continuation = ContinuationMode::Cached;
  BeliefRule belief_rule = BeliefRule::RoundDown;
  int class_budget = 200000;
  std::uint64_t seed = 1;

  // Throws ContractViolation naming the offending field.
  void validate() const;
};

}  // namespace seqauction
