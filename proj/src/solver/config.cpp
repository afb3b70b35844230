#include "seqauction/solver/config.hpp"

namespace seqauction {

Integration parse_integration(const std::string& s) {
  if (s == "exact") return Integration::Exact;
  if (s == "mc") return Integration::MonteCarlo;
  throw ContractViolation("unknown integration mode '" + s + "' (expected exact or mc)");
}

ContinuationMode parse_continuation(const std::string& s) {
  if (s == "cached") return ContinuationMode::Cached;
  if (s == "full") return ContinuationMode::Full;
  throw ContractViolation("unknown continuation mode '" + s + "' (expected cached or full)");
}

std::string to_string(Integration m) { return m == Integration::Exact ? "exact" : "mc"; }
std::string to_string(ContinuationMode m) { return m == ContinuationMode::Cached ? "cached" : "full"; }

UpdateOrder parse_update_order(const std::string& s) {
  if (s == "sequential") return UpdateOrder::Sequential;
  if (s == "simultaneous") return UpdateOrder::Simultaneous;
  throw ContractViolation("unknown update order '" + s + "' (expected sequential or simultaneous)");
}

std::string to_string(UpdateOrder o) { return o == UpdateOrder::Sequential ? "sequential" : "simultaneous"; }

namespace {

void check_fidelity(const Fidelity& f, const std::string& name) {
  if (f.samples <= 0) throw ContractViolation(name + ".samples must be positive");
  if (f.pattern_steps < 0) throw ContractViolation(name + ".pattern_steps must be non-negative");
  if (f.points_per_direction < 1) throw ContractViolation(name + ".points_per_direction must be at least 1");
  if (!(f.init_step > 0.0 && f.init_step <= 1.0)) throw ContractViolation(name + ".init_step must lie in (0,1]");
  if (!(f.shrink > 0.0 && f.shrink < 1.0)) throw ContractViolation(name + ".shrink must lie in (0,1)");
}

}  // namespace

void SolverConfig::validate() const {
  if (grid.empty()) throw ContractViolation("grid must list at least one dimension");
  for (int g : grid)
    if (g < 1) throw ContractViolation("grid sizes must be positive");
  check_fidelity(inner, "inner");
  check_fidelity(outer, "outer");
  if (!(update.gamma_min >= 0.0 && update.gamma_min <= update.gamma_max && update.gamma_max <= 1.0))
    throw ContractViolation("need 0 <= gamma_min <= gamma_max <= 1");
  if (!(update.c > 0.0)) throw ContractViolation("update constant c must be positive");
  if (iterations < 0 || inner_iterations < 0) throw ContractViolation("iteration counts must be non-negative");
  if (!(inner_threshold >= 0.0)) throw ContractViolation("inner_threshold must be non-negative");
  if (class_budget < 1) throw ContractViolation("class_budget must be positive");
}

}  // namespace seqauction
