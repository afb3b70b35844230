#pragma once

#include <stdexcept>

namespace seqauction {

class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PaymentRule { First, Second };

struct SequentialSalesSpec {
  int bidders = 3;
  int goods = 2;
  PaymentRule payment = PaymentRule::Second;
  double upper = 1.0;  // prior U[0, upper]
};

struct SplitAwardSpec {
  int bidders = 3;
  double cost = 0.2;  // C
  double lower = 1.0;
  double upper = 2.0;

  bool strong_diseconomies() const { return bidders > 2 && cost < lower / (lower + upper); }
};

enum class SplitStage { Round1, Round2Winner, Round2Loser };

// Equilibrium bid in round k (1-based) of the sequential sale.
double analytical_sequential_sales(double theta, int round, const SequentialSalesSpec& spec);

// Equilibrium split bid; throws OracleUnavailable outside strong diseconomies.
double analytical_split_award(double theta, SplitStage stage, const SplitAwardSpec& spec);

}  // namespace seqauction
