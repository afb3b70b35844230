#include "seqauction/env/registry.hpp"

#include "seqauction/env/sequential_sales.hpp"
#include "seqauction/env/split_award.hpp"

namespace seqauction {

EnvironmentPtr make_environment(const EnvironmentParams& p) {
  if (p.kind == "sequential_sales") {
    if (p.payment != "first" && p.payment != "second")
      throw DomainError("payment must be first or second");
    if (p.lower != 0.0) throw DomainError("sequential sales prior starts at 0");
    SequentialSalesSpec s{p.bidders, p.goods,
                          p.payment == "first" ? PaymentRule::First : PaymentRule::Second, p.upper};
    return std::make_shared<SequentialSales>(s);
  }
  if (p.kind == "split_award") {
    if (p.payment != "first") throw DomainError("split award uses first-price payments");
    return std::make_shared<SplitAward>(SplitAwardSpec{p.bidders, p.cost, p.lower, p.upper});
  }
  throw DomainError("unknown environment kind: " + p.kind);
}

}  // namespace seqauction
