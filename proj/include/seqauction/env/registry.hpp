#pragma once

#include <string>

#include "seqauction/core/environment.hpp"

namespace seqauction {

struct EnvironmentParams {
  std::string kind = "sequential_sales";  // or "split_award"
  int bidders = 3;
  int goods = 2;
  std::string payment = "second";  // first | second
  double lower = 0.0;
  double upper = 1.0;
  double cost = 0.2;
};

EnvironmentPtr make_environment(const EnvironmentParams& p);

}  // namespace seqauction
