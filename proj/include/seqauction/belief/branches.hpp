#pragma once

#include <vector>

#include "seqauction/belief/levels.hpp"
#include "seqauction/core/environment.hpp"

namespace seqauction {

// Level-index range [lo, hi) of one participant.
struct Factor {
  int lo = 0;
  int hi = 0;
};

// Signed product event over participants' levels. prob = sign * prod of range masses.
struct Term {
  double sign = 1.0;
  double prob = 0.0;
  std::vector<Factor> f;
};

// One observable round outcome with the event that produces it, written as a
// signed sum of product events over the participants.
struct Branch {
  RoundOutcome outcome;
  double prob = 0.0;
  std::vector<Term> terms;
};

inline constexpr double kProbTol = 1e-14;

// Participants must be sorted by bidder index (ties go to the lowest index).
std::vector<Branch> single_item_branches(const AuctionEnvironment& env, const SingleItemRule& rule,
                                         const std::vector<const Levels*>& parts);
// Enumerates every joint level profile through env.apply; exact for any rule.
std::vector<Branch> generic_branches(const AuctionEnvironment& env, const AllocationHistory& h,
                                     const std::vector<const Levels*>& parts);
std::vector<Branch> round_branches(const AuctionEnvironment& env, const AllocationHistory& h,
                                   const std::vector<const Levels*>& parts, bool allow_closed_form = true);

// Levels of participant p with positive posterior mass given the branch.
std::vector<int> marginal_levels(const Branch& br, const std::vector<const Levels*>& parts, int p);

}  // namespace seqauction
