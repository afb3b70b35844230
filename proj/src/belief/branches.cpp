#include "seqauction/belief/branches.hpp"

#include <algorithm>
#include <map>

namespace seqauction {

namespace {

double term_prob(Term& t, const std::vector<const Levels*>& parts) {
  double p = t.sign;
  for (std::size_t k = 0; k < parts.size() && p != 0.0; ++k) p *= parts[k]->range(t.f[k].lo, t.f[k].hi);
  t.prob = p;
  return p;
}

void push_term(Branch& br, Term t, const std::vector<const Levels*>& parts) {
  if (term_prob(t, parts) != 0.0) {
    br.prob += t.prob;
    br.terms.push_back(std::move(t));
  }
}

}  // namespace

std::vector<Branch> single_item_branches(const AuctionEnvironment& env, const SingleItemRule& rule,
                                         const std::vector<const Levels*>& parts) {
  const int n = static_cast<int>(parts.size());
  std::vector<Branch> out;
  auto emit = [&](int j, double v, Branch&& br) {
    if (br.prob > kProbTol) {
      br.outcome = env.single_item_outcome(rule, parts[j]->bidder, bid_of(rule, v));
      out.push_back(std::move(br));
    }
  };
  for (int j = 0; j < n; ++j) {
    const Levels& W = *parts[j];
    if (!rule.second_price) {
      for (int l = 0; l < W.size(); ++l) {
        const double v = W.score[l];
        Term t;
        t.f.resize(n);
        for (int k = 0; k < n; ++k)
          t.f[k] = k == j ? Factor{l, l + 1} : Factor{0, k < j ? parts[k]->lb(v) : parts[k]->ub(v)};
        Branch br;
        push_term(br, std::move(t), parts);
        emit(j, v, std::move(br));
      }
      continue;
    }
    std::vector<double> cands;
    for (int k = 0; k < n; ++k)
      if (k != j) cands.insert(cands.end(), parts[k]->score.begin(), parts[k]->score.end());
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (double v : cands) {
      Branch br;
      const Factor above{W.ub(v), W.size()}, at{W.lb(v), W.ub(v)};
      for (const Factor& fj : {above, at}) {
        if (fj.hi <= fj.lo) continue;
        const bool tie = fj.lo == at.lo && fj.hi == at.hi;
        Term plus, minus;
        plus.f.resize(n);
        minus.f.resize(n);
        minus.sign = -1.0;
        for (int k = 0; k < n; ++k) {
          if (k == j) {
            plus.f[k] = minus.f[k] = fj;
            continue;
          }
          const int le = parts[k]->ub(v), lt = parts[k]->lb(v);
          plus.f[k] = Factor{0, tie && k < j ? lt : le};
          minus.f[k] = Factor{0, lt};
        }
        push_term(br, std::move(plus), parts);
        push_term(br, std::move(minus), parts);
      }
      emit(j, v, std::move(br));
    }
  }
  return out;
}

std::vector<Branch> generic_branches(const AuctionEnvironment& env, const AllocationHistory& h,
                                     const std::vector<const Levels*>& parts) {
  const int n = static_cast<int>(parts.size());
  const int q = env.bid_dim(h);
  std::vector<BidVector> bids(env.num_bidders(), BidVector(q, 0.0));
  std::vector<int> idx(n, 0);
  std::map<std::pair<Allocation, std::vector<double>>, Branch> acc;
  while (true) {
    Term t;
    t.f.resize(n);
    for (int k = 0; k < n; ++k) {
      bids[parts[k]->bidder] = parts[k]->bid[idx[k]];
      t.f[k] = Factor{idx[k], idx[k] + 1};
    }
    if (term_prob(t, parts) > 0.0) {
      RoundOutcome o = env.apply(h, bids);
      auto& br = acc[{o.allocation, o.payments}];
      if (br.terms.empty()) br.outcome = std::move(o);
      br.prob += t.prob;
      br.terms.push_back(std::move(t));
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == parts[k]->size()) idx[k--] = 0;
    if (k < 0) break;
  }
  std::vector<Branch> out;
  for (auto& [key, br] : acc)
    if (br.prob > kProbTol) out.push_back(std::move(br));
  return out;
}

std::vector<Branch> round_branches(const AuctionEnvironment& env, const AllocationHistory& h,
                                   const std::vector<const Levels*>& parts, bool allow_closed_form) {
  if (allow_closed_form) {
    if (auto rule = env.single_item(h)) return single_item_branches(env, *rule, parts);
  }
  return generic_branches(env, h, parts);
}

std::vector<int> marginal_levels(const Branch& br, const std::vector<const Levels*>& parts, int p) {
  const Levels& L = *parts[p];
  std::vector<double> diff(L.size() + 1, 0.0);
  for (const Term& t : br.terms) {
    double coef = t.sign;
    for (std::size_t k = 0; k < parts.size(); ++k)
      if (static_cast<int>(k) != p) coef *= parts[k]->range(t.f[k].lo, t.f[k].hi);
    diff[t.f[p].lo] += coef;
    diff[t.f[p].hi] -= coef;
  }
  std::vector<int> out;
  double acc = 0.0;
  for (int l = 0; l < L.size(); ++l) {
    acc += diff[l];
    if (acc * L.mass[l] > 1e-12 * br.prob) out.push_back(l);
  }
  return out;
}

}  // namespace seqauction
