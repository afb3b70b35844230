#include "seqauction/env/oracles.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace seqauction {

namespace {

constexpr double kRelTol = 1e-8;

double integrate(auto f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kRelTol);
}

// Survival function of U[lower, upper].
double survival(double t, const SplitAwardSpec& s) {
  return std::clamp((s.upper - t) / (s.upper - s.lower), 0.0, 1.0);
}

double loser_bid(double theta, const SplitAwardSpec& s) {
  const int m = s.bidders - 2;
  const double tail = std::pow(survival(theta, s), m);
  // The ratio vanishes at the top of the support.
  if (tail <= 0.0) return theta * s.cost;
  double num = integrate([&](double t) { return std::pow(survival(t, s), m); }, theta, s.upper);
  return theta * s.cost + s.cost * num / tail;
}

double round1_bid(double theta, const SplitAwardSpec& s) {
  const int n = s.bidders;
  const double dens = 1.0 / (s.upper - s.lower);
  const double tail = std::pow(survival(theta, s), n - 1);
  // One-sided limit at the top: the integrand's weight collapses onto theta.
  if (tail < 1e-12) return loser_bid(s.upper, s);
  double num = integrate(
      [&](double t) { return loser_bid(t, s) * (n - 1) * std::pow(survival(t, s), n - 2) * dens; },
      theta, s.upper);
  return num / tail;
}

}  // namespace

double analytical_sequential_sales(double theta, int round, const SequentialSalesSpec& spec) {
  const int n = spec.bidders, k = spec.goods;
  if (round < 1 || round > k) throw OracleUnavailable("round outside 1..K");
  if (spec.payment == PaymentRule::First)
    return static_cast<double>(n - k) / static_cast<double>(n - round + 1) * theta;
  return static_cast<double>(n - k) / static_cast<double>(n - round) * theta;
}

double analytical_split_award(double theta, SplitStage stage, const SplitAwardSpec& spec) {
  if (!spec.strong_diseconomies())
    throw OracleUnavailable("split-award oracle needs n > 2 and strong diseconomies of scale");
  switch (stage) {
    case SplitStage::Round2Winner:
      return theta * (1.0 - spec.cost);
    case SplitStage::Round2Loser:
      return loser_bid(theta, spec);
    case SplitStage::Round1:
      return round1_bid(theta, spec);
  }
  return 0.0;
}

}  // namespace seqauction
