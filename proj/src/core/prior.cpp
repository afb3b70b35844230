#include "seqauction/core/prior.hpp"

#include <algorithm>

namespace seqauction {

double UniformPrior::density(const TypePoint& theta) const {
  return space_.contains(theta) ? 1.0 / space_.volume() : 0.0;
}

double UniformPrior::box_mass(const TypePoint& lo, const TypePoint& hi) const {
  double m = 1.0;
  for (int k = 0; k < space_.dim(); ++k) {
    double a = std::max(lo[k], space_.lower[k]);
    double b = std::min(hi[k], space_.upper[k]);
    if (b <= a) return 0.0;
    m *= (b - a) / (space_.upper[k] - space_.lower[k]);
  }
  return m;
}

TypePoint UniformPrior::sample_box(const TypePoint& lo, const TypePoint& hi,
                                   std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TypePoint theta(space_.dim());
  for (int k = 0; k < space_.dim(); ++k) theta[k] = lo[k] + u(rng) * (hi[k] - lo[k]);
  return theta;
}

std::map<std::string, PriorFactory>& prior_registry() {
  static std::map<std::string, PriorFactory> reg = {
      {"uniform", [](const TypeSpace& s) { return std::make_shared<UniformPrior>(s); }}};
  return reg;
}

std::shared_ptr<Prior> make_prior(const std::string& family, const TypeSpace& space) {
  auto& reg = prior_registry();
  auto it = reg.find(family);
  if (it == reg.end()) throw DomainError("unknown prior family: " + family);
  return it->second(space);
}

}  // namespace seqauction
