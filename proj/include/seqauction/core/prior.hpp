#pragma once

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "seqauction/core/types.hpp"

namespace seqauction {

// Prior over a bidder's type space. Only box-shaped events are ever queried,
// because beliefs are unions of tiles.
class Prior {
 public:
  virtual ~Prior() = default;
  virtual std::string family() const = 0;
  virtual const TypeSpace& space() const = 0;
  virtual double density(const TypePoint& theta) const = 0;
  virtual double box_mass(const TypePoint& lo, const TypePoint& hi) const = 0;
  // Draw from the prior conditioned on the box [lo, hi).
  virtual TypePoint sample_box(const TypePoint& lo, const TypePoint& hi,
                               std::mt19937_64& rng) const = 0;
};

class UniformPrior final : public Prior {
 public:
  explicit UniformPrior(TypeSpace space) : space_(std::move(space)) {}
  std::string family() const override { return "uniform"; }
  const TypeSpace& space() const override { return space_; }
  double density(const TypePoint& theta) const override;
  double box_mass(const TypePoint& lo, const TypePoint& hi) const override;
  TypePoint sample_box(const TypePoint& lo, const TypePoint& hi,
                       std::mt19937_64& rng) const override;

 private:
  TypeSpace space_;
};

using PriorFactory = std::function<std::shared_ptr<Prior>(const TypeSpace&)>;

// Family name -> constructor. "uniform" is registered by default.
std::map<std::string, PriorFactory>& prior_registry();
std::shared_ptr<Prior> make_prior(const std::string& family, const TypeSpace& space);

}  // namespace seqauction
