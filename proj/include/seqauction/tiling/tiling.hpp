#pragma once

#include <vector>

#include "seqauction/core/types.hpp"

namespace seqauction {

// [lower, upper) componentwise.
struct Hyperrectangle {
  TypePoint lower;
  TypePoint upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const TypePoint& theta) const;
  TypePoint midpoint() const;
};

// Product grid over a type space; tiles are indexed row-major with the last
// coordinate varying fastest. In d = 1 this is a sorted breakpoint list.
class Tiling {
 public:
  Tiling() = default;
  explicit Tiling(std::vector<std::vector<double>> breakpoints);
  static Tiling uniform(const TypeSpace& space, int cells_per_dim);
  static Tiling uniform(const TypeSpace& space, const std::vector<int>& cells);

  int dim() const { return static_cast<int>(breaks_.size()); }
  int size() const { return size_; }
  const std::vector<double>& breakpoints(int axis) const { return breaks_[axis]; }
  Hyperrectangle tile(int index) const;
  TypePoint lower_vertex(int index) const;
  TypeSpace space() const;
  bool operator==(const Tiling& o) const { return breaks_ == o.breaks_; }

 private:
  std::vector<std::vector<double>> breaks_;
  std::vector<int> stride_;
  int size_ = 0;

  friend int locate_tile(const Tiling&, const TypePoint&);
};

// Index of the unique tile containing theta; the upper face of the type space
// belongs to the last tile on that axis.
int locate_tile(const Tiling& tiling, const TypePoint& theta);

// The 2^d corners, ordered by the bit pattern of "upper" choices.
std::vector<TypePoint> vertices(const Hyperrectangle& tile);

}  // namespace seqauction
