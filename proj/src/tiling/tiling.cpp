#include "seqauction/tiling/tiling.hpp"

#include <algorithm>

namespace seqauction {

bool Hyperrectangle::contains(const TypePoint& theta) const {
  for (int k = 0; k < dim(); ++k)
    if (theta[k] < lower[k] || theta[k] >= upper[k]) return false;
  return true;
}

TypePoint Hyperrectangle::midpoint() const {
  TypePoint m(dim());
  for (int k = 0; k < dim(); ++k) m[k] = 0.5 * (lower[k] + upper[k]);
  return m;
}

Tiling::Tiling(std::vector<std::vector<double>> breakpoints) : breaks_(std::move(breakpoints)) {
  if (breaks_.empty()) throw ContractViolation("tiling needs at least one axis");
  stride_.assign(breaks_.size(), 1);
  size_ = 1;
  for (int k = dim() - 1; k >= 0; --k) {
    const auto& b = breaks_[k];
    if (b.size() < 2) throw ContractViolation("each axis needs at least two breakpoints");
    for (std::size_t j = 1; j < b.size(); ++j)
      if (!(b[j - 1] < b[j])) throw ContractViolation("breakpoints must be strictly increasing");
    stride_[k] = size_;
    size_ *= static_cast<int>(b.size()) - 1;
  }
}

Tiling Tiling::uniform(const TypeSpace& space, int cells_per_dim) {
  return uniform(space, std::vector<int>(space.dim(), cells_per_dim));
}

Tiling Tiling::uniform(const TypeSpace& space, const std::vector<int>& cells) {
  std::vector<std::vector<double>> br(space.dim());
  for (int k = 0; k < space.dim(); ++k) {
    if (cells[k] < 1) throw ContractViolation("grid size must be positive");
    const double lo = space.lower[k], hi = space.upper[k];
    br[k].resize(cells[k] + 1);
    for (int j = 0; j <= cells[k]; ++j) br[k][j] = lo + (hi - lo) * j / cells[k];
    br[k].back() = hi;
  }
  return Tiling(std::move(br));
}

Hyperrectangle Tiling::tile(int index) const {
  if (index < 0 || index >= size_) throw ContractViolation("tile index out of range");
  Hyperrectangle r{TypePoint(dim()), TypePoint(dim())};
  for (int k = 0; k < dim(); ++k) {
    int j = (index / stride_[k]) % (static_cast<int>(breaks_[k].size()) - 1);
    r.lower[k] = breaks_[k][j];
    r.upper[k] = breaks_[k][j + 1];
  }
  return r;
}

TypePoint Tiling::lower_vertex(int index) const { return tile(index).lower; }

TypeSpace Tiling::space() const {
  std::vector<double> lo(dim()), hi(dim());
  for (int k = 0; k < dim(); ++k) {
    lo[k] = breaks_[k].front();
    hi[k] = breaks_[k].back();
  }
  return TypeSpace(lo, hi);
}

int locate_tile(const Tiling& tiling, const TypePoint& theta) {
  if (static_cast<int>(theta.size()) != tiling.dim()) throw DomainError("type has wrong dimension");
  int index = 0;
  for (int k = 0; k < tiling.dim(); ++k) {
    const auto& b = tiling.breaks_[k];
    if (theta[k] < b.front() || theta[k] > b.back()) throw DomainError("type outside type space");
    int j = static_cast<int>(std::upper_bound(b.begin(), b.end(), theta[k]) - b.begin()) - 1;
    j = std::min(j, static_cast<int>(b.size()) - 2);
    index += j * tiling.stride_[k];
  }
  return index;
}

std::vector<TypePoint> vertices(const Hyperrectangle& tile) {
  const int d = tile.dim();
  if (d < 1) throw ContractViolation("vertices need dimension >= 1");
  std::vector<TypePoint> out;
  out.reserve(std::size_t{1} << d);
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    TypePoint v(d);
    for (int k = 0; k < d; ++k) v[k] = (mask >> (d - 1 - k)) & 1u ? tile.upper[k] : tile.lower[k];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace seqauction
