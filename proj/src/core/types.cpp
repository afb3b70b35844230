#include "seqauction/core/types.hpp"

#include <algorithm>
#include <sstream>

namespace seqauction {

TypeSpace::TypeSpace(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty() || lower.size() != upper.size())
    throw ContractViolation("type space needs matching non-empty bounds");
  if (dim() > kMaxTypeDim) throw ContractViolation("type dimension above supported maximum");
  for (int k = 0; k < dim(); ++k)
    if (!(lower[k] < upper[k])) throw ContractViolation("type space lower must be < upper");
}

bool TypeSpace::contains(const TypePoint& theta) const {
  if (static_cast<int>(theta.size()) != dim()) return false;
  for (int k = 0; k < dim(); ++k)
    if (theta[k] < lower[k] || theta[k] > upper[k]) return false;
  return true;
}

double TypeSpace::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= upper[k] - lower[k];
  return v;
}

bool Allocation::has_winner(int bidder) const {
  return std::find(winners.begin(), winners.end(), bidder) != winners.end();
}

AllocationHistory AllocationHistory::extended(const Allocation& x) const {
  AllocationHistory h = *this;
  h.rounds.push_back(x);
  return h;
}

double Affine::at(const TypePoint& theta) const {
  double v = c;
  for (std::size_t k = 0; k < theta.size(); ++k) v += a[k] * theta[k];
  return v;
}

Affine& Affine::operator+=(const Affine& o) {
  for (int k = 0; k < kMaxTypeDim; ++k) a[k] += o.a[k];
  c += o.c;
  return *this;
}

Affine& Affine::operator-=(const Affine& o) {
  for (int k = 0; k < kMaxTypeDim; ++k) a[k] -= o.a[k];
  c -= o.c;
  return *this;
}

Affine Affine::operator*(double s) const {
  Affine r;
  for (int k = 0; k < kMaxTypeDim; ++k) r.a[k] = a[k] * s;
  r.c = c * s;
  return r;
}

std::string to_string(const Allocation& x) {
  std::ostringstream os;
  os << x.kind << ':';
  for (std::size_t k = 0; k < x.winners.size(); ++k) os << (k ? "," : "") << x.winners[k];
  return os.str();
}

}  // namespace seqauction
