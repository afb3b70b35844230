#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqauction {

// Environments with affine valuations need at most this many type coordinates.
inline constexpr int kMaxTypeDim = 4;

using TypePoint = std::vector<double>;
using BidVector = std::vector<double>;

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class GameOver : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TypeSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  TypeSpace() = default;
  TypeSpace(std::vector<double> lo, std::vector<double> hi);
  static TypeSpace interval(double lo, double hi) { return TypeSpace({lo}, {hi}); }

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const TypePoint& theta) const;
  double volume() const;
};

// Award of one round. `kind` is an environment label (e.g. split vs sole);
// `winners` lists the bidder receiving each awarded unit.
struct Allocation {
  int kind = 0;
  std::vector<int> winners;

  bool empty() const { return winners.empty(); }
  bool has_winner(int bidder) const;
  auto operator<=>(const Allocation&) const = default;
  bool operator==(const Allocation&) const = default;
};

// Payments are money paid by each bidder; a negative entry is money received.
struct RoundOutcome {
  Allocation allocation;
  std::vector<double> payments;
};

struct AllocationHistory {
  std::vector<Allocation> rounds;

  int round() const { return static_cast<int>(rounds.size()); }
  AllocationHistory extended(const Allocation& x) const;
  bool operator==(const AllocationHistory&) const = default;
};

// v(theta) = a . theta + c
struct Affine {
  std::array<double, kMaxTypeDim> a{};
  double c = 0.0;

  double at(const TypePoint& theta) const;
  double at(double theta) const { return a[0] * theta + c; }
  Affine& operator+=(const Affine& o);
  Affine& operator-=(const Affine& o);
  Affine operator*(double s) const;
  Affine operator+(const Affine& o) const { Affine r = *this; r += o; return r; }
};

std::string to_string(const Allocation& x);

}  // namespace seqauction
