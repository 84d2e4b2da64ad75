#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace p2pm {

// Energies are kWh, prices cents/kWh, money plain cents.
using Energy = double;
using Money = double;
using ProsumerId = std::string;

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// kWh magnitudes at or below this count as zero when classifying
// sellers and buyers. Trace energies are decimal fractions of a kWh,
// orders of magnitude above it.
inline constexpr double kEnergyTol = 1e-9;

// Absolute tolerance for monetary comparisons, in cents. Slot sums stay
// below ~1e4 cents, so absolute comparison is safe.
inline constexpr double kMoneyTol = 1e-6;

// Bad user input: files, flags, argument preconditions. Messages name
// the offending field or source location.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A consistency check the implementation itself must uphold failed.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Per-prosumer monetary payoffs for one slot, in cents. Sellers carry
// positive entries, buyers negative ones; the entries sum to the
// coalition's residual grid cashflow because internal transfers cancel.
struct PayoffVector {
  std::map<ProsumerId, Money> payoffs;

  Money total() const {
    Money sum = 0.0;
    for (const auto& [id, value] : payoffs) sum += value;
    return sum;
  }
};

}  // namespace p2pm
