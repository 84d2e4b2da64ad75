#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "p2pmarket/common.hpp"
#include "p2pmarket/energy.hpp"
#include "p2pmarket/pricing.hpp"

namespace p2pm {

// Enumeration guards: superadditivity is 3^N pair work, the core check
// walks 2^N subsets and balancedness builds a 2^N-1 column LP. Larger
// slots are refused outright rather than silently truncated.
inline constexpr int kMaxSuperadditivityN = 10;
inline constexpr int kMaxCoreN = 20;
inline constexpr int kMaxBalancednessN = 10;

// Bitmask subset over the slot's sorted roster (bit i = roster()[i]).
using SubsetMask = std::uint32_t;

// Sorted prosumer ids; defines the bitmask order used in reports.
std::vector<ProsumerId> sorted_roster(const std::vector<ProsumerSlotState>& states);

// Ids selected by a mask, in roster order.
std::vector<ProsumerId> subset_members(SubsetMask mask, const std::vector<ProsumerId>& roster);

struct CoalitionValue {
  SubsetMask subset = 0;
  Money value = 0.0;
};

// Worth of a prosumer subset: its pooled residual sold to (bought from)
// the grid at the feed-in (grid buy) price. The empty set is worth 0.
// Unknown ids are rejected.
Money coalition_value(const std::set<ProsumerId>& subset,
                      const std::vector<ProsumerSlotState>& states,
                      const TariffConfig& tariff);

enum class CheckStatus { Checked, Skipped };

const char* to_string(CheckStatus status);

struct SuperadditivityViolation {
  SubsetMask subset_a = 0;
  SubsetMask subset_b = 0;
  Money merged_value = 0.0;  // nu(A u B)
  Money split_value = 0.0;   // nu(A) + nu(B)
};

struct SuperadditivityCheck {
  CheckStatus status = CheckStatus::Skipped;
  std::string note;
  bool superadditive = false;
  std::vector<SuperadditivityViolation> violations;  // sorted by (a, b) mask
};

// Exhaustively tests nu(A u B) >= nu(A) + nu(B) over every unordered
// pair of disjoint nonempty subsets. Refuses slots with more than max_n
// prosumers.
SuperadditivityCheck check_superadditivity(const std::vector<ProsumerSlotState>& states,
                                           const TariffConfig& tariff,
                                           int max_n = kMaxSuperadditivityN);

// Monetizes a cleared quote: sellers earn seller_price x surplus,
// buyers owe buyer_price x deficit, neutrals get zero.
PayoffVector allocation_payoffs(const RolePartition& partition, const PriceQuote& quote,
                                const std::vector<ProsumerSlotState>& states);

struct BlockingSubset {
  SubsetMask subset = 0;
  Money payoff_sum = 0.0;  // e(S)
  Money value = 0.0;       // nu(S)
};

struct CoreCheck {
  CheckStatus status = CheckStatus::Skipped;
  std::string note;
  bool core_member = false;
  bool efficient = false;   // sum of payoffs == nu(N) within tolerance
  Money payoff_total = 0.0;
  Money grand_value = 0.0;
  std::vector<BlockingSubset> blocking_subsets;  // sorted by mask
};

// Verifies efficiency and e(S) >= nu(S) for every nonempty subset.
// The payoff vector must be keyed by exactly the slot's prosumer set.
CoreCheck check_core_membership(const PayoffVector& payoffs,
                                const std::vector<ProsumerSlotState>& states,
                                const TariffConfig& tariff, int max_n = kMaxCoreN);

// Constructs a payoff vector that always lies in the core: every
// prosumer is settled at a single per-kWh rate equal to the price the
// grand coalition actually faces at the margin (feed-in when exporting,
// grid buy when importing, mid when balanced).
PayoffVector build_core_witness(const std::vector<ProsumerSlotState>& states,
                                const TariffConfig& tariff);

struct BalancednessCheck {
  CheckStatus status = CheckStatus::Skipped;
  std::string note;
  bool balanced = false;
  Money lp_optimum = 0.0;
  Money grand_value = 0.0;
};

// Solves max sum f(S) nu(S) subject to sum_{S containing n} f(S) = 1
// for every prosumer n and f >= 0, then reports whether the optimum
// stays at or below nu(N). The partition rows already cap each weight
// at one, so no explicit upper bounds are needed.
BalancednessCheck check_balancedness(const std::vector<ProsumerSlotState>& states,
                                     const TariffConfig& tariff,
                                     int max_n = kMaxBalancednessN);

// Outcome of the full per-slot stability audit.
struct StabilityReport {
  std::vector<ProsumerId> roster;
  SuperadditivityCheck superadditivity;
  CoreCheck mid_market_core;  // core membership of the mid-market allocation
  BalancednessCheck balancedness;
  PayoffVector witness_allocation;
  CoreCheck witness_core;
};

}  // namespace p2pm
