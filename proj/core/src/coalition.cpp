#include "p2pmarket/coalition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "p2pmarket/lp.hpp"

namespace p2pm {

namespace {

// Net positions z(S) for every subset, built incrementally from each
// mask's lowest bit.
std::vector<double> net_positions(const std::vector<ProsumerSlotState>& ordered) {
  const std::size_t n = ordered.size();
  std::vector<double> z(std::size_t(1) << n, 0.0);
  for (SubsetMask mask = 1; mask < z.size(); ++mask) {
    const int low = std::countr_zero(mask);
    z[mask] = z[mask & (mask - 1)] + (ordered[low].surplus - ordered[low].deficit);
  }
  return z;
}

double value_of(double z, const TariffConfig& tariff) {
  return tariff.grid_sell_price * std::max(0.0, z) - tariff.grid_buy_price * std::max(0.0, -z);
}

// States reordered to match the sorted roster.
std::vector<ProsumerSlotState> order_by_roster(const std::vector<ProsumerSlotState>& states,
                                               const std::vector<ProsumerId>& roster) {
  std::vector<ProsumerSlotState> ordered;
  ordered.reserve(roster.size());
  for (const auto& id : roster) {
    for (const auto& s : states)
      if (s.prosumer_id == id) {
        ordered.push_back(s);
        break;
      }
  }
  return ordered;
}

}  // namespace

const char* to_string(CheckStatus status) {
  return status == CheckStatus::Checked ? "checked" : "skipped";
}

std::vector<ProsumerId> sorted_roster(const std::vector<ProsumerSlotState>& states) {
  std::vector<ProsumerId> roster;
  roster.reserve(states.size());
  for (const auto& s : states) roster.push_back(s.prosumer_id);
  std::sort(roster.begin(), roster.end());
  if (std::adjacent_find(roster.begin(), roster.end()) != roster.end())
    throw ValidationError("duplicate prosumer ids in slot");
  return roster;
}

std::vector<ProsumerId> subset_members(SubsetMask mask, const std::vector<ProsumerId>& roster) {
  std::vector<ProsumerId> members;
  for (std::size_t i = 0; i < roster.size(); ++i)
    if (mask & (SubsetMask(1) << i)) members.push_back(roster[i]);
  return members;
}

Money coalition_value(const std::set<ProsumerId>& subset,
                      const std::vector<ProsumerSlotState>& states,
                      const TariffConfig& tariff) {
  validate_tariff(tariff);
  double z = 0.0;
  for (const auto& id : subset) {
    const auto it = std::find_if(states.begin(), states.end(),
                                 [&](const auto& s) { return s.prosumer_id == id; });
    if (it == states.end())
      throw ValidationError("coalition_value: unknown prosumer id '" + id + "'");
    z += it->surplus - it->deficit;
  }
  return value_of(z, tariff);
}

SuperadditivityCheck check_superadditivity(const std::vector<ProsumerSlotState>& states,
                                           const TariffConfig& tariff, int max_n) {
  validate_tariff(tariff);
  const auto roster = sorted_roster(states);
  const int n = int(roster.size());
  max_n = std::min(max_n, kMaxSuperadditivityN);
  if (n > max_n)
    throw ValidationError("check_superadditivity: slot has " + std::to_string(n) +
                          " prosumers, above the enumeration cap of " + std::to_string(max_n));

  const auto ordered = order_by_roster(states, roster);
  const auto z = net_positions(ordered);

  SuperadditivityCheck check;
  check.status = CheckStatus::Checked;
  const SubsetMask full = SubsetMask((std::uint64_t(1) << n) - 1);
  for (SubsetMask a = 1; a <= full; ++a) {
    const SubsetMask rest = full & ~a;
    // Submasks of the complement, descending; keep b > a so each
    // unordered pair appears once.
    for (SubsetMask b = rest; b > a; b = (b - 1) & rest) {
      const double merged = value_of(z[a] + z[b], tariff);
      const double split = value_of(z[a], tariff) + value_of(z[b], tariff);
      if (merged < split - kMoneyTol)
        check.violations.push_back({a, b, merged, split});
    }
  }
  std::sort(check.violations.begin(), check.violations.end(),
            [](const auto& l, const auto& r) {
              return l.subset_a != r.subset_a ? l.subset_a < r.subset_a
                                              : l.subset_b < r.subset_b;
            });
  check.superadditive = check.violations.empty();
  return check;
}

PayoffVector allocation_payoffs(const RolePartition& partition, const PriceQuote& quote,
                                const std::vector<ProsumerSlotState>& states) {
  PayoffVector result;
  for (const auto& s : states) {
    Money payoff = 0.0;
    if (partition.sellers.count(s.prosumer_id))
      payoff = quote.seller_price * s.surplus;
    else if (partition.buyers.count(s.prosumer_id))
      payoff = -quote.buyer_price * s.deficit;
    result.payoffs[s.prosumer_id] = payoff;
  }
  return result;
}

CoreCheck check_core_membership(const PayoffVector& payoffs,
                                const std::vector<ProsumerSlotState>& states,
                                const TariffConfig& tariff, int max_n) {
  validate_tariff(tariff);
  const auto roster = sorted_roster(states);
  const int n = int(roster.size());
  max_n = std::min(max_n, kMaxCoreN);
  if (n > max_n)
    throw ValidationError("check_core_membership: slot has " + std::to_string(n) +
                          " prosumers, above the enumeration cap of " + std::to_string(max_n));
  if (payoffs.payoffs.size() != roster.size())
    throw ValidationError("check_core_membership: payoff vector has " +
                          std::to_string(payoffs.payoffs.size()) + " entries for " +
                          std::to_string(roster.size()) + " prosumers");
  for (const auto& id : roster)
    if (!payoffs.payoffs.count(id))
      throw ValidationError("check_core_membership: payoff vector is missing prosumer '" + id +
                            "'");

  const auto ordered = order_by_roster(states, roster);
  const auto z = net_positions(ordered);

  // e(S) by the same lowest-bit recurrence as z(S).
  std::vector<double> e(z.size(), 0.0);
  for (SubsetMask mask = 1; mask < e.size(); ++mask) {
    const int low = std::countr_zero(mask);
    e[mask] = e[mask & (mask - 1)] + payoffs.payoffs.at(roster[low]);
  }

  CoreCheck check;
  check.status = CheckStatus::Checked;
  const SubsetMask full = SubsetMask((std::uint64_t(1) << n) - 1);
  check.payoff_total = e[full];
  check.grand_value = value_of(z[full], tariff);
  check.efficient = std::fabs(check.payoff_total - check.grand_value) <= kMoneyTol;
  for (SubsetMask mask = 1; mask <= full; ++mask) {
    const double nu = value_of(z[mask], tariff);
    if (e[mask] < nu - kMoneyTol) check.blocking_subsets.push_back({mask, e[mask], nu});
  }
  check.core_member = check.efficient && check.blocking_subsets.empty();
  return check;
}

PayoffVector build_core_witness(const std::vector<ProsumerSlotState>& states,
                                const TariffConfig& tariff) {
  validate_tariff(tariff);
  const SlotAggregates agg = aggregate(states);
  Money rate = mid_price(tariff);
  if (agg.net_position > kEnergyTol)
    rate = tariff.grid_sell_price;
  else if (agg.net_position < -kEnergyTol)
    rate = tariff.grid_buy_price;

  PayoffVector witness;
  for (const auto& s : states)
    witness.payoffs[s.prosumer_id] = rate * (s.surplus - s.deficit);
  return witness;
}

BalancednessCheck check_balancedness(const std::vector<ProsumerSlotState>& states,
                                     const TariffConfig& tariff, int max_n) {
  validate_tariff(tariff);
  const auto roster = sorted_roster(states);
  const int n = int(roster.size());
  max_n = std::min(max_n, kMaxBalancednessN);
  if (n > max_n)
    throw ValidationError("check_balancedness: slot has " + std::to_string(n) +
                          " prosumers, above the LP cap of " + std::to_string(max_n));

  const auto ordered = order_by_roster(states, roster);
  const auto z = net_positions(ordered);
  const SubsetMask full = SubsetMask((std::uint64_t(1) << n) - 1);

  BalancednessCheck check;
  check.grand_value = value_of(z[full], tariff);

  // One weight per nonempty subset; one partition-of-unity row per
  // prosumer.
  LinearProgram lp;
  lp.sense = LpSense::Maximize;
  lp.objective.resize(full);
  for (SubsetMask mask = 1; mask <= full; ++mask)
    lp.objective[mask - 1] = value_of(z[mask], tariff);
  lp.constraint_matrix.assign(std::size_t(n), std::vector<double>(full, 0.0));
  for (int i = 0; i < n; ++i)
    for (SubsetMask mask = 1; mask <= full; ++mask)
      if (mask & (SubsetMask(1) << i)) lp.constraint_matrix[std::size_t(i)][mask - 1] = 1.0;
  lp.rhs.assign(std::size_t(n), 1.0);
  lp.row_kinds.assign(std::size_t(n), RowKind::Equal);

  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw InternalError(std::string("check_balancedness: LP reported ") +
                        to_string(sol.status) +
                        " but singleton weights are always feasible");

  check.status = CheckStatus::Checked;
  check.lp_optimum = sol.objective_value;
  check.balanced = sol.objective_value <= check.grand_value + kMoneyTol;
  return check;
}

}  // namespace p2pm
