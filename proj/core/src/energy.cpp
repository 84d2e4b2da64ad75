#include "p2pmarket/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace p2pm {

namespace {

void require_finite_nonnegative(Energy value, const char* field, const ProsumerId& id) {
  if (!std::isfinite(value))
    throw ValidationError(std::string(field) + " for prosumer '" + id + "' is not finite");
  if (value < 0.0)
    throw ValidationError(std::string(field) + " for prosumer '" + id + "' is negative (" +
                          std::to_string(value) + ")");
}

}  // namespace

void validate_tariff(const TariffConfig& tariff) {
  if (!std::isfinite(tariff.grid_buy_price) || !std::isfinite(tariff.grid_sell_price))
    throw ValidationError("tariff prices must be finite");
  if (tariff.grid_sell_price < 0.0)
    throw ValidationError("grid_sell_price must be >= 0");
  if (!(tariff.grid_buy_price > tariff.grid_sell_price))
    throw ValidationError("tariff requires grid_buy_price > grid_sell_price (got buy=" +
                          std::to_string(tariff.grid_buy_price) + ", sell=" +
                          std::to_string(tariff.grid_sell_price) + ")");
}

ProsumerSlotState compute_slot_state(const ProsumerId& prosumer_id, Energy demand,
                                     Energy generation) {
  require_finite_nonnegative(demand, "demand", prosumer_id);
  require_finite_nonnegative(generation, "generation", prosumer_id);

  ProsumerSlotState state;
  state.prosumer_id = prosumer_id;
  state.demand = demand;
  state.generation = generation;
  state.consumed = std::min(demand, generation);
  state.surplus = generation - state.consumed;
  state.deficit = demand - state.consumed;
  return state;
}

RolePartition partition_roles(const std::vector<ProsumerSlotState>& states) {
  if (states.empty()) throw ValidationError("partition_roles: no prosumer states given");

  RolePartition roles;
  for (const auto& s : states) {
    const bool fresh = s.surplus > kEnergyTol   ? roles.sellers.insert(s.prosumer_id).second
                       : s.deficit > kEnergyTol ? roles.buyers.insert(s.prosumer_id).second
                                                : roles.neutrals.insert(s.prosumer_id).second;
    const std::size_t seen =
        roles.sellers.count(s.prosumer_id) + roles.buyers.count(s.prosumer_id) +
        roles.neutrals.count(s.prosumer_id);
    if (!fresh || seen > 1)
      throw ValidationError("duplicate prosumer id '" + s.prosumer_id + "' in slot");
  }
  return roles;
}

SlotAggregates aggregate(const std::vector<ProsumerSlotState>& states) {
  SlotAggregates agg;
  for (const auto& s : states) {
    agg.total_surplus += s.surplus;
    agg.total_deficit += s.deficit;
  }
  agg.net_position = agg.total_surplus - agg.total_deficit;
  return agg;
}

}  // namespace p2pm
