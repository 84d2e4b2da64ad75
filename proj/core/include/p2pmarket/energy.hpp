#pragma once

#include <set>
#include <vector>

#include "p2pmarket/common.hpp"

namespace p2pm {

// Grid tariff bounding every trade: prosumers buy residual energy at
// grid_buy_price and sell residual surplus at grid_sell_price (the
// feed-in rate). Cents per kWh.
struct TariffConfig {
  Money grid_buy_price = 0.0;
  Money grid_sell_price = 0.0;
};

// Requires finite prices with grid_buy_price > grid_sell_price >= 0;
// throws ValidationError otherwise.
void validate_tariff(const TariffConfig& tariff);

// One prosumer's energy accounting for one slot. consumed is what the
// prosumer covers from its own panel; surplus and deficit are the
// residuals, at most one of which is nonzero.
struct ProsumerSlotState {
  ProsumerId prosumer_id;
  Energy demand = 0.0;
  Energy generation = 0.0;
  Energy consumed = 0.0;
  Energy surplus = 0.0;
  Energy deficit = 0.0;
};

// consumed = min(demand, generation); surplus/deficit are the leftovers.
// Throws ValidationError on negative or non-finite inputs, naming the
// offending field.
ProsumerSlotState compute_slot_state(const ProsumerId& prosumer_id, Energy demand,
                                     Energy generation);

// Who sells, who buys, who sits out the slot. The three sets are
// pairwise disjoint and together cover every prosumer in the slot.
struct RolePartition {
  std::set<ProsumerId> sellers;
  std::set<ProsumerId> buyers;
  std::set<ProsumerId> neutrals;
};

// surplus > kEnergyTol => seller, deficit > kEnergyTol => buyer, else
// neutral. Duplicate prosumer ids are rejected.
RolePartition partition_roles(const std::vector<ProsumerSlotState>& states);

struct SlotAggregates {
  Energy total_surplus = 0.0;
  Energy total_deficit = 0.0;
  Energy net_position = 0.0;  // total_surplus - total_deficit
};

SlotAggregates aggregate(const std::vector<ProsumerSlotState>& states);

}  // namespace p2pm
