#pragma once

#include <map>
#include <vector>

#include "p2pmarket/common.hpp"
#include "p2pmarket/energy.hpp"

namespace p2pm {

enum class PriceCase { Balanced, SurplusHeavy, DeficitHeavy, NoTrade };

const char* to_string(PriceCase price_case);

// Cleared trade prices for one slot. Both prices always lie inside
// [grid_sell_price, grid_buy_price]; in the Balanced and NoTrade cases
// they both equal the mid price.
struct PriceQuote {
  PriceCase price_case = PriceCase::NoTrade;
  Money mid_price = 0.0;
  Money seller_price = 0.0;
  Money buyer_price = 0.0;
};

// Arithmetic mean of the grid buy and sell prices.
Money mid_price(const TariffConfig& tariff);

// Case selection on the slot's net position:
//  - both totals ~0                -> NoTrade, both prices mid
//  - |net| <= kEnergyTol           -> Balanced, both prices mid
//  - net > 0 (surplus-heavy)       -> buyers pay mid; sellers get a
//    volume-weighted blend of mid (the cross-traded deficit) and the
//    feed-in price (the residual exported to the grid)
//  - net < 0 (deficit-heavy)       -> sellers get mid; buyers pay the
//    blend of mid (the cross-traded surplus) and the grid buy price
//    (the residual imported from the grid)
PriceQuote quote_slot(const SlotAggregates& aggregates, const TariffConfig& tariff);

// Monetary outcome of one slot: per-prosumer payoffs plus the
// coalition's residual exchange with the grid.
struct Settlement {
  PayoffVector payoffs;
  Energy grid_energy = 0.0;   // + coalition exports, - imports
  Money grid_cashflow = 0.0;  // + coalition receives
  std::map<ProsumerId, Money> per_prosumer_cost;  // -payoff; buyers positive
};

// Applies the quote to every prosumer: sellers earn seller_price x
// surplus, buyers pay buyer_price x deficit, neutrals settle at zero.
// The payoffs sum to the grid cashflow. Throws ValidationError when the
// partition does not cover exactly the given states.
Settlement settle_slot(const RolePartition& partition,
                       const std::vector<ProsumerSlotState>& states, const PriceQuote& quote,
                       const TariffConfig& tariff);

}  // namespace p2pm
