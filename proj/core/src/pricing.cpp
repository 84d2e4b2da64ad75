#include "p2pmarket/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "p2pmarket/coalition.hpp"

namespace p2pm {

const char* to_string(PriceCase price_case) {
  switch (price_case) {
    case PriceCase::Balanced: return "balanced";
    case PriceCase::SurplusHeavy: return "surplus_heavy";
    case PriceCase::DeficitHeavy: return "deficit_heavy";
    case PriceCase::NoTrade: return "no_trade";
  }
  return "?";
}

Money mid_price(const TariffConfig& tariff) {
  return (tariff.grid_sell_price + tariff.grid_buy_price) / 2.0;
}

PriceQuote quote_slot(const SlotAggregates& aggregates, const TariffConfig& tariff) {
  const Money mid = mid_price(tariff);
  const Energy surplus = aggregates.total_surplus;
  const Energy deficit = aggregates.total_deficit;

  PriceQuote quote;
  quote.mid_price = mid;
  quote.seller_price = mid;
  quote.buyer_price = mid;

  if (surplus <= kEnergyTol && deficit <= kEnergyTol) {
    quote.price_case = PriceCase::NoTrade;
  } else if (std::fabs(aggregates.net_position) <= kEnergyTol) {
    quote.price_case = PriceCase::Balanced;
  } else if (aggregates.net_position > 0.0) {
    // Sellers move `deficit` kWh at mid and export the rest at the
    // feed-in rate; written as feed-in plus the traded share of the
    // spread so the all-grid limit (deficit -> 0) is exact.
    quote.price_case = PriceCase::SurplusHeavy;
    quote.seller_price =
        tariff.grid_sell_price + deficit * (mid - tariff.grid_sell_price) / surplus;
  } else {
    quote.price_case = PriceCase::DeficitHeavy;
    quote.buyer_price =
        tariff.grid_buy_price + surplus * (mid - tariff.grid_buy_price) / deficit;
  }
  return quote;
}

Settlement settle_slot(const RolePartition& partition,
                       const std::vector<ProsumerSlotState>& states, const PriceQuote& quote,
                       const TariffConfig& tariff) {
  const std::size_t covered =
      partition.sellers.size() + partition.buyers.size() + partition.neutrals.size();
  if (covered != states.size())
    throw ValidationError("settle_slot: partition covers " + std::to_string(covered) +
                          " prosumers but the slot has " + std::to_string(states.size()));
  for (const auto& s : states) {
    if (!partition.sellers.count(s.prosumer_id) && !partition.buyers.count(s.prosumer_id) &&
        !partition.neutrals.count(s.prosumer_id))
      throw ValidationError("settle_slot: prosumer '" + s.prosumer_id +
                            "' is missing from the partition");
  }

  Settlement settlement;
  settlement.payoffs = allocation_payoffs(partition, quote, states);

  const SlotAggregates agg = aggregate(states);
  settlement.grid_energy = agg.net_position;
  settlement.grid_cashflow = tariff.grid_sell_price * std::max(0.0, agg.net_position) -
                             tariff.grid_buy_price * std::max(0.0, -agg.net_position);
  for (const auto& [id, payoff] : settlement.payoffs.payoffs)
    settlement.per_prosumer_cost[id] = -payoff;
  return settlement;
}

}  // namespace p2pm
