#include "p2pmarket/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "p2pmarket/time.hpp"

namespace p2pm {

namespace {

std::vector<ProsumerSlotState> slot_states(const TraceSlot& slot) {
  std::vector<ProsumerSlotState> states;
  states.reserve(slot.readings.size());
  for (const auto& [id, reading] : slot.readings)
    states.push_back(compute_slot_state(id, reading.demand_kwh, reading.pv_kwh));
  return states;
}

int resolve_threads(int threads, std::size_t work_items) {
  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  return int(std::min<std::size_t>(std::size_t(threads), std::max<std::size_t>(work_items, 1)));
}

// Applies fn to every slot index on a small worker pool; results land in
// index order regardless of scheduling.
void parallel_slots(std::size_t count, int threads,
                    const std::function<void(std::size_t)>& fn) {
  threads = resolve_threads(threads, count);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void accumulate_costs(SimulationReport& report, const TraceSet& traces, Timestamp ts,
                      const std::map<ProsumerId, Money>& slot_cost) {
  const std::string day = civil_date(ts, traces.utc_offset_minutes);
  for (const auto& [id, cost] : slot_cost) {
    report.per_prosumer_total_cost[id] += cost;
    report.per_day_cost[id][day] += cost;
  }
}

}  // namespace

const char* to_string(Scheme scheme) { return scheme == Scheme::P2P ? "p2p" : "fit"; }

void validate_traces(const TraceSet& traces) {
  if (traces.slot_minutes <= 0) throw ValidationError("slot_minutes must be positive");
  if (!std::is_sorted(traces.roster.begin(), traces.roster.end()) ||
      std::adjacent_find(traces.roster.begin(), traces.roster.end()) != traces.roster.end())
    throw ValidationError("trace roster must be sorted and duplicate-free");
  const Timestamp step = Timestamp(traces.slot_minutes) * 60;
  for (std::size_t i = 0; i < traces.slots.size(); ++i) {
    const TraceSlot& slot = traces.slots[i];
    if (i > 0) {
      const Timestamp prev = traces.slots[i - 1].timestamp;
      if (slot.timestamp != prev + step)
        throw ValidationError("slots are not uniformly spaced: " + format_timestamp(prev) +
                              " is followed by " + format_timestamp(slot.timestamp) +
                              " (expected " + format_timestamp(prev + step) + ")");
    }
    if (slot.readings.size() != traces.roster.size())
      throw ValidationError("slot " + format_timestamp(slot.timestamp) + " has " +
                            std::to_string(slot.readings.size()) + " readings for a roster of " +
                            std::to_string(traces.roster.size()));
    for (const auto& id : traces.roster) {
      const auto it = slot.readings.find(id);
      if (it == slot.readings.end())
        throw ValidationError("slot " + format_timestamp(slot.timestamp) +
                              " is missing prosumer '" + id + "'");
      if (!std::isfinite(it->second.demand_kwh) || it->second.demand_kwh < 0.0)
        throw ValidationError("slot " + format_timestamp(slot.timestamp) + ": demand of '" + id +
                              "' must be finite and >= 0");
      if (!std::isfinite(it->second.pv_kwh) || it->second.pv_kwh < 0.0)
        throw ValidationError("slot " + format_timestamp(slot.timestamp) + ": pv of '" + id +
                              "' must be finite and >= 0");
    }
  }
}

SimulationReport run_p2p(const TraceSet& traces, const TariffConfig& tariff, int threads) {
  validate_traces(traces);
  validate_tariff(tariff);

  SimulationReport report;
  report.scheme = Scheme::P2P;
  report.roster = traces.roster;
  for (const auto& id : traces.roster) report.per_prosumer_total_cost[id] = 0.0;
  report.p2p_slots.resize(traces.slots.size());

  parallel_slots(traces.slots.size(), threads, [&](std::size_t i) {
    const TraceSlot& slot = traces.slots[i];
    try {
      const auto states = slot_states(slot);
      const RolePartition roles = partition_roles(states);
      const SlotAggregates agg = aggregate(states);
      const PriceQuote quote = quote_slot(agg, tariff);
      P2pSlotRecord& rec = report.p2p_slots[i];
      rec.timestamp = slot.timestamp;
      rec.aggregates = agg;
      rec.quote = quote;
      rec.settlement = settle_slot(roles, states, quote, tariff);
    } catch (const ValidationError& e) {
      throw ValidationError("slot " + format_timestamp(slot.timestamp) + ": " + e.what());
    }
  });

  for (const auto& rec : report.p2p_slots)
    accumulate_costs(report, traces, rec.timestamp, rec.settlement.per_prosumer_cost);
  return report;
}

SimulationReport run_fit(const TraceSet& traces, const TariffConfig& tariff, int threads) {
  validate_traces(traces);
  validate_tariff(tariff);

  SimulationReport report;
  report.scheme = Scheme::FiT;
  report.roster = traces.roster;
  for (const auto& id : traces.roster) report.per_prosumer_total_cost[id] = 0.0;
  report.fit_slots.resize(traces.slots.size());

  parallel_slots(traces.slots.size(), threads, [&](std::size_t i) {
    const TraceSlot& slot = traces.slots[i];
    try {
      FitSlotRecord& rec = report.fit_slots[i];
      rec.timestamp = slot.timestamp;
      for (const auto& state : slot_states(slot))
        rec.cost_cents[state.prosumer_id] = tariff.grid_buy_price * state.deficit -
                                            tariff.grid_sell_price * state.surplus;
    } catch (const ValidationError& e) {
      throw ValidationError("slot " + format_timestamp(slot.timestamp) + ": " + e.what());
    }
  });

  for (const auto& rec : report.fit_slots)
    accumulate_costs(report, traces, rec.timestamp, rec.cost_cents);
  return report;
}

SavingsReport compare(const SimulationReport& p2p, const SimulationReport& fit) {
  if (p2p.scheme != Scheme::P2P || fit.scheme != Scheme::FiT)
    throw ValidationError("compare: expected a P2P report and a FiT report, in that order");
  if (p2p.roster != fit.roster)
    throw ValidationError("compare: reports cover different prosumer rosters");
  const auto timestamps = [](const SimulationReport& r) {
    std::vector<Timestamp> ts;
    for (const auto& s : r.p2p_slots) ts.push_back(s.timestamp);
    for (const auto& s : r.fit_slots) ts.push_back(s.timestamp);
    return ts;
  };
  if (timestamps(p2p) != timestamps(fit))
    throw ValidationError("compare: reports cover different slot ranges");

  SavingsReport savings;
  savings.roster = p2p.roster;
  for (const auto& id : savings.roster) {
    const Money fit_cost = fit.per_prosumer_total_cost.at(id);
    const Money p2p_cost = p2p.per_prosumer_total_cost.at(id);
    const Money saved = fit_cost - p2p_cost;
    savings.absolute_saving[id] = saved;
    savings.percent_saving[id] = fit_cost > 0.0 ? 100.0 * saved / fit_cost : 0.0;

    const auto& fit_days = fit.per_day_cost.at(id);
    const auto& p2p_days = p2p.per_day_cost.at(id);
    for (const auto& [day, cost] : fit_days)
      savings.per_day_saving[id][day] = cost - p2p_days.at(day);
  }
  return savings;
}

std::vector<SlotStabilityReport> run_stability_audit(const TraceSet& traces,
                                                     const TariffConfig& tariff,
                                                     const SlotFilter& filter,
                                                     const AuditCaps& caps) {
  validate_traces(traces);
  validate_tariff(tariff);

  const int superadd_cap = std::min(caps.max_superadditivity_n, kMaxSuperadditivityN);
  const int core_cap = std::min(caps.max_core_n, kMaxCoreN);
  const int lp_cap = std::min(caps.max_balancedness_n, kMaxBalancednessN);

  std::vector<SlotStabilityReport> reports;
  for (const TraceSlot& slot : traces.slots) {
    if (filter && !filter(slot.timestamp)) continue;

    SlotStabilityReport entry;
    entry.timestamp = slot.timestamp;
    StabilityReport& rep = entry.report;

    const auto states = slot_states(slot);
    rep.roster = sorted_roster(states);
    const int n = int(rep.roster.size());

    if (n <= superadd_cap) {
      rep.superadditivity = check_superadditivity(states, tariff, superadd_cap);
    } else {
      rep.superadditivity.status = CheckStatus::Skipped;
      rep.superadditivity.note = "slot has " + std::to_string(n) +
                                 " prosumers, above the superadditivity cap of " +
                                 std::to_string(superadd_cap);
    }

    const RolePartition roles = partition_roles(states);
    const PriceQuote quote = quote_slot(aggregate(states), tariff);
    const PayoffVector mid_market = allocation_payoffs(roles, quote, states);
    rep.witness_allocation = build_core_witness(states, tariff);
    if (n <= core_cap) {
      rep.mid_market_core = check_core_membership(mid_market, states, tariff, core_cap);
      rep.witness_core = check_core_membership(rep.witness_allocation, states, tariff, core_cap);
    } else {
      const std::string note = "slot has " + std::to_string(n) +
                               " prosumers, above the core enumeration cap of " +
                               std::to_string(core_cap);
      rep.mid_market_core.status = CheckStatus::Skipped;
      rep.mid_market_core.note = note;
      rep.witness_core.status = CheckStatus::Skipped;
      rep.witness_core.note = note;
    }

    if (n <= lp_cap) {
      rep.balancedness = check_balancedness(states, tariff, lp_cap);
    } else {
      rep.balancedness.status = CheckStatus::Skipped;
      rep.balancedness.note = "slot has " + std::to_string(n) +
                              " prosumers, above the balancedness LP cap of " +
                              std::to_string(lp_cap);
    }

    reports.push_back(std::move(entry));
  }
  return reports;
}

}  // namespace p2pm
