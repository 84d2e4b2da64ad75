#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "p2pmarket/coalition.hpp"
#include "p2pmarket/common.hpp"
#include "p2pmarket/energy.hpp"
#include "p2pmarket/pricing.hpp"

namespace p2pm {

struct SlotReading {
  Energy demand_kwh = 0.0;
  Energy pv_kwh = 0.0;
};

struct TraceSlot {
  Timestamp timestamp = 0;
  std::map<ProsumerId, SlotReading> readings;
};

// Uniformly spaced readings for a fixed prosumer roster. Slots are
// atomic and independent (no storage carries energy across them).
// utc_offset_minutes only affects per-day cost bucketing.
struct TraceSet {
  int slot_minutes = 15;
  int utc_offset_minutes = 0;
  std::vector<ProsumerId> roster;  // sorted
  std::vector<TraceSlot> slots;
};

// Strictly increasing timestamps spaced slot_minutes apart, identical
// roster in every slot, nonnegative finite energies. Throws
// ValidationError naming the offending slot.
void validate_traces(const TraceSet& traces);

enum class Scheme { P2P, FiT };

const char* to_string(Scheme scheme);

struct P2pSlotRecord {
  Timestamp timestamp = 0;
  SlotAggregates aggregates;
  PriceQuote quote;
  Settlement settlement;
};

struct FitSlotRecord {
  Timestamp timestamp = 0;
  std::map<ProsumerId, Money> cost_cents;
};

struct SimulationReport {
  Scheme scheme = Scheme::P2P;
  std::vector<ProsumerId> roster;
  std::map<ProsumerId, Money> per_prosumer_total_cost;            // cents
  std::map<ProsumerId, std::map<std::string, Money>> per_day_cost;  // id -> YYYY-MM-DD
  std::vector<P2pSlotRecord> p2p_slots;  // filled when scheme == P2P
  std::vector<FitSlotRecord> fit_slots;  // filled when scheme == FiT
};

// Runs the cooperative scheme slot by slot: states -> roles ->
// aggregates -> quote -> settlement. threads = 0 picks the hardware
// concurrency; slots are processed in parallel but assembled in trace
// order, so output is deterministic.
SimulationReport run_p2p(const TraceSet& traces, const TariffConfig& tariff, int threads = 0);

// Baseline: every prosumer trades only with the grid, paying
// grid_buy_price for deficits and earning grid_sell_price for surplus.
SimulationReport run_fit(const TraceSet& traces, const TariffConfig& tariff, int threads = 0);

struct SavingsReport {
  std::vector<ProsumerId> roster;
  std::map<ProsumerId, Money> absolute_saving;  // fit cost - p2p cost, cents
  std::map<ProsumerId, double> percent_saving;  // 100 x absolute / fit when fit > 0
  std::map<ProsumerId, std::map<std::string, Money>> per_day_saving;
};

// Requires the two reports to cover the same roster and slot range.
SavingsReport compare(const SimulationReport& p2p, const SimulationReport& fit);

struct AuditCaps {
  int max_superadditivity_n = kMaxSuperadditivityN;
  int max_core_n = kMaxCoreN;
  int max_balancedness_n = kMaxBalancednessN;
};

// Selects which slots to audit; empty means every slot.
using SlotFilter = std::function<bool(Timestamp)>;

struct SlotStabilityReport {
  Timestamp timestamp = 0;
  StabilityReport report;
};

// Runs the three stability checks plus the witness construction on each
// selected slot. A check whose cap is exceeded is marked Skipped with a
// note; the remaining checks and slots still run.
std::vector<SlotStabilityReport> run_stability_audit(const TraceSet& traces,
                                                     const TariffConfig& tariff,
                                                     const SlotFilter& filter = {},
                                                     const AuditCaps& caps = {});

}  // namespace p2pm
