/*
 * Per-tick output counters, computed from world state and infection
 * provenance. These are the model's observables: per-sub-population infected
 * counts plus the two back-infection counters that expose the upstream
 * infection flow (FSWs infected by their clients, primaries infected by
 * secondaries/exsecondaries).
 */
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hivabm/world.hpp"

namespace hivabm {

struct CounterSnapshot {
  int tick = 0;
  long long infected_fsws = 0;
  long long infected_primaries = 0;
  // Committed Secondaries only; ExSecondaries are counted separately below.
  long long infected_secondaries = 0;
  long long noncommitted_secondaries = 0;  // ExSecondary population, constant
  long long noncommitted_infected_secondaries = 0;
  long long total_infected = 0;
  // FSWs whose infection came from a Primary.
  long long fsw_back_infected = 0;
  // Primaries whose infection came from a Secondary or an ExSecondary; the
  // next two fields break this down so either reading is recoverable.
  long long primaries_back_infected = 0;
  long long primaries_back_infected_from_secondary = 0;
  long long primaries_back_infected_from_exsecondary = 0;

  bool operator==(const CounterSnapshot&) const = default;
};

CounterSnapshot compute_counters(const WorldState& world);

// Canonical counter field table: name plus accessor, in the fixed order used
// by every CSV column list, the sweep aggregates, and the SVG metric lookup.
// "tick" is not a counter and is handled separately by the CSV writers.
struct CounterField {
  const char* name;
  long long CounterSnapshot::* member;
};

inline constexpr std::size_t kCounterFieldCount = 10;
const std::array<CounterField, kCounterFieldCount>& counter_fields();

// Names from counter_fields(), in order.
std::vector<std::string> counter_names();

// Index into counter_fields() for a metric name; -1 if unknown.
int counter_index(const std::string& name);

}  // namespace hivabm
