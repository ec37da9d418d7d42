#include "hivabm/metrics.hpp"

namespace hivabm {

CounterSnapshot compute_counters(const WorldState& world) {
  CounterSnapshot snap;
  snap.tick = world.tick;
  for (const Person& p : world.persons) {
    if (p.type == PersonType::ExSecondary) ++snap.noncommitted_secondaries;
    if (!p.infected()) continue;
    ++snap.total_infected;
    const InfectionSource source =
        p.provenance ? p.provenance->source : InfectionSource::SeededAtSetup;
    switch (p.type) {
      case PersonType::Fsw:
        ++snap.infected_fsws;
        if (source == InfectionSource::FromPrimary) ++snap.fsw_back_infected;
        break;
      case PersonType::Primary:
        ++snap.infected_primaries;
        if (source == InfectionSource::FromSecondary) {
          ++snap.primaries_back_infected;
          ++snap.primaries_back_infected_from_secondary;
        } else if (source == InfectionSource::FromExSecondary) {
          ++snap.primaries_back_infected;
          ++snap.primaries_back_infected_from_exsecondary;
        }
        break;
      case PersonType::Secondary:
        ++snap.infected_secondaries;
        break;
      case PersonType::ExSecondary:
        ++snap.noncommitted_infected_secondaries;
        break;
    }
  }
  return snap;
}

const std::array<CounterField, kCounterFieldCount>& counter_fields() {
  static const std::array<CounterField, kCounterFieldCount> fields = {{
      {"infected_fsws", &CounterSnapshot::infected_fsws},
      {"infected_primaries", &CounterSnapshot::infected_primaries},
      {"infected_secondaries", &CounterSnapshot::infected_secondaries},
      {"noncommitted_secondaries", &CounterSnapshot::noncommitted_secondaries},
      {"noncommitted_infected_secondaries",
       &CounterSnapshot::noncommitted_infected_secondaries},
      {"total_infected", &CounterSnapshot::total_infected},
      {"fsw_back_infected", &CounterSnapshot::fsw_back_infected},
      {"primaries_back_infected", &CounterSnapshot::primaries_back_infected},
      {"primaries_back_infected_from_secondary",
       &CounterSnapshot::primaries_back_infected_from_secondary},
      {"primaries_back_infected_from_exsecondary",
       &CounterSnapshot::primaries_back_infected_from_exsecondary},
  }};
  return fields;
}

std::vector<std::string> counter_names() {
  std::vector<std::string> names;
  names.reserve(kCounterFieldCount);
  for (const CounterField& field : counter_fields()) {
    names.emplace_back(field.name);
  }
  return names;
}

int counter_index(const std::string& name) {
  const auto& fields = counter_fields();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (name == fields[i].name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace hivabm
