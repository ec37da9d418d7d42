/*
 * Executable transcription of the model's state and operation predicates,
 * usable both as always-on assertions in tests and as a standalone trace
 * validator. Violations name the schema whose predicate is broken, from the
 * closed set {Fsw, Primary, Secondary, ExSecondary, Partners, Link,
 * SetupInitialPopulation, MakePartners, Coupling, ApplyCondomUsage}.
 */
#pragma once

#include <string>
#include <vector>

#include "hivabm/engine.hpp"

namespace hivabm {
namespace contracts {

struct Violation {
  std::string schema;
  std::string subject;  // "person 12", "pair (3, 507)", "event 4", "world"
  std::string description;
  int tick = 0;

  bool operator==(const Violation&) const = default;
};

// State predicates: per-person type/gender/partner rules, partnership
// disjointness, typing, bounds and reciprocity, and population counts versus
// the configured maxima. Empty result iff the state satisfies every schema.
std::vector<Violation> check_state(const WorldState& world,
                                   const SimConfig& cfg);

// Predicates specific to the freshly set-up state: no partnerships yet,
// exactly the configured FSW infections seeded and nothing else infected.
std::vector<Violation> check_setup(const WorldState& world,
                                   const SimConfig& cfg);

// Predicate specific to the post-partnering state: exactly
// min(tobecoupled, max_primary, max_secondary) partnerships formed.
std::vector<Violation> check_partnerships_formed(const WorldState& world,
                                                 const SimConfig& cfg);

// Event predicates against the pre-event world only: couple typing (male a
// Primary, female his partner, an ExSecondary, or an FSW) and the
// transmission claim (unprotected, discordant pair, the uninfected
// participant infected by the infected one).
std::vector<Violation> check_event_claim(const WorldState& pre,
                                         const CouplingEvent& event,
                                         const SimConfig& cfg);

// Full event check: the claim checks plus the frame condition between pre-
// and post-event worlds (state changes only at the claimed new infection,
// only Uninfected to Infected, with matching provenance; protected or
// transmission-free events change nothing). Precondition: event.tick equals
// pre.tick.
std::vector<Violation> check_event(const WorldState& pre,
                                   const CouplingEvent& event,
                                   const WorldState& post,
                                   const SimConfig& cfg);

struct ValidationReport {
  bool pass = false;
  // Malformed-trace problems that prevent or survive replay: non-monotone
  // event ticks, out-of-range ids, snapshot count mismatches, invalid config.
  std::vector<std::string> structural_errors;
  std::vector<Violation> violations;
  // Replayed counters or final state disagreeing with the recorded ones.
  std::vector<std::string> mismatches;

  // Human-readable report, violations grouped by tick.
  std::string summary() const;
};

// Replays events deterministically from the config: setup and partnership
// formation are reconstructed from the seed, then each month's events are
// checked (check_event_claim per event, capacity and state checks per tick)
// and applied. Pass iff no structural errors, no violations, and the replay
// agrees with the recorded snapshots and final state.
ValidationReport validate_trace(const Trace& trace);

// Core replay shared by the in-memory and file-based validators. Either
// expected output may be null; recorded_snapshots may be empty to skip
// per-tick comparison.
ValidationReport validate_events(
    const SimConfig& cfg, const std::vector<CouplingEvent>& events,
    const std::vector<CounterSnapshot>& recorded_snapshots,
    const WorldState* expected_final_state,
    const CounterSnapshot* expected_final_counters);

}  // namespace contracts
}  // namespace hivabm
