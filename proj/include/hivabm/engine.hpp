/*
 * The monthly simulation loop and the four operations it is built from:
 * population setup, partnership formation, coupling-target selection, and
 * the condom-usage/transmission rule. A run is a pure function of its
 * SimConfig (the seed included): identical configs produce identical traces,
 * event for event.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hivabm/domain.hpp"
#include "hivabm/metrics.hpp"
#include "hivabm/rng.hpp"
#include "hivabm/world.hpp"

namespace hivabm {

// Complete deterministic record of one run.
struct Trace {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<CouplingEvent> events;       // non-decreasing in tick
  std::vector<CounterSnapshot> snapshots;  // one per simulated month
  WorldState final_state;
};

// Per-month FSW availability: which FSWs can still accept a client this tick,
// and how many more couplings each can take. Selection reserves capacity
// immediately (every selection is followed by exactly one coupling event).
class FswAvailability {
 public:
  FswAvailability(const WorldState& world, int capacity_per_fsw);

  bool any() const { return !eligible_.empty(); }

  // Uniform pick among FSWs with remaining capacity; decrements the pick's
  // capacity. Call only when any() is true.
  PersonId take(Rng& rng);

 private:
  std::vector<PersonId> eligible_;
  std::vector<int> remaining_;  // aligned with eligible_
};

// Builds the initial population in the canonical id layout: exactly the
// configured number of each sub-population, the first max_infected_fsw FSWs
// seeded infected, everyone else uninfected, nobody partnered, tick 0.
// Throws std::invalid_argument listing the violations if the config is
// invalid.
WorldState setup_initial_population(const SimConfig& cfg);

// Forms exactly min(tobecoupled, max_primary, max_secondary) partnerships
// between Primaries and Secondaries chosen uniformly at random without
// replacement, setting both partner fields reciprocally. Throws
// std::logic_error if the world has already been stepped or partnered.
void make_partners(WorldState& world, const SimConfig& cfg, Rng& rng);

// One coupling-target decision for one Primary. Draws the commitment
// threshold t from [1,100]; commitment >= t means the Primary sticks with his
// committed partner (no target at all if he has none); otherwise he defects:
// an FSW with remaining capacity (probability fsw_preference) or an
// ExSecondary, falling back to the other pool when the chosen one is empty or
// exhausted, and yielding no target when both are. Throws std::logic_error if
// the person is not a Primary.
std::optional<PersonId> select_coupling_target(const Person& primary,
                                               const WorldState& world,
                                               const SimConfig& cfg,
                                               FswAvailability& fsws, Rng& rng);

// One sexual contact between a Primary and a female agent. Draws the condom
// threshold u from [1,100]; condom_usage >= u makes the act protected and
// nothing changes. An unprotected act between a discordant pair infects the
// uninfected participant with probability transmission_probability,
// recording provenance (source's sub-population, current tick). Returns the
// event describing what happened.
CouplingEvent apply_condom_usage(WorldState& world, PersonId male_id,
                                 PersonId female_id, const SimConfig& cfg,
                                 Rng& rng);

// Advances the world one month: increments the tick, then lets each Primary
// in ascending id order make couplings_per_month coupling attempts, with
// per-FSW capacity avg_client_month. Transmissions take effect immediately;
// an agent infected mid-tick can transmit later the same tick. Returns the
// events in generation order. Throws std::logic_error when stepping past
// cfg.ticks.
std::vector<CouplingEvent> step(WorldState& world, const SimConfig& cfg,
                                Rng& rng);

// Full run: setup, make_partners, then cfg.ticks steps, snapshotting the
// counters after each one. The random stream is seeded solely from cfg.seed.
Trace run(const SimConfig& cfg);

}  // namespace hivabm
