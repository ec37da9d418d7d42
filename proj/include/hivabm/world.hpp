/*
 * World state and coupling events: the data the operation schemas act on.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "hivabm/domain.hpp"

namespace hivabm {

// Canonical id layout of a freshly set-up population: FSWs first (the seeded
// infected ones at the lowest ids), then Primaries, then Secondaries, then
// ExSecondaries, ids dense from 0. Traces reference persons by these ids.
struct PopulationLayout {
  int n_fsw = 0;
  int n_primary = 0;
  int n_secondary = 0;
  int n_exsecondary = 0;

  PersonId fsw_begin() const { return 0; }
  PersonId fsw_end() const { return static_cast<PersonId>(n_fsw); }
  PersonId primary_begin() const { return fsw_end(); }
  PersonId primary_end() const {
    return primary_begin() + static_cast<PersonId>(n_primary);
  }
  PersonId secondary_begin() const { return primary_end(); }
  PersonId secondary_end() const {
    return secondary_begin() + static_cast<PersonId>(n_secondary);
  }
  PersonId exsecondary_begin() const { return secondary_end(); }
  PersonId exsecondary_end() const {
    return exsecondary_begin() + static_cast<PersonId>(n_exsecondary);
  }
  std::size_t total() const {
    return static_cast<std::size_t>(n_fsw) + n_primary + n_secondary +
           n_exsecondary;
  }

  bool operator==(const PopulationLayout&) const = default;
};

// Full simulation state: the population, the committed partnerships formed at
// startup, and the month counter. tick counts completed months; a fresh world
// has tick 0 and events generated during the k-th month carry tick k.
struct WorldState {
  std::vector<Person> persons;  // indexed by PersonId
  std::vector<std::pair<PersonId, PersonId>> partnerships;  // (primary, secondary)
  int tick = 0;
  PopulationLayout layout;

  const Person& person(PersonId id) const { return persons[id]; }
  Person& person(PersonId id) { return persons[id]; }

  bool operator==(const WorldState&) const = default;
};

// One sexual contact: a Primary male with one female agent, the condom
// outcome, and the transmission that happened, if any.
struct CouplingEvent {
  struct Transmission {
    PersonId infected = 0;  // the participant who became infected
    PersonId source = 0;    // the participant who transmitted

    bool operator==(const Transmission&) const = default;
  };

  int tick = 0;
  PersonId male = 0;    // always a Primary
  PersonId female = 0;  // Secondary partner, ExSecondary, or Fsw
  bool protected_act = false;
  std::optional<Transmission> transmission;

  bool operator==(const CouplingEvent&) const = default;
};

}  // namespace hivabm
