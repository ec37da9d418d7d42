/*
 * Core agent and configuration types for the four-sub-population HIV
 * transmission model: female sex workers (FSWs), their male clients
 * (primaries), the primaries' committed partners (secondaries), and
 * uncommitted low-risk women (exsecondaries).
 *
 * Invariants that make states of the model well-formed live here; the
 * monthly dynamics live in engine.hpp.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hivabm {

// Dense person identifier, unique within one world. Persons are stored in a
// vector indexed by id, so ids run 0..population-1.
using PersonId = std::uint32_t;

enum class PersonType : std::uint8_t { Fsw, Primary, Secondary, ExSecondary };
enum class Gender : std::uint8_t { Male, Female };
enum class PersonState : std::uint8_t { Uninfected, Infected };

// Sub-population of the transmitting partner, or SeededAtSetup for the
// infections present in the initial population. Recording the source is what
// makes the back-infection counters (fsw_back_infected,
// primaries_back_infected) computable.
enum class InfectionSource : std::uint8_t {
  SeededAtSetup,
  FromFsw,
  FromPrimary,
  FromSecondary,
  FromExSecondary,
};

struct InfectionProvenance {
  InfectionSource source = InfectionSource::SeededAtSetup;
  int tick = 0;  // month of infection; 0 for seeded, >= 1 otherwise

  bool operator==(const InfectionProvenance&) const = default;
};

const char* to_string(PersonType type);
const char* to_string(Gender gender);
const char* to_string(PersonState state);
const char* to_string(InfectionSource source);

// Infection source tag for a transmission coming from a person of this type.
InfectionSource source_from(PersonType type);

// Integer percentage on the model's 0..100 control scale (commitment level,
// condom usage). Construction rejects out-of-range values.
class Percent {
 public:
  Percent() = default;
  explicit Percent(int value) : value_(value) {
    if (value < 0 || value > 100) {
      throw std::out_of_range("Percent value " + std::to_string(value) +
                              " outside [0, 100]");
    }
  }
  int value() const { return value_; }

  bool operator==(const Percent&) const = default;

 private:
  int value_ = 0;
};

struct Person {
  PersonId id = 0;
  PersonType type = PersonType::Fsw;
  Gender gender = Gender::Female;
  PersonState state = PersonState::Uninfected;
  std::optional<PersonId> partner;               // committed partner, if any
  std::optional<InfectionProvenance> provenance; // present iff infected

  bool infected() const { return state == PersonState::Infected; }

  bool operator==(const Person&) const = default;
};

// All parameters of one simulation run. Population sizes and tobecoupled
// mirror the model's global variables; commitment and condom_usage are the
// two behavioral controls; the remaining fields parameterize the monthly
// coupling process.
struct SimConfig {
  int max_primary = 0;
  int max_secondary = 0;
  int max_fsw = 0;
  int max_infected_fsw = 0;
  int max_exsecondary = 0;
  int tobecoupled = 0;

  Percent commitment;
  Percent condom_usage;

  // Coupling events each Primary initiates per month.
  int couplings_per_month = 1;
  // Per-FSW per-month client capacity.
  int avg_client_month = 1;
  // Probability that a defecting coupling targets an FSW rather than an
  // ExSecondary.
  double fsw_preference = 0.5;
  // Per unprotected discordant act. 1.0 reproduces the deterministic rule
  // ("infect the other if one was infected").
  double transmission_probability = 1.0;

  int ticks = 0;  // months to simulate
  std::uint64_t seed = 0;

  bool operator==(const SimConfig&) const = default;
};

// One human-readable violation per broken SimConfig invariant; empty iff the
// config is valid. Violations are data, not failures.
std::vector<std::string> validate_config(const SimConfig& cfg);

}  // namespace hivabm
