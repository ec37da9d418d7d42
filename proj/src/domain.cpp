#include "hivabm/domain.hpp"

#include <algorithm>

namespace hivabm {

const char* to_string(PersonType type) {
  switch (type) {
    case PersonType::Fsw: return "fsw";
    case PersonType::Primary: return "primary";
    case PersonType::Secondary: return "secondary";
    case PersonType::ExSecondary: return "exsecondary";
  }
  return "?";
}

const char* to_string(Gender gender) {
  switch (gender) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
  }
  return "?";
}

const char* to_string(PersonState state) {
  switch (state) {
    case PersonState::Uninfected: return "uninfected";
    case PersonState::Infected: return "infected";
  }
  return "?";
}

const char* to_string(InfectionSource source) {
  switch (source) {
    case InfectionSource::SeededAtSetup: return "seeded_at_setup";
    case InfectionSource::FromFsw: return "from_fsw";
    case InfectionSource::FromPrimary: return "from_primary";
    case InfectionSource::FromSecondary: return "from_secondary";
    case InfectionSource::FromExSecondary: return "from_exsecondary";
  }
  return "?";
}

InfectionSource source_from(PersonType type) {
  switch (type) {
    case PersonType::Fsw: return InfectionSource::FromFsw;
    case PersonType::Primary: return InfectionSource::FromPrimary;
    case PersonType::Secondary: return InfectionSource::FromSecondary;
    case PersonType::ExSecondary: return InfectionSource::FromExSecondary;
  }
  return InfectionSource::SeededAtSetup;  // unreachable
}

std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> violations;
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) violations.push_back(message);
  };

  require(cfg.max_fsw >= 0, "max_fsw must be >= 0");
  require(cfg.max_primary >= 0, "max_primary must be >= 0");
  require(cfg.max_secondary >= 0, "max_secondary must be >= 0");
  require(cfg.max_exsecondary >= 0, "max_exsecondary must be >= 0");
  require(cfg.max_infected_fsw >= 0, "max_infected_fsw must be >= 0");
  require(cfg.max_infected_fsw <= cfg.max_fsw,
          "max_infected_fsw must be <= max_fsw");
  require(cfg.tobecoupled >= 0, "tobecoupled must be >= 0");
  require(cfg.tobecoupled <= std::min(cfg.max_primary, cfg.max_secondary),
          "tobecoupled must be <= min(max_primary, max_secondary)");
  require(cfg.couplings_per_month >= 1, "couplings_per_month must be >= 1");
  require(cfg.avg_client_month >= 1, "avg_client_month must be >= 1");
  require(cfg.fsw_preference >= 0.0 && cfg.fsw_preference <= 1.0,
          "fsw_preference must be in [0, 1]");
  require(cfg.transmission_probability >= 0.0 &&
              cfg.transmission_probability <= 1.0,
          "transmission_probability must be in [0, 1]");
  require(cfg.ticks >= 0, "ticks must be >= 0");

  return violations;
}

}  // namespace hivabm
