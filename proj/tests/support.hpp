/*
 * Shared helpers for the test binaries: reference configs, a random
 * small-config generator for property tests, the schema mutation battery,
 * and small file utilities for the CLI/IO tests.
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hivabm/contracts.hpp"
#include "hivabm/engine.hpp"

namespace hivabm::testing {

// The desk-scale reference configuration used by the experiment suite.
// commitment/condom_usage are the swept controls; callers override them.
inline SimConfig desk_config() {
  SimConfig cfg;
  cfg.max_fsw = 100;
  cfg.max_infected_fsw = 5;
  cfg.max_primary = 500;
  cfg.max_secondary = 500;
  cfg.max_exsecondary = 100;
  cfg.tobecoupled = 400;
  cfg.commitment = Percent(50);
  cfg.condom_usage = Percent(0);
  cfg.couplings_per_month = 2;
  cfg.avg_client_month = 10;
  cfg.fsw_preference = 0.5;
  cfg.transmission_probability = 1.0;
  cfg.ticks = 120;
  cfg.seed = 1;
  return cfg;
}

// Uniformly random valid config with total population <= 30 and <= 12 ticks,
// exercising both behavioral controls across their whole range.
inline SimConfig random_small_config(Rng& rng) {
  SimConfig cfg;
  cfg.max_fsw = rng.uniform_int(0, 6);
  cfg.max_infected_fsw =
      cfg.max_fsw == 0 ? 0 : rng.uniform_int(0, cfg.max_fsw);
  cfg.max_primary = rng.uniform_int(0, 10);
  cfg.max_secondary = rng.uniform_int(0, 8);
  cfg.max_exsecondary = rng.uniform_int(0, 6);
  cfg.tobecoupled =
      rng.uniform_int(0, std::min(cfg.max_primary, cfg.max_secondary));
  cfg.commitment = Percent(rng.uniform_int(0, 100));
  cfg.condom_usage = Percent(rng.uniform_int(0, 100));
  cfg.couplings_per_month = rng.uniform_int(1, 3);
  cfg.avg_client_month = rng.uniform_int(1, 4);
  cfg.fsw_preference = rng.uniform_int(0, 100) / 100.0;
  cfg.transmission_probability = rng.uniform_int(0, 100) / 100.0;
  cfg.ticks = rng.uniform_int(0, 12);
  cfg.seed = rng.next_u64();
  return cfg;
}

// One deliberately broken state or event per schema predicate, each checked
// with the matching checker. `violations` holds what the checker reported;
// a battery entry succeeds when at least one violation names its schema.
struct MutationOutcome {
  std::string schema;
  std::string scenario;
  std::vector<contracts::Violation> violations;

  bool triggered() const {
    for (const contracts::Violation& v : violations) {
      if (v.schema == schema) return true;
    }
    return false;
  }
};

inline std::vector<MutationOutcome> mutation_battery() {
  std::vector<MutationOutcome> outcomes;

  SimConfig cfg;
  cfg.max_fsw = 2;
  cfg.max_infected_fsw = 1;
  cfg.max_primary = 3;
  cfg.max_secondary = 3;
  cfg.max_exsecondary = 2;
  cfg.tobecoupled = 2;
  cfg.commitment = Percent(50);
  cfg.condom_usage = Percent(50);
  cfg.ticks = 1;
  cfg.seed = 99;

  Rng rng(cfg.seed);
  WorldState base = setup_initial_population(cfg);
  make_partners(base, cfg, rng);

  auto state_mutation = [&](const char* schema, const char* scenario,
                            auto mutate) {
    WorldState world = base;
    mutate(world);
    outcomes.push_back(
        MutationOutcome{schema, scenario, contracts::check_state(world, cfg)});
  };

  state_mutation("Fsw", "fsw given gender male", [](WorldState& w) {
    w.person(0).gender = Gender::Male;
  });
  state_mutation("Primary", "primary given gender female", [](WorldState& w) {
    w.person(w.layout.primary_begin()).gender = Gender::Female;
  });
  state_mutation("Secondary", "secondary given gender male",
                 [](WorldState& w) {
                   w.person(w.layout.secondary_begin()).gender = Gender::Male;
                 });
  state_mutation("ExSecondary", "exsecondary given a committed partner",
                 [](WorldState& w) {
                   w.person(w.layout.exsecondary_begin()).partner =
                       w.layout.primary_begin();
                 });
  state_mutation("Partners", "one secondary recorded in two partnerships",
                 [](WorldState& w) {
                   const auto [p, s] = w.partnerships.front();
                   PersonId other = w.layout.primary_begin();
                   while (other == p) ++other;
                   w.partnerships.emplace_back(other, s);
                 });

  {
    WorldState world = setup_initial_population(cfg);
    world.person(world.layout.secondary_begin()).state =
        PersonState::Infected;
    world.person(world.layout.secondary_begin()).provenance =
        InfectionProvenance{InfectionSource::SeededAtSetup, 0};
    outcomes.push_back(MutationOutcome{"SetupInitialPopulation",
                                       "secondary infected at setup",
                                       contracts::check_setup(world, cfg)});
  }
  {
    WorldState world = base;
    const auto [p, s] = world.partnerships.back();
    world.person(p).partner.reset();
    world.person(s).partner.reset();
    world.partnerships.pop_back();
    outcomes.push_back(
        MutationOutcome{"MakePartners", "one partnership dropped",
                        contracts::check_partnerships_formed(world, cfg)});
  }

  auto event_mutation = [&](const char* schema, const char* scenario,
                            auto make_event) {
    WorldState world = base;
    world.tick = 1;
    const CouplingEvent event = make_event(world);
    outcomes.push_back(MutationOutcome{
        schema, scenario, contracts::check_event_claim(world, event, cfg)});
  };

  event_mutation("Coupling", "event with a secondary as the male",
                 [](WorldState& w) {
                   CouplingEvent e;
                   e.tick = 1;
                   e.male = w.layout.secondary_begin();
                   e.female = 0;
                   return e;
                 });
  event_mutation("Link", "event targeting an unpartnered secondary",
                 [](WorldState& w) {
                   PersonId loose = w.layout.secondary_begin();
                   while (w.person(loose).partner) ++loose;
                   CouplingEvent e;
                   e.tick = 1;
                   e.male = w.layout.primary_begin();
                   e.female = loose;
                   return e;
                 });
  event_mutation("ApplyCondomUsage",
                 "transmission claimed on a protected act",
                 [](WorldState& w) {
                   CouplingEvent e;
                   e.tick = 1;
                   e.male = w.layout.primary_begin();
                   e.female = 0;  // the seeded infected fsw
                   e.protected_act = true;
                   e.transmission =
                       CouplingEvent::Transmission{e.male, e.female};
                   return e;
                 });

  return outcomes;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Fresh per-call scratch directory under the system temp dir.
inline std::string scratch_dir(const std::string& label) {
  static int counter = 0;
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("hivabm_" + label + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace hivabm::testing
