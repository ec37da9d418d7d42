#include "hivabm/contracts.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace hivabm {
namespace contracts {
namespace {

std::string person_subject(PersonId id) {
  return "person " + std::to_string(id);
}

std::string pair_subject(PersonId a, PersonId b) {
  return "pair (" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

const char* schema_for(PersonType type) {
  switch (type) {
    case PersonType::Fsw: return "Fsw";
    case PersonType::Primary: return "Primary";
    case PersonType::Secondary: return "Secondary";
    case PersonType::ExSecondary: return "ExSecondary";
  }
  return "Fsw";
}

bool in_range(const WorldState& world, PersonId id) {
  return static_cast<std::size_t>(id) < world.persons.size();
}

// Expected type for an id under the canonical block layout.
PersonType expected_type(const PopulationLayout& layout, PersonId id) {
  if (id < layout.fsw_end()) return PersonType::Fsw;
  if (id < layout.primary_end()) return PersonType::Primary;
  if (id < layout.secondary_end()) return PersonType::Secondary;
  return PersonType::ExSecondary;
}

void check_person(const WorldState& world, const Person& p,
                  std::vector<Violation>& out) {
  const int tick = world.tick;
  const char* schema = schema_for(p.type);
  auto flag = [&](const std::string& description) {
    out.push_back(Violation{schema, person_subject(p.id), description, tick});
  };

  const Gender expected_gender =
      p.type == PersonType::Primary ? Gender::Male : Gender::Female;
  if (p.gender != expected_gender) {
    flag(std::string(to_string(p.type)) + " has gender " +
         to_string(p.gender));
  }

  if (p.type == PersonType::Fsw || p.type == PersonType::ExSecondary) {
    if (p.partner) {
      flag(std::string(to_string(p.type)) + " has a committed partner (" +
           std::to_string(*p.partner) + ")");
    }
  } else if (p.partner) {
    const PersonType partner_type =
        p.type == PersonType::Primary ? PersonType::Secondary
                                      : PersonType::Primary;
    if (!in_range(world, *p.partner)) {
      flag("partner id " + std::to_string(*p.partner) + " out of range");
    } else if (world.person(*p.partner).type != partner_type) {
      flag("partner " + std::to_string(*p.partner) + " is a " +
           to_string(world.person(*p.partner).type) + ", expected " +
           to_string(partner_type));
    }
  }

  if (p.infected() != p.provenance.has_value()) {
    flag(p.infected() ? "infected without provenance"
                      : "uninfected but carries provenance");
  }
  if (p.provenance) {
    const bool seeded = p.provenance->source == InfectionSource::SeededAtSetup;
    if (seeded && p.provenance->tick != 0) {
      flag("seeded infection with tick " +
           std::to_string(p.provenance->tick));
    }
    if (!seeded &&
        (p.provenance->tick < 1 || p.provenance->tick > world.tick)) {
      flag("infection tick " + std::to_string(p.provenance->tick) +
           " outside [1, " + std::to_string(world.tick) + "]");
    }
  }
}

void append(std::vector<Violation>& out, std::vector<Violation> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
}

std::string describe_state_difference(const WorldState& recorded,
                                      const WorldState& replayed) {
  if (recorded.tick != replayed.tick) {
    return "tick is " + std::to_string(recorded.tick) + ", replay has " +
           std::to_string(replayed.tick);
  }
  if (recorded.persons.size() != replayed.persons.size()) {
    return "population size is " + std::to_string(recorded.persons.size()) +
           ", replay has " + std::to_string(replayed.persons.size());
  }
  for (std::size_t i = 0; i < recorded.persons.size(); ++i) {
    if (!(recorded.persons[i] == replayed.persons[i])) {
      return "person " + std::to_string(i) + " differs (recorded state " +
             to_string(recorded.persons[i].state) + ", replayed " +
             to_string(replayed.persons[i].state) + ")";
    }
  }
  if (recorded.partnerships != replayed.partnerships) {
    return "partnership list differs";
  }
  return "layout differs";
}

}  // namespace

std::vector<Violation> check_state(const WorldState& world,
                                   const SimConfig& cfg) {
  std::vector<Violation> out;
  const int tick = world.tick;

  if (world.persons.size() != world.layout.total()) {
    out.push_back(Violation{"SetupInitialPopulation", "world",
                            "person count " +
                                std::to_string(world.persons.size()) +
                                " does not match layout total " +
                                std::to_string(world.layout.total()),
                            tick});
    return out;  // block structure broken; per-person checks unreliable
  }

  // Population counts against the configured maxima.
  const struct {
    const char* schema;
    int actual;
    int configured;
  } counts[] = {
      {"Fsw", world.layout.n_fsw, cfg.max_fsw},
      {"Primary", world.layout.n_primary, cfg.max_primary},
      {"Secondary", world.layout.n_secondary, cfg.max_secondary},
      {"ExSecondary", world.layout.n_exsecondary, cfg.max_exsecondary},
  };
  for (const auto& c : counts) {
    if (c.actual != c.configured) {
      out.push_back(Violation{c.schema, "world",
                              std::string(c.schema) + " count " +
                                  std::to_string(c.actual) +
                                  " does not match configured " +
                                  std::to_string(c.configured),
                              tick});
    }
  }

  for (const Person& p : world.persons) {
    if (static_cast<std::ptrdiff_t>(p.id) != &p - world.persons.data()) {
      out.push_back(Violation{schema_for(p.type), person_subject(p.id),
                              "id does not match storage index", tick});
    }
    if (p.type != expected_type(world.layout, p.id)) {
      out.push_back(
          Violation{schema_for(expected_type(world.layout, p.id)),
                    person_subject(p.id),
                    "type " + std::string(to_string(p.type)) +
                        " outside its layout block (expected " +
                        to_string(expected_type(world.layout, p.id)) + ")",
                    tick});
    }
    check_person(world, p, out);
  }

  // Partners relation: typing, disjointness, reciprocity, count bounds.
  const int max_pairs = std::min(
      {cfg.tobecoupled, world.layout.n_primary, world.layout.n_secondary});
  if (static_cast<int>(world.partnerships.size()) > max_pairs) {
    out.push_back(Violation{"Partners", "world",
                            std::to_string(world.partnerships.size()) +
                                " partnerships exceed bound " +
                                std::to_string(max_pairs),
                            tick});
  }

  std::unordered_map<PersonId, int> membership;
  for (const auto& [p_id, s_id] : world.partnerships) {
    if (!in_range(world, p_id) || !in_range(world, s_id)) {
      out.push_back(Violation{"Partners", pair_subject(p_id, s_id),
                              "member id out of range", tick});
      continue;
    }
    ++membership[p_id];
    ++membership[s_id];
    const Person& p = world.person(p_id);
    const Person& s = world.person(s_id);
    if (p.type != PersonType::Primary || s.type != PersonType::Secondary) {
      out.push_back(Violation{"Partners", pair_subject(p_id, s_id),
                              "pair is (" + std::string(to_string(p.type)) +
                                  ", " + to_string(s.type) +
                                  "), expected (primary, secondary)",
                              tick});
    }
    if (p.partner != s_id || s.partner != p_id) {
      out.push_back(Violation{"Partners", pair_subject(p_id, s_id),
                              "partner fields are not reciprocal", tick});
    }
  }
  for (const auto& [id, uses] : membership) {
    if (uses > 1) {
      out.push_back(Violation{"Partners", person_subject(id),
                              "appears in " + std::to_string(uses) +
                                  " partnerships",
                              tick});
    }
  }
  for (const Person& p : world.persons) {
    if (!p.partner) continue;
    if (p.type != PersonType::Primary && p.type != PersonType::Secondary) {
      continue;  // flagged by check_person
    }
    if (!membership.count(p.id)) {
      out.push_back(Violation{"Partners", person_subject(p.id),
                              "partner field set but no partnership recorded",
                              tick});
    }
  }
  return out;
}

std::vector<Violation> check_setup(const WorldState& world,
                                   const SimConfig& cfg) {
  std::vector<Violation> out;
  auto flag = [&](const std::string& subject, const std::string& description) {
    out.push_back(
        Violation{"SetupInitialPopulation", subject, description, world.tick});
  };

  if (world.tick != 0) {
    flag("world", "freshly set up world has tick " +
                      std::to_string(world.tick));
  }
  if (!world.partnerships.empty()) {
    flag("world", std::to_string(world.partnerships.size()) +
                      " partnerships before make_partners");
  }

  long long infected = 0;
  for (const Person& p : world.persons) {
    if (p.partner) flag(person_subject(p.id), "partnered at setup");
    if (!p.infected()) continue;
    ++infected;
    const bool seeded_fsw =
        p.type == PersonType::Fsw &&
        static_cast<int>(p.id) < cfg.max_infected_fsw;
    if (!seeded_fsw) {
      flag(person_subject(p.id),
           std::string(to_string(p.type)) + " infected at setup");
    } else if (p.provenance &&
               p.provenance->source != InfectionSource::SeededAtSetup) {
      flag(person_subject(p.id), "seeded infection with source " +
                                     std::string(to_string(
                                         p.provenance->source)));
    }
  }
  if (infected != cfg.max_infected_fsw) {
    flag("world", "seeded " + std::to_string(infected) +
                      " infections, configured " +
                      std::to_string(cfg.max_infected_fsw));
  }
  return out;
}

std::vector<Violation> check_partnerships_formed(const WorldState& world,
                                                 const SimConfig& cfg) {
  std::vector<Violation> out;
  const int expected = std::min(
      {cfg.tobecoupled, world.layout.n_primary, world.layout.n_secondary});
  if (static_cast<int>(world.partnerships.size()) != expected) {
    out.push_back(Violation{"MakePartners", "world",
                            "formed " +
                                std::to_string(world.partnerships.size()) +
                                " partnerships, expected " +
                                std::to_string(expected),
                            world.tick});
  }
  return out;
}

std::vector<Violation> check_event_claim(const WorldState& pre,
                                         const CouplingEvent& event,
                                         const SimConfig& cfg) {
  std::vector<Violation> out;
  auto coupling = [&](const std::string& description) {
    out.push_back(Violation{"Coupling", "event", description, event.tick});
  };
  auto link = [&](const std::string& description) {
    out.push_back(Violation{"Link", "event", description, event.tick});
  };
  auto condom = [&](const std::string& description) {
    out.push_back(
        Violation{"ApplyCondomUsage", "event", description, event.tick});
  };

  if (event.tick != pre.tick) {
    coupling("event tick " + std::to_string(event.tick) +
             " does not match world tick " + std::to_string(pre.tick));
  }
  if (!in_range(pre, event.male) || !in_range(pre, event.female)) {
    coupling("participant id out of range");
    return out;  // nothing further is checkable
  }

  const Person& male = pre.person(event.male);
  const Person& female = pre.person(event.female);

  if (male.type != PersonType::Primary) {
    coupling("male participant " + std::to_string(event.male) + " is a " +
             to_string(male.type));
  }
  if (female.gender != Gender::Female) {
    link("female participant " + std::to_string(event.female) +
         " has gender " + to_string(female.gender));
  }

  const bool is_partner = male.partner && *male.partner == event.female;
  switch (female.type) {
    case PersonType::Fsw:
    case PersonType::ExSecondary:
      break;  // always legal targets
    case PersonType::Secondary:
      if (!is_partner) {
        link("female " + std::to_string(event.female) +
             " is a secondary but not the male's committed partner");
      }
      break;
    case PersonType::Primary:
      link("female participant " + std::to_string(event.female) +
           " is a primary");
      break;
  }

  // Hard implications of the two behavioral controls at their endpoints.
  if (cfg.commitment.value() == 100 && !is_partner) {
    coupling("commitment 100 forbids coupling outside the partnership");
  }
  if (cfg.commitment.value() == 0 && is_partner) {
    coupling("commitment 0 forbids coupling with the committed partner");
  }
  if (cfg.condom_usage.value() == 100 && !event.protected_act) {
    condom("condom usage 100 forces a protected act");
  }
  if (cfg.condom_usage.value() == 0 && event.protected_act) {
    condom("condom usage 0 forbids a protected act");
  }

  const bool discordant = male.infected() != female.infected();
  if (event.transmission) {
    const auto& t = *event.transmission;
    if (event.protected_act) {
      condom("transmission claimed on a protected act");
    }
    if (!discordant) {
      condom(male.infected() ? "transmission claimed between two infected"
                             : "transmission claimed between two uninfected");
    } else {
      const PersonId expected_source =
          male.infected() ? event.male : event.female;
      const PersonId expected_target =
          male.infected() ? event.female : event.male;
      if (t.source != expected_source || t.infected != expected_target) {
        condom("transmission direction (source " + std::to_string(t.source) +
               ", infected " + std::to_string(t.infected) +
               ") contradicts pre-event states");
      }
    }
  } else if (!event.protected_act && discordant &&
             cfg.transmission_probability == 1.0) {
    condom("unprotected discordant act with certain transmission claims none");
  }
  return out;
}

std::vector<Violation> check_event(const WorldState& pre,
                                   const CouplingEvent& event,
                                   const WorldState& post,
                                   const SimConfig& cfg) {
  std::vector<Violation> out = check_event_claim(pre, event, cfg);
  auto frame = [&](const std::string& subject,
                   const std::string& description) {
    out.push_back(Violation{"ApplyCondomUsage", subject, description,
                            event.tick});
  };

  if (pre.persons.size() != post.persons.size()) {
    frame("world", "population size changed across the event");
    return out;
  }
  if (pre.partnerships != post.partnerships) {
    frame("world", "partnerships changed across the event");
  }
  if (pre.tick != post.tick) {
    frame("world", "tick changed across the event");
  }

  const bool claims = event.transmission.has_value();
  const PersonId target = claims ? event.transmission->infected : 0;
  for (std::size_t i = 0; i < pre.persons.size(); ++i) {
    const Person& before = pre.persons[i];
    const Person& after = post.persons[i];
    if (claims && static_cast<PersonId>(i) == target) {
      if (before.infected()) {
        frame(person_subject(before.id),
              "claimed new infection of an already infected person");
      }
      if (!after.infected()) {
        frame(person_subject(before.id),
              "claimed infection missing from post-event state");
      } else if (in_range(pre, event.transmission->source)) {
        const InfectionProvenance expected{
            source_from(pre.person(event.transmission->source).type),
            event.tick};
        if (!after.provenance || !(*after.provenance == expected)) {
          frame(person_subject(before.id),
                "post-event provenance does not match the claimed source");
        }
      }
      Person scratch = after;
      scratch.state = before.state;
      scratch.provenance = before.provenance;
      if (!(scratch == before)) {
        frame(person_subject(before.id),
              "fields beyond infection state changed");
      }
    } else if (!(before == after)) {
      frame(person_subject(before.id),
            "state changed for a person the event does not infect");
    }
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << ": " << structural_errors.size()
     << " structural error(s), " << violations.size() << " violation(s), "
     << mismatches.size() << " mismatch(es)\n";
  if (!structural_errors.empty()) {
    os << "structural errors:\n";
    for (const std::string& e : structural_errors) os << "  - " << e << '\n';
  }
  if (!violations.empty()) {
    std::map<int, std::vector<const Violation*>> by_tick;
    for (const Violation& v : violations) by_tick[v.tick].push_back(&v);
    os << "violations:\n";
    for (const auto& [tick, list] : by_tick) {
      os << "  tick " << tick << ":\n";
      for (const Violation* v : list) {
        os << "    - [" << v->schema << "] " << v->subject << ": "
           << v->description << '\n';
      }
    }
  }
  if (!mismatches.empty()) {
    os << "mismatches:\n";
    for (const std::string& m : mismatches) os << "  - " << m << '\n';
  }
  return os.str();
}

ValidationReport validate_events(
    const SimConfig& cfg, const std::vector<CouplingEvent>& events,
    const std::vector<CounterSnapshot>& recorded_snapshots,
    const WorldState* expected_final_state,
    const CounterSnapshot* expected_final_counters) {
  ValidationReport report;

  for (const std::string& problem : validate_config(cfg)) {
    report.structural_errors.push_back("config: " + problem);
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].tick < events[i - 1].tick) {
      report.structural_errors.push_back(
          "event " + std::to_string(i) + ": tick " +
          std::to_string(events[i].tick) + " decreases from " +
          std::to_string(events[i - 1].tick));
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].tick < 1 || events[i].tick > cfg.ticks) {
      report.structural_errors.push_back(
          "event " + std::to_string(i) + ": tick " +
          std::to_string(events[i].tick) + " outside [1, " +
          std::to_string(cfg.ticks) + "]");
    }
  }
  bool compare_snapshots = !recorded_snapshots.empty();
  if (compare_snapshots &&
      recorded_snapshots.size() != static_cast<std::size_t>(cfg.ticks)) {
    report.structural_errors.push_back(
        "trace has " + std::to_string(recorded_snapshots.size()) +
        " snapshots for " + std::to_string(cfg.ticks) + " ticks");
    compare_snapshots = false;
  }
  if (!report.structural_errors.empty()) return report;

  WorldState world = setup_initial_population(cfg);
  Rng rng(cfg.seed);
  append(report.violations, check_state(world, cfg));
  append(report.violations, check_setup(world, cfg));
  make_partners(world, cfg, rng);
  append(report.violations, check_state(world, cfg));
  append(report.violations, check_partnerships_formed(world, cfg));

  std::size_t next = 0;
  for (int month = 1; month <= cfg.ticks; ++month) {
    world.tick = month;
    std::unordered_map<PersonId, int> fsw_load;
    std::unordered_map<PersonId, int> primary_load;

    for (; next < events.size() && events[next].tick == month; ++next) {
      const CouplingEvent& event = events[next];
      std::vector<Violation> claims = check_event_claim(world, event, cfg);
      for (Violation& v : claims) v.subject = "event " + std::to_string(next);
      const bool valid = claims.empty();
      append(report.violations, std::move(claims));
      if (!valid) continue;  // applying a bad claim would corrupt the replay

      if (++primary_load[event.male] > cfg.couplings_per_month) {
        report.violations.push_back(Violation{
            "Coupling", "event " + std::to_string(next),
            "primary " + std::to_string(event.male) + " exceeds " +
                std::to_string(cfg.couplings_per_month) +
                " couplings this tick",
            month});
      }
      if (world.person(event.female).type == PersonType::Fsw &&
          ++fsw_load[event.female] > cfg.avg_client_month) {
        report.violations.push_back(Violation{
            "Coupling", "event " + std::to_string(next),
            "fsw " + std::to_string(event.female) + " exceeds capacity " +
                std::to_string(cfg.avg_client_month) + " this tick",
            month});
      }
      if (event.transmission) {
        Person& target = world.person(event.transmission->infected);
        target.state = PersonState::Infected;
        target.provenance = InfectionProvenance{
            source_from(world.person(event.transmission->source).type),
            month};
      }
    }

    append(report.violations, check_state(world, cfg));
    if (compare_snapshots) {
      const CounterSnapshot replayed = compute_counters(world);
      const CounterSnapshot& recorded = recorded_snapshots[month - 1];
      std::string differing;
      if (recorded.tick != replayed.tick) differing = "tick";
      for (const CounterField& field : counter_fields()) {
        if (recorded.*field.member == replayed.*field.member) continue;
        if (!differing.empty()) differing += ", ";
        differing += field.name;
        differing += " (recorded " + std::to_string(recorded.*field.member) +
                     ", replayed " + std::to_string(replayed.*field.member) +
                     ")";
      }
      if (!differing.empty()) {
        report.mismatches.push_back("tick " + std::to_string(month) +
                                    ": counters differ: " + differing);
      }
    }
  }

  if (expected_final_state && !(world == *expected_final_state)) {
    report.mismatches.push_back(
        "final state: " + describe_state_difference(*expected_final_state,
                                                    world));
  }
  if (expected_final_counters) {
    const CounterSnapshot replayed = compute_counters(world);
    if (!(replayed == *expected_final_counters)) {
      report.mismatches.push_back(
          "final counters differ from the recorded ones");
    }
  }

  report.pass = report.structural_errors.empty() &&
                report.violations.empty() && report.mismatches.empty();
  return report;
}

ValidationReport validate_trace(const Trace& trace) {
  ValidationReport report =
      validate_events(trace.config, trace.events, trace.snapshots,
                      &trace.final_state, nullptr);
  if (trace.seed != trace.config.seed) {
    report.structural_errors.push_back(
        "trace seed " + std::to_string(trace.seed) +
        " differs from config seed " + std::to_string(trace.config.seed));
    report.pass = false;
  }
  return report;
}

}  // namespace contracts
}  // namespace hivabm
