#include "hivabm/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hivabm {
namespace {

// Partial Fisher-Yates: after the call, ids[0..k) is a uniform sample of k
// elements without replacement, in random order. One uniform_below per
// position (which is draw-free for the final position of a full shuffle).
void shuffle_prefix(std::vector<PersonId>& ids, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + rng.uniform_below(static_cast<std::uint32_t>(ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
}

Person make_person(PersonId id, PersonType type, Gender gender) {
  Person p;
  p.id = id;
  p.type = type;
  p.gender = gender;
  return p;
}

}  // namespace

FswAvailability::FswAvailability(const WorldState& world,
                                 int capacity_per_fsw) {
  if (capacity_per_fsw <= 0) return;
  eligible_.reserve(world.layout.n_fsw);
  for (PersonId id = world.layout.fsw_begin(); id < world.layout.fsw_end();
       ++id) {
    eligible_.push_back(id);
  }
  remaining_.assign(eligible_.size(), capacity_per_fsw);
}

PersonId FswAvailability::take(Rng& rng) {
  const std::uint32_t pick =
      rng.uniform_below(static_cast<std::uint32_t>(eligible_.size()));
  const PersonId id = eligible_[pick];
  if (--remaining_[pick] == 0) {
    // Swap-remove keeps selection O(1); order among the eligible does not
    // matter because every pick is uniform.
    eligible_[pick] = eligible_.back();
    remaining_[pick] = remaining_.back();
    eligible_.pop_back();
    remaining_.pop_back();
  }
  return id;
}

WorldState setup_initial_population(const SimConfig& cfg) {
  const std::vector<std::string> violations = validate_config(cfg);
  if (!violations.empty()) {
    std::ostringstream message;
    message << "invalid config:";
    for (const std::string& v : violations) message << ' ' << v << ';';
    throw std::invalid_argument(message.str());
  }

  WorldState world;
  world.layout = PopulationLayout{cfg.max_fsw, cfg.max_primary,
                                  cfg.max_secondary, cfg.max_exsecondary};
  world.persons.reserve(world.layout.total());

  for (PersonId id = world.layout.fsw_begin(); id < world.layout.fsw_end();
       ++id) {
    Person p = make_person(id, PersonType::Fsw, Gender::Female);
    if (static_cast<int>(id - world.layout.fsw_begin()) <
        cfg.max_infected_fsw) {
      p.state = PersonState::Infected;
      p.provenance = InfectionProvenance{InfectionSource::SeededAtSetup, 0};
    }
    world.persons.push_back(std::move(p));
  }
  for (PersonId id = world.layout.primary_begin();
       id < world.layout.primary_end(); ++id) {
    world.persons.push_back(make_person(id, PersonType::Primary, Gender::Male));
  }
  for (PersonId id = world.layout.secondary_begin();
       id < world.layout.secondary_end(); ++id) {
    world.persons.push_back(
        make_person(id, PersonType::Secondary, Gender::Female));
  }
  for (PersonId id = world.layout.exsecondary_begin();
       id < world.layout.exsecondary_end(); ++id) {
    world.persons.push_back(
        make_person(id, PersonType::ExSecondary, Gender::Female));
  }
  return world;
}

void make_partners(WorldState& world, const SimConfig& cfg, Rng& rng) {
  if (world.tick != 0 || !world.partnerships.empty()) {
    throw std::logic_error(
        "make_partners: world already stepped or partnered");
  }

  const std::size_t k = static_cast<std::size_t>(std::min(
      {cfg.tobecoupled, world.layout.n_primary, world.layout.n_secondary}));
  if (k == 0) return;

  std::vector<PersonId> primaries;
  primaries.reserve(world.layout.n_primary);
  for (PersonId id = world.layout.primary_begin();
       id < world.layout.primary_end(); ++id) {
    primaries.push_back(id);
  }
  std::vector<PersonId> secondaries;
  secondaries.reserve(world.layout.n_secondary);
  for (PersonId id = world.layout.secondary_begin();
       id < world.layout.secondary_end(); ++id) {
    secondaries.push_back(id);
  }

  shuffle_prefix(primaries, k, rng);
  shuffle_prefix(secondaries, k, rng);

  world.partnerships.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const PersonId p = primaries[i];
    const PersonId s = secondaries[i];
    world.person(p).partner = s;
    world.person(s).partner = p;
    world.partnerships.emplace_back(p, s);
  }
}

std::optional<PersonId> select_coupling_target(const Person& primary,
                                               const WorldState& world,
                                               const SimConfig& cfg,
                                               FswAvailability& fsws,
                                               Rng& rng) {
  if (primary.type != PersonType::Primary) {
    throw std::logic_error("select_coupling_target: person " +
                           std::to_string(primary.id) + " is not a Primary");
  }

  const int t = rng.uniform_int(1, 100);
  if (cfg.commitment.value() >= t) {
    // Committed this month: his partner or nobody.
    return primary.partner;
  }

  // Defection: pick a pool, then a uniform member; fall back to the other
  // pool when the preferred one has nobody available.
  const bool prefer_fsw = rng.next_double() < cfg.fsw_preference;
  const int n_exsecondary = world.layout.n_exsecondary;
  const bool exsec_available = n_exsecondary > 0;

  auto pick_exsecondary = [&]() -> PersonId {
    return world.layout.exsecondary_begin() +
           rng.uniform_below(static_cast<std::uint32_t>(n_exsecondary));
  };

  if (prefer_fsw) {
    if (fsws.any()) return fsws.take(rng);
    if (exsec_available) return pick_exsecondary();
  } else {
    if (exsec_available) return pick_exsecondary();
    if (fsws.any()) return fsws.take(rng);
  }
  return std::nullopt;
}

CouplingEvent apply_condom_usage(WorldState& world, PersonId male_id,
                                 PersonId female_id, const SimConfig& cfg,
                                 Rng& rng) {
  Person& male = world.person(male_id);
  Person& female = world.person(female_id);

  CouplingEvent event;
  event.tick = world.tick;
  event.male = male_id;
  event.female = female_id;

  const int u = rng.uniform_int(1, 100);
  event.protected_act = cfg.condom_usage.value() >= u;
  if (event.protected_act) return event;

  if (male.infected() == female.infected()) return event;  // concordant pair

  Person& source = male.infected() ? male : female;
  Person& target = male.infected() ? female : male;
  if (rng.next_double() < cfg.transmission_probability) {
    target.state = PersonState::Infected;
    target.provenance =
        InfectionProvenance{source_from(source.type), world.tick};
    event.transmission =
        CouplingEvent::Transmission{target.id, source.id};
  }
  return event;
}

std::vector<CouplingEvent> step(WorldState& world, const SimConfig& cfg,
                                Rng& rng) {
  if (world.tick >= cfg.ticks) {
    throw std::logic_error("step: world at tick " +
                           std::to_string(world.tick) +
                           " cannot step past configured " +
                           std::to_string(cfg.ticks) + " ticks");
  }
  ++world.tick;

  FswAvailability fsws(world, cfg.avg_client_month);
  std::vector<CouplingEvent> events;

  for (PersonId id = world.layout.primary_begin();
       id < world.layout.primary_end(); ++id) {
    for (int attempt = 0; attempt < cfg.couplings_per_month; ++attempt) {
      const std::optional<PersonId> target =
          select_coupling_target(world.person(id), world, cfg, fsws, rng);
      if (!target) continue;
      events.push_back(apply_condom_usage(world, id, *target, cfg, rng));
    }
  }
  return events;
}

Trace run(const SimConfig& cfg) {
  Trace trace;
  trace.config = cfg;
  trace.seed = cfg.seed;

  WorldState world = setup_initial_population(cfg);
  Rng rng(cfg.seed);
  make_partners(world, cfg, rng);

  trace.snapshots.reserve(static_cast<std::size_t>(cfg.ticks));
  for (int month = 0; month < cfg.ticks; ++month) {
    std::vector<CouplingEvent> events = step(world, cfg, rng);
    trace.events.insert(trace.events.end(), events.begin(), events.end());
    trace.snapshots.push_back(compute_counters(world));
  }
  trace.final_state = std::move(world);
  return trace;
}

}  // namespace hivabm
