/*
 * Release gate: the twelve checks a build must pass before it ships.
 * Each prints exactly one [PASS]/[FAIL] line; the exit code is the number
 * of failed checks. Unlike the unit suites this runs the full desk-scale
 * scenario battery, so expect a couple of minutes on a laptop-class core.
 */
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hivabm/contracts.hpp"
#include "hivabm/engine.hpp"
#include "hivabm/experiments.hpp"
#include "hivabm/trace_io.hpp"
#include "support.hpp"

using namespace hivabm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr int kReplicates = 50;
constexpr std::uint64_t kBaseSeed = 1;

const std::vector<Percent> kSweepValues = {Percent(0),  Percent(20),
                                           Percent(40), Percent(60),
                                           Percent(80), Percent(100)};

// Seed of replicate i at sweep point p, mirroring the sweep schedule so a
// boundary point examined here is literally the sweep's own point.
std::uint64_t point_seed(int point, int i) {
  return kBaseSeed + static_cast<std::uint64_t>(point) * kReplicates +
         static_cast<std::uint64_t>(i);
}

std::vector<double> metric_means(const SweepResult& result,
                                 const char* metric) {
  std::vector<double> means;
  const int idx = counter_index(metric);
  for (const SweepPoint& point : result.points) {
    means.push_back(point.aggregates[static_cast<std::size_t>(idx)].mean);
  }
  return means;
}

std::string join_means(const std::vector<double>& means) {
  std::string out;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_decimal(means[i]);
  }
  return out;
}

// --- check 1: full condom usage stops everything beyond the seeds ---------

Outcome protection_boundary() {
  SimConfig cfg = testing::desk_config();
  cfg.condom_usage = Percent(100);

  const auto start = Clock::now();
  const auto finals = run_replicates(cfg, kReplicates, point_seed(5, 0));
  const double elapsed = seconds_since(start);

  int exact = 0;
  for (const CounterSnapshot& snap : finals) {
    if (snap.total_infected == cfg.max_infected_fsw) ++exact;
  }

  std::ostringstream detail;
  detail << "condom_usage=100: total_infected=" << cfg.max_infected_fsw
         << " in " << exact << "/" << kReplicates << " replicates, point took "
         << format_decimal(elapsed) << " s (budget 5 s)";
  return {exact == kReplicates && elapsed < 5.0, detail.str()};
}

// --- check 2: full commitment confines infection to the seeded fsws -------

Outcome commitment_boundary() {
  SimConfig cfg = testing::desk_config();
  cfg.commitment = Percent(100);

  int clean = 0;
  for (int i = 0; i < kReplicates; ++i) {
    cfg.seed = point_seed(5, i);
    const Trace trace = run(cfg);
    bool ok = true;
    for (const CounterSnapshot& snap : trace.snapshots) {
      ok = ok && snap.infected_primaries == 0 &&
           snap.infected_secondaries == 0 &&
           snap.noncommitted_infected_secondaries == 0 &&
           snap.total_infected == cfg.max_infected_fsw;
    }
    if (ok) ++clean;
  }

  std::ostringstream detail;
  detail << "commitment=100: only the " << cfg.max_infected_fsw
         << " seeded infections at every month in " << clean << "/"
         << kReplicates << " replicates";
  return {clean == kReplicates, detail.str()};
}

// --- checks 3 and 4: zero commitment isolates secondaries, floods fsws ----

void zero_commitment_checks(Outcome& isolation, Outcome& backflow) {
  SimConfig cfg = testing::desk_config();
  cfg.commitment = Percent(0);

  int isolated = 0;
  int with_backflow = 0;
  int identity_held = 0;
  for (int i = 0; i < kReplicates; ++i) {
    cfg.seed = point_seed(0, i);
    const Trace trace = run(cfg);

    bool no_secondary = true;
    bool identity = true;
    for (const CounterSnapshot& snap : trace.snapshots) {
      no_secondary = no_secondary && snap.infected_secondaries == 0;
      identity = identity && snap.fsw_back_infected ==
                                 snap.infected_fsws - cfg.max_infected_fsw;
    }
    if (no_secondary) ++isolated;
    if (identity) ++identity_held;
    if (!trace.snapshots.empty() &&
        trace.snapshots.back().fsw_back_infected > 0) {
      ++with_backflow;
    }
  }

  {
    std::ostringstream detail;
    detail << "commitment=0: infected_secondaries=0 at every month in "
           << isolated << "/" << kReplicates << " replicates";
    isolation = {isolated == kReplicates, detail.str()};
  }
  {
    std::ostringstream detail;
    detail << "commitment=0, condom_usage=0: fsw_back_infected>0 in "
           << with_backflow << "/" << kReplicates
           << " replicates (need >= 45); back-infection identity held in "
           << identity_held << "/" << kReplicates;
    backflow = {with_backflow >= 45 && identity_held == kReplicates,
                detail.str()};
  }
}

// --- checks 5-7, 12: the two six-point sweeps and their shapes ------------

bool non_increasing(const std::vector<double>& means, double tolerance) {
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[i - 1] + tolerance) return false;
  }
  return true;
}

Outcome condom_trend(const SweepResult& sweep_result) {
  const std::vector<double> means = metric_means(sweep_result, "infected_fsws");
  std::ostringstream detail;
  detail << "mean final infected_fsws over condom_usage 0..100: "
         << join_means(means);
  return {non_increasing(means, 1.0), detail.str()};
}

Outcome commitment_trend(const SweepResult& sweep_result) {
  const std::vector<double> means =
      metric_means(sweep_result, "infected_primaries");
  std::ostringstream detail;
  detail << "mean final infected_primaries over commitment 0..100: "
         << join_means(means);
  return {non_increasing(means, 1.0) && means.back() == 0.0, detail.str()};
}

Outcome commitment_bell(const SweepResult& sweep_result) {
  const std::vector<double> means =
      metric_means(sweep_result, "total_infected");
  std::ostringstream detail;
  detail << "mean final total_infected peaks mid-sweep: "
         << format_decimal(means[3]) << " at 60 vs " << format_decimal(means[0])
         << " at 0 and " << format_decimal(means[5]) << " at 100";
  return {means[3] > means[0] && means[3] > means[5], detail.str()};
}

// --- check 8: forced-branch micro instances against hand-written traces ---

struct MicroCase {
  std::string name;
  SimConfig cfg;
  std::vector<CouplingEvent> expected;
  long long expected_total = 0;
};

CouplingEvent ev(int tick, PersonId male, PersonId female, bool protected_act,
                 std::optional<CouplingEvent::Transmission> transmission = {}) {
  CouplingEvent event;
  event.tick = tick;
  event.male = male;
  event.female = female;
  event.protected_act = protected_act;
  event.transmission = transmission;
  return event;
}

// Every stochastic control sits at a forcing value (0, 100, probability 1,
// or a singleton pool), so the whole trace is enumerable by hand and must
// not depend on the seed.
std::vector<MicroCase> micro_cases() {
  std::vector<MicroCase> cases;

  {
    // One infected fsw with capacity for both uncommitted clients: each is
    // infected in id order during month one; the secondaries stay clean.
    MicroCase c;
    c.name = "six-person defection";
    c.cfg.max_fsw = 1;
    c.cfg.max_infected_fsw = 1;
    c.cfg.max_primary = 2;
    c.cfg.max_secondary = 2;
    c.cfg.max_exsecondary = 1;
    c.cfg.tobecoupled = 2;
    c.cfg.commitment = Percent(0);
    c.cfg.condom_usage = Percent(0);
    c.cfg.couplings_per_month = 1;
    c.cfg.avg_client_month = 2;
    c.cfg.fsw_preference = 1.0;
    c.cfg.transmission_probability = 1.0;
    c.cfg.ticks = 1;
    c.expected = {ev(1, 1, 0, false, CouplingEvent::Transmission{1, 0}),
                  ev(1, 2, 0, false, CouplingEvent::Transmission{2, 0})};
    c.expected_total = 3;
    cases.push_back(c);

    c.name = "six-person defection, fully protected";
    c.cfg.condom_usage = Percent(100);
    c.expected = {ev(1, 1, 0, true), ev(1, 2, 0, true)};
    c.expected_total = 1;
    cases.push_back(c);
  }
  {
    // A fully committed partnered pair couples every month and, both being
    // uninfected, never transmits.
    MicroCase c;
    c.name = "committed pair";
    c.cfg.max_fsw = 1;
    c.cfg.max_infected_fsw = 1;
    c.cfg.max_primary = 1;
    c.cfg.max_secondary = 1;
    c.cfg.max_exsecondary = 0;
    c.cfg.tobecoupled = 1;
    c.cfg.commitment = Percent(100);
    c.cfg.condom_usage = Percent(0);
    c.cfg.couplings_per_month = 1;
    c.cfg.avg_client_month = 5;
    c.cfg.fsw_preference = 1.0;
    c.cfg.transmission_probability = 1.0;
    c.cfg.ticks = 2;
    c.expected = {ev(1, 1, 2, false), ev(2, 1, 2, false)};
    c.expected_total = 1;
    cases.push_back(c);
  }
  {
    // Preference 0 sends the lone defector to the lone exsecondary; both
    // are uninfected, so nothing spreads.
    MicroCase c;
    c.name = "exsecondary preference";
    c.cfg.max_fsw = 1;
    c.cfg.max_infected_fsw = 1;
    c.cfg.max_primary = 1;
    c.cfg.max_secondary = 0;
    c.cfg.max_exsecondary = 1;
    c.cfg.tobecoupled = 0;
    c.cfg.commitment = Percent(0);
    c.cfg.condom_usage = Percent(0);
    c.cfg.couplings_per_month = 1;
    c.cfg.avg_client_month = 5;
    c.cfg.fsw_preference = 0.0;
    c.cfg.transmission_probability = 1.0;
    c.cfg.ticks = 1;
    c.expected = {ev(1, 1, 2, false)};
    c.expected_total = 1;
    cases.push_back(c);
  }
  {
    // Client capacity 1: the first primary takes the fsw (and the
    // infection), the second falls back to the exsecondary.
    MicroCase c;
    c.name = "capacity fallback";
    c.cfg.max_fsw = 1;
    c.cfg.max_infected_fsw = 1;
    c.cfg.max_primary = 2;
    c.cfg.max_secondary = 0;
    c.cfg.max_exsecondary = 1;
    c.cfg.tobecoupled = 0;
    c.cfg.commitment = Percent(0);
    c.cfg.condom_usage = Percent(0);
    c.cfg.couplings_per_month = 1;
    c.cfg.avg_client_month = 1;
    c.cfg.fsw_preference = 1.0;
    c.cfg.transmission_probability = 1.0;
    c.cfg.ticks = 1;
    c.expected = {ev(1, 1, 0, false, CouplingEvent::Transmission{1, 0}),
                  ev(1, 2, 3, false)};
    c.expected_total = 2;
    cases.push_back(c);

    // With no exsecondaries at all the second primary has nowhere to go.
    c.name = "exhausted pools";
    c.cfg.max_exsecondary = 0;
    c.expected = {ev(1, 1, 0, false, CouplingEvent::Transmission{1, 0})};
    c.expected_total = 2;
    cases.push_back(c);
  }
  {
    // Full commitment with nobody partnered: every attempt resolves to no
    // target, so the trace stays empty.
    MicroCase c;
    c.name = "committed but unpartnered";
    c.cfg.max_fsw = 1;
    c.cfg.max_infected_fsw = 1;
    c.cfg.max_primary = 1;
    c.cfg.max_secondary = 1;
    c.cfg.max_exsecondary = 1;
    c.cfg.tobecoupled = 0;
    c.cfg.commitment = Percent(100);
    c.cfg.condom_usage = Percent(0);
    c.cfg.couplings_per_month = 2;
    c.cfg.avg_client_month = 5;
    c.cfg.fsw_preference = 1.0;
    c.cfg.transmission_probability = 1.0;
    c.cfg.ticks = 2;
    c.expected = {};
    c.expected_total = 1;
    cases.push_back(c);
  }

  return cases;
}

Outcome micro_oracles() {
  const std::vector<MicroCase> cases = micro_cases();
  int matched = 0;
  std::string first_failure;
  for (MicroCase c : cases) {
    bool ok = true;
    for (const std::uint64_t seed : {std::uint64_t{3}, std::uint64_t{77}}) {
      c.cfg.seed = seed;
      const Trace trace = run(c.cfg);
      ok = ok && trace.events == c.expected &&
           compute_counters(trace.final_state).total_infected ==
               c.expected_total;
    }
    if (ok) {
      ++matched;
    } else if (first_failure.empty()) {
      first_failure = c.name;
    }
  }

  std::ostringstream detail;
  detail << matched << "/" << cases.size()
         << " forced-branch instances match their hand-enumerated traces"
         << " under two seeds";
  if (!first_failure.empty()) detail << "; first failure: " << first_failure;
  return {matched == static_cast<int>(cases.size()), detail.str()};
}

// --- check 9: randomized conformance plus the mutation battery ------------

Outcome contract_conformance() {
  Rng meta(20260817);
  const int runs = 10000;
  int clean = 0;
  std::string first_failure;
  for (int i = 0; i < runs; ++i) {
    const SimConfig cfg = testing::random_small_config(meta);
    const contracts::ValidationReport report =
        contracts::validate_trace(run(cfg));
    if (report.pass) {
      ++clean;
    } else if (first_failure.empty()) {
      first_failure = !report.violations.empty()
                          ? report.violations.front().description
                          : report.summary();
    }
  }

  int triggered = 0;
  const auto battery = testing::mutation_battery();
  for (const testing::MutationOutcome& outcome : battery) {
    if (outcome.triggered()) ++triggered;
  }

  std::ostringstream detail;
  detail << clean << "/" << runs << " randomized small traces conform; "
         << triggered << "/" << battery.size()
         << " schema mutations detected";
  if (!first_failure.empty()) detail << "; first failure: " << first_failure;
  return {clean == runs && triggered == static_cast<int>(battery.size()),
          detail.str()};
}

// --- check 10: bitwise determinism of every artifact ----------------------

Outcome determinism() {
  const std::string dir = testing::scratch_dir("acceptance_determinism");
  const SimConfig cfg = testing::desk_config();

  write_trace_json(run(cfg), dir + "/a.json");
  write_timeseries_csv(run(cfg), dir + "/a.csv");
  write_trace_json(run(cfg), dir + "/b.json");
  write_timeseries_csv(run(cfg), dir + "/b.csv");
  const bool run_stable =
      testing::slurp(dir + "/a.json") == testing::slurp(dir + "/b.json") &&
      testing::slurp(dir + "/a.csv") == testing::slurp(dir + "/b.csv");

  const std::vector<Percent> values = {Percent(0), Percent(50), Percent(100)};
  const SweepResult serial =
      sweep(cfg, SweepParam::Commitment, values, 10, kBaseSeed, 1);
  const SweepResult threaded =
      sweep(cfg, SweepParam::Commitment, values, 10, kBaseSeed, 4);
  export_sweep_csv(serial, dir + "/serial");
  export_sweep_csv(threaded, dir + "/threaded");
  const bool sweep_stable =
      testing::slurp(dir + "/serial.replicates.csv") ==
          testing::slurp(dir + "/threaded.replicates.csv") &&
      testing::slurp(dir + "/serial.aggregates.csv") ==
          testing::slurp(dir + "/threaded.aggregates.csv");

  std::ostringstream detail;
  detail << "repeat runs byte-identical: " << (run_stable ? "yes" : "NO")
         << "; sweep csvs identical across 1 vs 4 threads: "
         << (sweep_stable ? "yes" : "NO");
  return {run_stable && sweep_stable, detail.str()};
}

// --- check 11: the frozen confidence-interval reference -------------------

Outcome statistics_reference() {
  const Aggregate agg = aggregate({2, 4, 4, 4, 5, 5, 7, 9});
  const std::string low = format_decimal(agg.ci_low);
  const std::string high = format_decimal(agg.ci_high);
  std::ostringstream detail;
  detail << "aggregate([2,4,4,4,5,5,7,9]): mean=" << format_decimal(agg.mean)
         << ", ci=[" << low << ", " << high << "]";
  return {agg.mean == 5.0 && low == "3.51838" && high == "6.48162",
          detail.str()};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const Outcome& outcome) {
    std::printf("[%s] criterion %2d: %s\n", outcome.pass ? "PASS" : "FAIL",
                number, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  };

  report(1, protection_boundary());
  report(2, commitment_boundary());

  Outcome isolation, backflow;
  zero_commitment_checks(isolation, backflow);
  report(3, isolation);
  report(4, backflow);

  SimConfig condom_base = testing::desk_config();  // commitment stays at 50
  const auto condom_start = Clock::now();
  const SweepResult condom_sweep = sweep(condom_base, SweepParam::CondomUsage,
                                         kSweepValues, kReplicates, kBaseSeed);
  const double condom_elapsed = seconds_since(condom_start);
  report(5, condom_trend(condom_sweep));

  SimConfig commitment_base = testing::desk_config();
  commitment_base.condom_usage = Percent(0);
  const auto commitment_start = Clock::now();
  const SweepResult commitment_sweep =
      sweep(commitment_base, SweepParam::Commitment, kSweepValues, kReplicates,
            kBaseSeed);
  const double commitment_elapsed = seconds_since(commitment_start);
  report(6, commitment_trend(commitment_sweep));
  report(7, commitment_bell(commitment_sweep));

  report(8, micro_oracles());
  report(9, contract_conformance());
  report(10, determinism());
  report(11, statistics_reference());

  {
    const double total = condom_elapsed + commitment_elapsed;
    std::ostringstream detail;
    detail << "both 6-point x " << kReplicates << "-replicate sweeps took "
           << format_decimal(total) << " s (budget 60 s)";
    report(12, Outcome{total < 60.0, detail.str()});
  }

  return failures;
}
