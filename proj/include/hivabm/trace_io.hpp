/*
 * JSON config and trace files, the trace validator entry point over files,
 * and the per-run time-series CSV. All output is deterministic: fixed key
 * order, fixed number formatting, '\n' line endings.
 */
#pragma once

#include <string>
#include <vector>

#include "hivabm/contracts.hpp"
#include "hivabm/engine.hpp"

namespace hivabm {

// Reads a config from a JSON object of SimConfig fields. fsw_preference and
// transmission_probability may be omitted and keep their defaults; every
// other field is required, and unknown keys are errors (typo guard). Throws
// std::runtime_error with the file name and reason when the file cannot be
// read or is not JSON, and std::invalid_argument listing the problems when
// the JSON is not a valid config (bad keys or types, validation violations).
SimConfig load_config(const std::string& path);
void write_config(const SimConfig& cfg, const std::string& path);

// Trace file payload: enough to replay the run (config + seed), the claims
// to check (events), and the claimed outcome (final counters).
struct TraceFile {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<CouplingEvent> events;
  CounterSnapshot final_counters;
};

void write_trace_json(const Trace& trace, const std::string& path);
TraceFile load_trace_json(const std::string& path);

// Loads a trace file and replays it against a fresh simulation of its
// config, reporting contract violations and claim mismatches.
contracts::ValidationReport validate_trace_file(const std::string& path);

// One row per simulated month: every counter plus new_infections for the
// tick. A run with ticks = 0 produces only the header.
void write_timeseries_csv(const Trace& trace, const std::string& path);

// Machine-readable validation outcome, for the CLI's --json flag.
std::string report_to_json(const contracts::ValidationReport& report);

}  // namespace hivabm
