/*
 * Replicated runs, parameter sweeps over commitment / condom usage, and the
 * min/max/mean/95%-CI aggregation behind the error-bar plots. Replicates are
 * embarrassingly parallel; results are assembled in replicate order and are
 * bitwise independent of the degree of parallelism.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hivabm/engine.hpp"

namespace hivabm {

struct Aggregate {
  std::size_t n = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  double ci_low = 0;   // mean - 1.96 * s / sqrt(n), sample stddev (n-1)
  double ci_high = 0;  // for n = 1 the interval collapses to the mean

  bool operator==(const Aggregate&) const = default;
};

// Exact min/max/mean plus the normal-approximation 95% confidence interval.
// Throws std::invalid_argument on empty input.
Aggregate aggregate(const std::vector<double>& values);

enum class SweepParam { Commitment, CondomUsage };

const char* to_string(SweepParam param);
std::optional<SweepParam> sweep_param_from_string(const std::string& name);

struct SweepPoint {
  int param_value = 0;                      // percent setting for this point
  std::vector<std::uint64_t> seeds;         // seed of each replicate
  std::vector<CounterSnapshot> replicates;  // final-tick snapshot per replicate
  std::vector<Aggregate> aggregates;        // aligned with counter_fields()
};

struct SweepResult {
  SweepParam param = SweepParam::Commitment;
  std::vector<SweepPoint> points;
};

// n independent runs with seeds base_seed + i, i in [0, n); returns the
// final-tick counter snapshot of each, in replicate order. threads = 0 picks
// a thread count automatically; the result does not depend on it.
std::vector<CounterSnapshot> run_replicates(const SimConfig& cfg, int n,
                                            std::uint64_t base_seed,
                                            int threads = 0);

// For each value, clones base_cfg with the swept parameter overridden and
// runs n replicates; the point at index p uses seeds base_seed + p*n + i, so
// every run is reproducible in isolation from its coordinates.
SweepResult sweep(const SimConfig& base_cfg, SweepParam param,
                  const std::vector<Percent>& values, int replicates,
                  std::uint64_t base_seed, int threads = 0);

// Writes <path_prefix>.replicates.csv (one row per replicate, every counter
// column) and <path_prefix>.aggregates.csv (one row per point x metric).
// Deterministic: re-exporting the same result is byte-identical. Throws
// std::runtime_error naming the path when it cannot be written.
void export_sweep_csv(const SweepResult& result,
                      const std::string& path_prefix);

// Standalone SVG error-bar chart for one counter: per point a min-max
// whisker, a 95%-CI box, and a mean marker. Throws std::invalid_argument for
// an unknown metric name.
void export_errorbar_svg(const SweepResult& result, const std::string& metric,
                         const std::string& path);

// Plain-decimal rendering with 6 significant digits (never scientific
// notation); integral values drop the decimal point. Used for every real
// number in the CSV and SVG outputs so they are byte-stable.
std::string format_decimal(double value);

}  // namespace hivabm
