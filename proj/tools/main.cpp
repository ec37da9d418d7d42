/*
 * hivabm command-line tool.
 *
 *   run      --config c.json [--out DIR]      simulate once, write
 *                                             timeseries.csv + trace.json
 *   sweep    --config c.json --param P        replicated parameter sweep,
 *            --from A --to B --step S         write replicates/aggregates
 *            --replicates N [--out DIR]       CSVs + one SVG per counter
 *            [--seed S] [--threads T]
 *   validate --trace t.json [--json]          replay + contract-check a trace
 *   check    --config c.json                  validate a config, print issues
 *
 * Exit codes: 0 success; 1 validation or contract failure; 2 usage errors,
 * unreadable/unwritable files, or malformed JSON.
 */
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hivabm/contracts.hpp"
#include "hivabm/engine.hpp"
#include "hivabm/experiments.hpp"
#include "hivabm/trace_io.hpp"

namespace {

namespace fs = std::filesystem;

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const hivabm::SimConfig cfg = hivabm::load_config(config_path);
  const hivabm::Trace trace = hivabm::run(cfg);

  fs::create_directories(out_dir);
  const std::string timeseries = (fs::path(out_dir) / "timeseries.csv").string();
  const std::string trace_path = (fs::path(out_dir) / "trace.json").string();
  hivabm::write_timeseries_csv(trace, timeseries);
  hivabm::write_trace_json(trace, trace_path);

  const hivabm::CounterSnapshot final =
      hivabm::compute_counters(trace.final_state);
  std::cout << "simulated " << cfg.ticks << " month(s), " << trace.events.size()
            << " coupling event(s)\n"
            << "final: total_infected=" << final.total_infected
            << " infected_fsws=" << final.infected_fsws
            << " infected_primaries=" << final.infected_primaries
            << " infected_secondaries=" << final.infected_secondaries
            << " fsw_back_infected=" << final.fsw_back_infected << "\n"
            << "wrote " << timeseries << " and " << trace_path << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param_name,
              int from, int to, int step, int replicates,
              const std::string& out_dir, std::uint64_t seed, bool seed_set,
              int threads) {
  const hivabm::SimConfig cfg = hivabm::load_config(config_path);
  const auto param = hivabm::sweep_param_from_string(param_name);
  if (!param) {
    std::cerr << "unknown --param " << param_name
              << " (expected commitment or condom_usage)\n";
    return 2;
  }
  if (from < 0 || to > 100 || from > to || step < 1 || replicates < 1) {
    std::cerr << "sweep range must satisfy 0 <= from <= to <= 100, "
                 "step >= 1, replicates >= 1\n";
    return 2;
  }

  std::vector<hivabm::Percent> values;
  for (int v = from; v <= to; v += step) values.push_back(hivabm::Percent(v));

  const std::uint64_t base_seed = seed_set ? seed : cfg.seed;
  const hivabm::SweepResult result =
      hivabm::sweep(cfg, *param, values, replicates, base_seed, threads);

  fs::create_directories(out_dir);
  const std::string prefix =
      (fs::path(out_dir) / ("sweep_" + param_name)).string();
  hivabm::export_sweep_csv(result, prefix);
  for (const std::string& metric : hivabm::counter_names()) {
    hivabm::export_errorbar_svg(result, metric,
                                prefix + "_" + metric + ".svg");
  }
  std::cout << "swept " << param_name << " over " << values.size()
            << " point(s) x " << replicates << " replicate(s), base seed "
            << base_seed << "\n"
            << "wrote " << prefix << ".replicates.csv, " << prefix
            << ".aggregates.csv and " << hivabm::counter_names().size()
            << " SVG chart(s)\n";
  return 0;
}

int cmd_validate(const std::string& trace_path, bool as_json) {
  const hivabm::contracts::ValidationReport report =
      hivabm::validate_trace_file(trace_path);
  if (as_json) {
    std::cout << hivabm::report_to_json(report);
  } else {
    std::cout << report.summary();
  }
  return report.pass ? 0 : 1;
}

int cmd_check(const std::string& config_path) {
  const hivabm::SimConfig cfg = hivabm::load_config(config_path);
  std::cout << "config ok: " << cfg.max_fsw << " fsw ("
            << cfg.max_infected_fsw << " seeded infected), "
            << cfg.max_primary << " primaries, " << cfg.max_secondary
            << " secondaries, " << cfg.max_exsecondary << " exsecondaries, "
            << cfg.ticks << " tick(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agent-based HIV transmission simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string out_dir = ".";
  std::string param_name;
  int from = 0, to = 100, step = 20, replicates = 50, threads = 0;
  std::uint64_t seed = 0;
  bool as_json = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate one configuration");
  run_cmd->add_option("--config", config_path, "config JSON file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "replicated parameter sweep");
  sweep_cmd->add_option("--config", config_path, "config JSON file")
      ->required();
  sweep_cmd
      ->add_option("--param", param_name, "commitment or condom_usage")
      ->required();
  sweep_cmd->add_option("--from", from, "first percent value")->required();
  sweep_cmd->add_option("--to", to, "last percent value")->required();
  sweep_cmd->add_option("--step", step, "percent increment")->required();
  sweep_cmd->add_option("--replicates", replicates, "runs per point")
      ->required();
  sweep_cmd->add_option("--out", out_dir, "output directory");
  CLI::Option* seed_opt = sweep_cmd->add_option(
      "--seed", seed, "base seed (default: the config's seed)");
  sweep_cmd->add_option("--threads", threads,
                        "worker threads, 0 = auto (output is identical "
                        "for any value)");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "replay and contract-check a trace");
  validate_cmd->add_option("--trace", trace_path, "trace JSON file")
      ->required();
  validate_cmd->add_flag("--json", as_json, "machine-readable report");

  CLI::App* check_cmd =
      app.add_subcommand("check", "validate a config file");
  check_cmd->add_option("--config", config_path, "config JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean, usage errors as 2
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(config_path, param_name, from, to, step, replicates,
                       out_dir, seed, seed_opt->count() > 0, threads);
    }
    if (validate_cmd->parsed()) return cmd_validate(trace_path, as_json);
    if (check_cmd->parsed()) return cmd_check(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;  // validation failure
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;  // I/O and similar environmental failures
  }
  return 2;
}
