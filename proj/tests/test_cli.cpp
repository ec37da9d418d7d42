// End-to-end tests that drive the installed binary the way a user would:
// through a shell, checking exit codes and the files left behind.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "hivabm/trace_io.hpp"
#include "support.hpp"

using namespace hivabm;

namespace {

// Runs the CLI with the given arguments, routing all output into the
// scratch directory, and returns the process exit code.
int run_cli(const std::string& args, const std::string& log) {
  const std::string command =
      std::string(HIVABM_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

// A config small enough that every subcommand finishes in milliseconds.
std::string write_small_config(const std::string& dir) {
  SimConfig cfg;
  cfg.max_fsw = 6;
  cfg.max_infected_fsw = 1;
  cfg.max_primary = 20;
  cfg.max_secondary = 20;
  cfg.max_exsecondary = 8;
  cfg.tobecoupled = 12;
  cfg.commitment = Percent(50);
  cfg.condom_usage = Percent(30);
  cfg.couplings_per_month = 2;
  cfg.avg_client_month = 3;
  cfg.ticks = 10;
  cfg.seed = 5;
  const std::string path = dir + "/cfg.json";
  write_config(cfg, path);
  return path;
}

}  // namespace

TEST_CASE("run writes the trace and timeseries and validate accepts them") {
  const std::string dir = testing::scratch_dir("cli_run");
  const std::string cfg = write_small_config(dir);

  CHECK(run_cli("run --config " + cfg + " --out " + dir + "/out",
                dir + "/run.log") == 0);
  CHECK(std::filesystem::exists(dir + "/out/trace.json"));
  CHECK(std::filesystem::exists(dir + "/out/timeseries.csv"));

  CHECK(run_cli("validate --trace " + dir + "/out/trace.json",
                dir + "/validate.log") == 0);
  CHECK(testing::slurp(dir + "/validate.log").rfind("PASS", 0) == 0);

  CHECK(run_cli("validate --trace " + dir + "/out/trace.json --json",
                dir + "/validate_json.log") == 0);
  CHECK(testing::slurp(dir + "/validate_json.log").rfind("{", 0) == 0);
}

TEST_CASE("a zero-month run still produces well-formed outputs") {
  const std::string dir = testing::scratch_dir("cli_run_zero");
  SimConfig cfg = testing::desk_config();
  cfg.ticks = 0;
  write_config(cfg, dir + "/cfg.json");
  CHECK(run_cli("run --config " + dir + "/cfg.json --out " + dir + "/out",
                dir + "/run.log") == 0);
  CHECK(run_cli("validate --trace " + dir + "/out/trace.json",
                dir + "/validate.log") == 0);
}

TEST_CASE("running the same config twice leaves byte-identical files") {
  const std::string dir = testing::scratch_dir("cli_run_repeat");
  const std::string cfg = write_small_config(dir);
  REQUIRE(run_cli("run --config " + cfg + " --out " + dir + "/a",
                  dir + "/a.log") == 0);
  REQUIRE(run_cli("run --config " + cfg + " --out " + dir + "/b",
                  dir + "/b.log") == 0);
  CHECK(testing::slurp(dir + "/a/trace.json") ==
        testing::slurp(dir + "/b/trace.json"));
  CHECK(testing::slurp(dir + "/a/timeseries.csv") ==
        testing::slurp(dir + "/b/timeseries.csv"));
}

TEST_CASE("sweep produces the csv pair and one chart per metric") {
  const std::string dir = testing::scratch_dir("cli_sweep");
  const std::string cfg = write_small_config(dir);
  CHECK(run_cli("sweep --config " + cfg +
                    " --param condom_usage --from 0 --to 100 --step 50"
                    " --replicates 3 --out " +
                    dir + "/sweep",
                dir + "/sweep.log") == 0);
  CHECK(std::filesystem::exists(dir +
                                "/sweep/sweep_condom_usage.replicates.csv"));
  CHECK(std::filesystem::exists(dir +
                                "/sweep/sweep_condom_usage.aggregates.csv"));
  for (const std::string& metric : counter_names()) {
    CHECK(std::filesystem::exists(dir + "/sweep/sweep_condom_usage_" +
                                  metric + ".svg"));
  }
}

TEST_CASE("usage mistakes exit with code 2") {
  const std::string dir = testing::scratch_dir("cli_usage");
  const std::string cfg = write_small_config(dir);
  CHECK(run_cli("", dir + "/noargs.log") == 2);
  CHECK(run_cli("run", dir + "/noconfig.log") == 2);
  CHECK(run_cli("frobnicate --config " + cfg, dir + "/badcmd.log") == 2);
  CHECK(run_cli("sweep --config " + cfg +
                    " --param condoms --from 0 --to 100 --step 50"
                    " --replicates 2 --out " +
                    dir + "/s",
                dir + "/badparam.log") == 2);
  CHECK(run_cli("sweep --config " + cfg +
                    " --param commitment --from 80 --to 20 --step 10"
                    " --replicates 2 --out " +
                    dir + "/s2",
                dir + "/badrange.log") == 2);
  CHECK(run_cli("run --config " + dir + "/missing.json --out " + dir,
                dir + "/missingcfg.log") == 2);
  CHECK(run_cli("--help", dir + "/help.log") == 0);
}

TEST_CASE("check reports config problems through the exit code") {
  const std::string dir = testing::scratch_dir("cli_check");
  const std::string cfg = write_small_config(dir);
  CHECK(run_cli("check --config " + cfg, dir + "/ok.log") == 0);
  CHECK(testing::slurp(dir + "/ok.log").find("config ok") !=
        std::string::npos);

  SimConfig bad = testing::desk_config();
  bad.max_infected_fsw = bad.max_fsw + 50;
  write_config(bad, dir + "/bad.json");
  CHECK(run_cli("check --config " + dir + "/bad.json", dir + "/bad.log") == 1);
  CHECK(testing::slurp(dir + "/bad.log").find("max_infected_fsw") !=
        std::string::npos);
}

TEST_CASE("validate rejects a tampered trace with exit code 1") {
  const std::string dir = testing::scratch_dir("cli_validate_bad");
  const std::string cfg = write_small_config(dir);
  REQUIRE(run_cli("run --config " + cfg + " --out " + dir + "/out",
                  dir + "/run.log") == 0);

  std::string text = testing::slurp(dir + "/out/trace.json");
  const auto pos = text.find("\"total_infected\":");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 17, "\"total_infected\":9");
  testing::spit(dir + "/out/trace.json", text);

  CHECK(run_cli("validate --trace " + dir + "/out/trace.json",
                dir + "/validate.log") == 1);
  CHECK(testing::slurp(dir + "/validate.log").rfind("FAIL", 0) == 0);

  CHECK(run_cli("validate --trace " + dir + "/nonexistent.json",
                dir + "/nofile.log") == 2);
}
