// Command-line front end.  Links the public C API only, so it doubles as a
// living example of driving the shared library.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paradin/paradin.h"

namespace {

struct ConfigHandle {
  paradin_config* cfg = nullptr;
  ~ConfigHandle() { paradin_config_destroy(cfg); }
};

int fail(const std::string& what) {
  std::fprintf(stderr, "error: %s: %s\n", what.c_str(), paradin_last_error());
  return 1;
}

int apply_overrides(paradin_config* cfg, const std::vector<std::string>& sets,
                    const std::string& method, const std::string& mode, int workers,
                    const std::string& out_dir) {
  for (const std::string& kv : sets) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    std::string key = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (paradin_config_set(cfg, key.c_str(), value.c_str()) != PARADIN_OK)
      return fail("--set " + kv);
  }
  if (!method.empty() && paradin_config_set(cfg, "method", method.c_str()) != PARADIN_OK)
    return fail("--method");
  if (!mode.empty() && paradin_config_set(cfg, "mode", mode.c_str()) != PARADIN_OK)
    return fail("--mode");
  if (workers > 0 &&
      paradin_config_set(cfg, "workers", std::to_string(workers).c_str()) != PARADIN_OK)
    return fail("--workers");
  if (!out_dir.empty() && paradin_config_set(cfg, "out_dir", out_dir.c_str()) != PARADIN_OK)
    return fail("--out");
  return 0;
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel-in-time BDF1 solvers for 2-D nonlinear heat and Burgers equations"};
  app.require_subcommand(1);

  std::string config_path, method, mode, out_dir, suite;
  int workers = 0;
  std::vector<std::string> sets;

  CLI::App* solve = app.add_subcommand("solve", "run the experiment described by a config file");
  solve->add_option("--config", config_path, "key = value config file")->required();
  solve->add_option("--method", method,
                    "override: sequential, paradin, block_jacobi, parareal_baseline, "
                    "paradin_parareal");
  solve->add_option("--mode", mode, "override: emulated or parallel");
  solve->add_option("--workers", workers, "override: physical worker count");
  solve->add_option("--out", out_dir, "directory for runs.csv, rates.csv, summary.txt");
  solve->add_option("--set", sets, "extra key=value overrides")->take_all();

  CLI::App* verify = app.add_subcommand("verify", "run a golden verification suite");
  verify->add_option("--suite", suite, "table1, table4, equivalence, or proposition1")->required();
  verify->add_option("--mode", mode, "emulated or parallel");
  verify->add_option("--workers", workers, "physical worker count");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    ConfigHandle handle;
    handle.cfg = paradin_config_load(config_path.c_str());
    if (!handle.cfg) return fail("loading " + config_path);
    if (int rc = apply_overrides(handle.cfg, sets, method, mode, workers, out_dir)) return rc;

    char* csv = nullptr;
    char* summary = nullptr;
    int32_t failed_rows = 0;
    paradin_status st = paradin_run_experiment(handle.cfg, &csv, &summary, &failed_rows);
    if (st != PARADIN_OK) return fail("experiment");
    if (csv) std::fputs(csv, stdout);
    if (summary && summary[0]) std::fprintf(stderr, "\n%s", summary);
    paradin_string_free(csv);
    paradin_string_free(summary);
    if (failed_rows > 0) {
      std::fprintf(stderr, "%d run(s) failed; see the CSV rows\n", failed_rows);
      return 2;
    }
    return 0;
  }

  ConfigHandle handle;
  if (!mode.empty() || workers > 0) {
    handle.cfg = paradin_config_create();
    if (!handle.cfg) return fail("allocating config");
    if (int rc = apply_overrides(handle.cfg, {}, "", mode, workers, "")) return rc;
  }
  int32_t failures = 0;
  paradin_status st = paradin_verify(handle.cfg, suite.c_str(), print_line, nullptr, &failures);
  if (st != PARADIN_OK) return fail("verify --suite " + suite);
  if (failures > 0) {
    std::fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  return 0;
}
