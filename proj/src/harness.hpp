// Experiment orchestration: config parsing, error norms against the exact
// solutions, grid-refinement studies with CSV emission, method comparison,
// the predicted-speedup calculator, and the golden verification suites that
// back the `verify` CLI command.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "solvers.hpp"

namespace paradin {

enum class Method { Sequential, ParaDIn, BlockJacobi, PararealBaseline, ParaDInParareal };

Method parse_method(const std::string& name);
std::string method_name(Method m);

// Flat key=value experiment description.  Grid keys (nt, nx, ny, blocks)
// accept comma lists; single-element lists broadcast across all grids.
struct ExperimentConfig {
  ProblemSpec problem = heat_problem();
  std::string problem_name = "heat";
  Method method = Method::Sequential;
  std::vector<int> nts{30};
  std::vector<int> nxs{4};
  std::vector<int> nys;    // empty means "same as nx"
  std::vector<int> blocks; // empty means the per-problem default M for each nt
  int cf = 0;              // initial-guess coarsening; 0 means the problem default
  int cs = 1;              // spatial coarsening of the Parareal coarse level
  NewtonConfig newton;
  bool eps_set = false;    // eps_newton given explicitly (else per-problem default)
  bool norm_set = false;   // norm_kind given explicitly (else per-problem default)
  Topology topo;
  bool mode_set = false;
  bool workers_set = false;
  std::string out_dir;
  std::uint64_t seed = 12345;
  bool timing = true;      // off zeroes wall_s so reruns are byte-identical
  bool dump_solution = false;
};

// Applies one key=value setting; throws InvalidArgument on unknown keys or
// unparsable values.  Shared by the file parser and CLI overrides.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Fills per-problem defaults (eps_newton, norm) and applies the PARADIN_MODE /
// PARADIN_WORKERS environment fallbacks for settings not given explicitly.
void finalize_config(ExperimentConfig& cfg);

// Benchmark-default block counts and coarsening factors per problem and nt.
int default_blocks(ProblemKind kind, int nt);
int default_cf(ProblemKind kind, int nt, int nx, int ny);

// The benchmark domain per problem: heat on (0.1, 1.1)^2 with t in [0, 1];
// Burgers on (0, 1)^2 with t in [0, 2] so the shock sweeps the lower-left
// half of the square.
GridSpec experiment_grid(ProblemKind kind, int nt, int nx, int ny);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;

  double by_kind(NormKind kind) const;
};

// Volume-weighted norms of (sol - exact) over levels 1..nt.
ErrorNorms error_norms(const SpaceTimeSolution& sol, const ProblemSpec& p, const GridSpec& g);

struct RunRow {
  int nt = 0, nx = 0, ny = 0;
  int blocks = 1, cf = 1, cs = 1;
  ErrorNorms err;
  int newton_iters = 0;
  int parareal_iters = 0;  // summed over Newton iterations
  int jacobi_iters = 0;
  double wall_s = 0.0;
  bool failed = false;
  std::string error;
};

struct ExperimentReport {
  std::vector<RunRow> rows;
  std::string csv;        // runs.csv content, schema-stable
  std::string rates_csv;  // log2 rate between successive grids
  std::string summary;    // human-readable digest with the model speedup
};

// Runs every configured grid with the configured method.  Solver errors are
// recorded as failed rows and the run continues.  When out_dir is set, writes
// runs.csv, rates.csv, error_vs_h.dat, summary.txt, and (on failures)
// failures.log there; dump_solution adds one solution file per run.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Solves grid index grid_index of the config with its configured method and
// returns the populated row.  Unlike run_experiment, solver errors propagate.
RunRow solve_single(const ExperimentConfig& cfg, size_t grid_index, SolveReport* full = nullptr);

struct CompareRow {
  int nt = 0, nx = 0, ny = 0;
  double max_diff = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

// Solves each configured grid with both methods and reports the max pointwise
// solution difference; ok means within 10 * eps_newton.
std::vector<CompareRow> compare_methods(const ExperimentConfig& cfg, Method a, Method b);

enum class SpeedupVariant { ParaDIn, Combined, CombinedCoarsened };

struct SpeedupModel {
  int nt = 480;
  int cf = 4;
  int p = 3;   // cost exponent of the coarse solve relative to the fine one
  int k_p = 2; // Parareal iterations per Newton iteration
  int cs = 2;  // spatial coarsening factor of the coarse level
  int d = 2;   // spatial dimensions
};

// Closed-form speedup estimates:
//   ParaDIn           S = nt / (nt / cf^p + 1)
//   Combined          S = nt / (nt / cf^p + 2 k_p + 1)
//   CombinedCoarsened S = nt / (nt / cf^p + (k_p + 1) / cs^d + k_p)
double predict_speedup(const SpeedupModel& m, SpeedupVariant variant);

// Shortest decimal text that round-trips the double (CSV cells).
std::string format_double(double x);

// Golden regression suites: table1, table4, equivalence, proposition1.
// Prints one line per check to out and returns the number of failures.
int run_verify_suite(const std::string& suite, std::ostream& out, const Topology& topo = {});

}  // namespace paradin
