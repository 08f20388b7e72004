#include "harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace paradin {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw InvalidArgument("config key '" + key + "': expected an integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw InvalidArgument("config key '" + key + "': expected a number, got '" + value + "'");
  return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw InvalidArgument("config key '" + key + "': expected on/off, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value, int min_value) {
  std::vector<int> out;
  for (const std::string& part : split_list(value)) {
    long long v = parse_int(key, part);
    if (v < min_value)
      throw InvalidArgument("config key '" + key + "': value " + part + " is below " +
                            std::to_string(min_value));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

ExecMode parse_mode(const std::string& value) {
  if (value == "emulated") return ExecMode::Emulated;
  if (value == "parallel") return ExecMode::Parallel;
  throw InvalidArgument("mode must be 'emulated' or 'parallel', got '" + value + "'");
}

const char* mode_name(ExecMode mode) {
  return mode == ExecMode::Parallel ? "parallel" : "emulated";
}

int pick(const std::vector<int>& list, size_t i) {
  return list.size() == 1 ? list[0] : list[i];
}

// Largest factor of nt that is <= request and keeps at least one interior
// node in each coarsened direction.
int clamp_cf(int request, int nt, int nx, int ny) {
  int cap = std::min(std::min(request, nt), std::min(nx, ny));
  for (int c = cap; c > 1; --c)
    if (nt % c == 0) return c;
  return 1;
}

struct ResolvedRun {
  GridSpec grid;
  int blocks = 1;
  int cf = 1;
};

ResolvedRun resolve_run(const ExperimentConfig& cfg, size_t i) {
  int nt = cfg.nts[i];
  int nx = pick(cfg.nxs, i);
  int ny = cfg.nys.empty() ? nx : pick(cfg.nys, i);
  ResolvedRun run;
  run.grid = experiment_grid(cfg.problem.kind, nt, nx, ny);
  run.blocks = cfg.blocks.empty() ? default_blocks(cfg.problem.kind, nt) : pick(cfg.blocks, i);
  run.cf = cfg.cf > 0 ? cfg.cf : default_cf(cfg.problem.kind, nt, nx, ny);
  return run;
}

SolveReport dispatch(const ExperimentConfig& cfg, Method method, const ResolvedRun& run) {
  const ProblemSpec& p = cfg.problem;
  const GridSpec& g = run.grid;
  if (method == Method::Sequential) return sequential_bdf1(p, g, cfg.newton, cfg.topo);

  SpaceTimeSolution guess = build_initial_guess(p, g, run.cf, cfg.newton);
  switch (method) {
    case Method::ParaDIn:
      return paradin_solve(p, g, cfg.newton, guess, cfg.topo);
    case Method::BlockJacobi:
      return block_jacobi_solve(p, g, cfg.newton, BlockLayout::for_grid(g, run.blocks), guess,
                                cfg.topo);
    case Method::PararealBaseline:
      return parareal_linear_baseline(p, g, cfg.newton, BlockLayout::for_grid(g, run.blocks),
                                      guess, cfg.topo, cfg.cs);
    case Method::ParaDInParareal:
      return paradin_parareal_solve(p, g, cfg.newton, BlockLayout::for_grid(g, run.blocks), guess,
                                    cfg.topo, cfg.cs);
    default:
      throw InvalidArgument("unknown method");
  }
}

int sum(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

std::string grid_label(int nt, int nx, int ny) {
  return std::to_string(nt) + "x" + std::to_string(nx) + "x" + std::to_string(ny);
}

double max_pointwise_diff(const SpaceTimeSolution& a, const SpaceTimeSolution& b) {
  double m = 0.0;
  for (size_t l = 0; l < a.levels.size(); ++l)
    for (size_t i = 0; i < a.levels[l].v.size(); ++i)
      m = std::max(m, std::abs(a.levels[l].v[i] - b.levels[l].v[i]));
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "sequential" || name == "seq" || name == "bdf1") return Method::Sequential;
  if (name == "paradin") return Method::ParaDIn;
  if (name == "block_jacobi" || name == "jacobi") return Method::BlockJacobi;
  if (name == "parareal_baseline" || name == "parareal") return Method::PararealBaseline;
  if (name == "paradin_parareal" || name == "combined") return Method::ParaDInParareal;
  throw InvalidArgument("unknown method '" + name +
                        "' (expected sequential, paradin, block_jacobi, parareal_baseline, or "
                        "paradin_parareal)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Sequential: return "sequential";
    case Method::ParaDIn: return "paradin";
    case Method::BlockJacobi: return "block_jacobi";
    case Method::PararealBaseline: return "parareal_baseline";
    case Method::ParaDInParareal: return "paradin_parareal";
  }
  return "unknown";
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    if (value == "heat") {
      cfg.problem = heat_problem();
    } else if (value == "burgers") {
      cfg.problem = burgers_problem();
    } else {
      throw InvalidArgument("problem must be 'heat' or 'burgers', got '" + value + "'");
    }
    cfg.problem_name = value;
  } else if (key == "nt") {
    cfg.nts = parse_int_list(key, value, 1);
  } else if (key == "nx") {
    cfg.nxs = parse_int_list(key, value, 1);
  } else if (key == "ny") {
    cfg.nys = parse_int_list(key, value, 1);
  } else if (key == "blocks") {
    cfg.blocks = parse_int_list(key, value, 1);
  } else if (key == "method") {
    cfg.method = parse_method(value);
  } else if (key == "cf") {
    long long v = parse_int(key, value);
    if (v < 0) throw InvalidArgument("cf must be >= 0 (0 selects the problem default)");
    cfg.cf = static_cast<int>(v);
  } else if (key == "cs") {
    long long v = parse_int(key, value);
    if (v < 1) throw InvalidArgument("cs must be >= 1");
    cfg.cs = static_cast<int>(v);
  } else if (key == "eps_newton") {
    double v = parse_real(key, value);
    if (!(v > 0.0)) throw InvalidArgument("eps_newton must be positive");
    cfg.newton.eps_newton = v;
    cfg.eps_set = true;
  } else if (key == "safety_factor") {
    double v = parse_real(key, value);
    if (!(v > 0.0)) throw InvalidArgument("safety_factor must be positive");
    cfg.newton.safety_factor = v;
  } else if (key == "max_newton") {
    cfg.newton.max_newton = static_cast<int>(parse_int(key, value));
    if (cfg.newton.max_newton < 1) throw InvalidArgument("max_newton must be >= 1");
  } else if (key == "max_parareal") {
    cfg.newton.max_parareal = static_cast<int>(parse_int(key, value));
    if (cfg.newton.max_parareal < 0)
      throw InvalidArgument("max_parareal must be >= 0 (0 selects the block count)");
  } else if (key == "norm") {
    cfg.newton.norm_kind = parse_norm_kind(value);
    cfg.norm_set = true;
  } else if (key == "mu0") {
    double v = parse_real(key, value);
    if (!(v > 0.0)) throw InvalidArgument("mu0 must be positive");
    cfg.problem.mu0 = v;
  } else if (key == "alpha") {
    double v = parse_real(key, value);
    if (!(v > 0.0)) throw InvalidArgument("alpha must be positive");
    cfg.problem.alpha = v;
  } else if (key == "shock_speed") {
    double v = parse_real(key, value);
    if (v == 0.0) throw InvalidArgument("shock_speed must be nonzero");
    cfg.problem.shock_speed = v;
  } else if (key == "mode") {
    cfg.topo.mode = parse_mode(value);
    cfg.mode_set = true;
  } else if (key == "workers") {
    long long v = parse_int(key, value);
    if (v < 1) throw InvalidArgument("workers must be >= 1");
    cfg.topo.physical_workers = static_cast<int>(v);
    cfg.workers_set = true;
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "timing") {
    cfg.timing = parse_flag(key, value);
  } else if (key == "dump_solution") {
    cfg.dump_solution = parse_flag(key, value);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    try {
      apply_setting(cfg, key, value);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void finalize_config(ExperimentConfig& cfg) {
  bool burgers = cfg.problem.kind == ProblemKind::Burgers;
  if (!cfg.eps_set) cfg.newton.eps_newton = burgers ? 1e-3 : 1e-8;
  if (!cfg.norm_set) cfg.newton.norm_kind = burgers ? NormKind::L1 : NormKind::L2;
  if (!cfg.mode_set) {
    if (const char* env = std::getenv("PARADIN_MODE")) {
      cfg.topo.mode = parse_mode(env);
      cfg.mode_set = true;
    }
  }
  if (!cfg.workers_set) {
    if (const char* env = std::getenv("PARADIN_WORKERS")) {
      long long v = parse_int("PARADIN_WORKERS", env);
      if (v < 1) throw InvalidArgument("PARADIN_WORKERS must be >= 1");
      cfg.topo.physical_workers = static_cast<int>(v);
      cfg.workers_set = true;
    }
  }
  size_t n = cfg.nts.size();
  auto broadcastable = [n](const std::vector<int>& v) {
    return v.empty() || v.size() == 1 || v.size() == n;
  };
  if (cfg.nxs.empty()) throw InvalidArgument("nx must list at least one size");
  if (!broadcastable(cfg.nxs) || !broadcastable(cfg.nys) || !broadcastable(cfg.blocks))
    throw InvalidArgument("nx, ny, and blocks must list one value or one per nt entry");
}

int default_blocks(ProblemKind kind, int nt) {
  struct Entry {
    int nt, m;
  };
  static const Entry heat[] = {{30, 1}, {60, 2}, {120, 4}, {240, 8}, {480, 16}};
  static const Entry burgers[] = {{30, 3}, {60, 6}, {120, 10}, {240, 16}, {480, 24}};
  bool is_burgers = kind == ProblemKind::Burgers;
  for (const Entry& e : (is_burgers ? burgers : heat))
    if (e.nt == nt) return e.m;
  // Off-table sizes: aim for the table's block length and round to a factor.
  int target_len = is_burgers ? 10 : 30;
  int m = std::max(1, nt / target_len);
  while (m > 1 && nt % m != 0) --m;
  return m;
}

int default_cf(ProblemKind kind, int nt, int nx, int ny) {
  int request = kind == ProblemKind::Burgers ? 3 : 4;
  return clamp_cf(request, nt, nx, ny);
}

GridSpec experiment_grid(ProblemKind kind, int nt, int nx, int ny) {
  if (kind == ProblemKind::Burgers) return make_grid(0.0, 1.0, 0.0, 1.0, 2.0, nx, ny, nt);
  return make_grid(0.1, 1.1, 0.1, 1.1, 1.0, nx, ny, nt);
}

double ErrorNorms::by_kind(NormKind kind) const {
  switch (kind) {
    case NormKind::L1: return l1;
    case NormKind::Linf: return linf;
    default: return l2;
  }
}

ErrorNorms error_norms(const SpaceTimeSolution& sol, const ProblemSpec& p, const GridSpec& g) {
  if (static_cast<int>(sol.levels.size()) != g.nt)
    throw InvalidArgument("error_norms: solution has " + std::to_string(sol.levels.size()) +
                          " levels, grid expects " + std::to_string(g.nt));
  std::vector<Field> errs;
  errs.reserve(sol.levels.size());
  for (int m = 1; m <= g.nt; ++m) {
    Field ex = exact_field(p, g, g.t(m));
    Field e(g.num_spatial());
    for (size_t i = 0; i < e.v.size(); ++i) e.v[i] = sol.levels[m - 1].v[i] - ex.v[i];
    errs.push_back(std::move(e));
  }
  ErrorNorms out;
  out.l1 = space_time_norm(g, errs, NormKind::L1);
  out.l2 = space_time_norm(g, errs, NormKind::L2);
  out.linf = space_time_norm(g, errs, NormKind::Linf);
  return out;
}

double predict_speedup(const SpeedupModel& m, SpeedupVariant variant) {
  if (m.nt < 1 || m.cf < 1 || m.p < 1 || m.k_p < 0 || m.cs < 1 || m.d < 1)
    throw InvalidArgument("speedup model parameters must be positive");
  double nt = static_cast<double>(m.nt);
  double coarse = nt / std::pow(static_cast<double>(m.cf), m.p);
  switch (variant) {
    case SpeedupVariant::ParaDIn:
      return nt / (coarse + 1.0);
    case SpeedupVariant::Combined:
      return nt / (coarse + 2.0 * m.k_p + 1.0);
    case SpeedupVariant::CombinedCoarsened:
      return nt / (coarse + (m.k_p + 1.0) / std::pow(static_cast<double>(m.cs), m.d) + m.k_p);
  }
  throw InvalidArgument("unknown speedup variant");
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  finalize_config(cfg);

  ExperimentReport report;
  std::ostringstream csv, rates, summary, failures;
  csv << "problem,nt,nx,ny,method,M,cf,cs,L1,L2,Linf,newton_iters,parareal_iters,jacobi_iters,"
         "wall_s,mode\n";
  rates << "problem,method,norm,nt_coarse,nx_coarse,nt_fine,nx_fine,e_coarse,e_fine,rate\n";

  const std::string mname = method_name(cfg.method);
  std::vector<SpaceTimeSolution> dumps;
  int observed_kp = 0;

  for (size_t i = 0; i < cfg.nts.size(); ++i) {
    ResolvedRun run = resolve_run(cfg, i);
    RunRow row;
    row.nt = run.grid.nt;
    row.nx = run.grid.nx;
    row.ny = run.grid.ny;
    row.blocks = cfg.method == Method::Sequential || cfg.method == Method::ParaDIn ? 1 : run.blocks;
    row.cf = cfg.method == Method::Sequential ? 1 : run.cf;
    row.cs = cfg.method == Method::PararealBaseline || cfg.method == Method::ParaDInParareal
                 ? cfg.cs
                 : 1;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      SolveReport rep = dispatch(cfg, cfg.method, run);
      row.err = error_norms(rep.solution, cfg.problem, run.grid);
      row.newton_iters = rep.newton_iters;
      row.parareal_iters = sum(rep.parareal_iters_per_newton);
      row.jacobi_iters = rep.jacobi_iters;
      for (int k : rep.parareal_iters_per_newton) observed_kp = std::max(observed_kp, k);
      if (cfg.dump_solution) dumps.push_back(std::move(rep.solution));
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
      double nan = std::numeric_limits<double>::quiet_NaN();
      row.err = {nan, nan, nan};
      if (cfg.dump_solution) dumps.emplace_back();
    }
    row.wall_s = cfg.timing
                     ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                     : 0.0;
    report.rows.push_back(row);

    csv << cfg.problem_name << ',' << row.nt << ',' << row.nx << ',' << row.ny << ',' << mname
        << ',' << row.blocks << ',' << row.cf << ',' << row.cs << ',' << format_double(row.err.l1)
        << ',' << format_double(row.err.l2) << ',' << format_double(row.err.linf) << ','
        << row.newton_iters << ',' << row.parareal_iters << ',' << row.jacobi_iters << ','
        << format_double(row.wall_s) << ',' << mode_name(cfg.topo.mode) << '\n';

    if (row.failed) {
      summary << cfg.problem_name << ' ' << grid_label(row.nt, row.nx, row.ny) << ' ' << mname
              << ": FAILED (" << row.error << ")\n";
      failures << grid_label(row.nt, row.nx, row.ny) << ": " << row.error << '\n';
    } else {
      summary << cfg.problem_name << ' ' << grid_label(row.nt, row.nx, row.ny) << ' ' << mname
              << ": L1=" << format_double(row.err.l1) << " L2=" << format_double(row.err.l2)
              << " Linf=" << format_double(row.err.linf) << " newton=" << row.newton_iters;
      if (row.parareal_iters > 0) summary << " parareal=" << row.parareal_iters;
      if (row.jacobi_iters > 0) summary << " jacobi=" << row.jacobi_iters;
      if (cfg.timing) summary << " wall_s=" << format_double(row.wall_s) << " (measured)";
      summary << '\n';
    }
  }

  for (size_t i = 0; i + 1 < report.rows.size(); ++i) {
    const RunRow& c = report.rows[i];
    const RunRow& f = report.rows[i + 1];
    if (c.failed || f.failed) continue;
    double ec = c.err.by_kind(cfg.newton.norm_kind);
    double ef = f.err.by_kind(cfg.newton.norm_kind);
    if (!(ec > 0.0) || !(ef > 0.0)) continue;
    double rate = std::log2(ec / ef);
    rates << cfg.problem_name << ',' << mname << ',' << norm_kind_name(cfg.newton.norm_kind) << ','
          << c.nt << ',' << c.nx << ',' << f.nt << ',' << f.nx << ',' << format_double(ec) << ','
          << format_double(ef) << ',' << format_double(rate) << '\n';
    summary << "rate (" << norm_kind_name(cfg.newton.norm_kind) << ") "
            << grid_label(c.nt, c.nx, c.ny) << " -> " << grid_label(f.nt, f.nx, f.ny) << ": "
            << format_double(rate) << '\n';
  }

  if (cfg.method != Method::Sequential && cfg.method != Method::BlockJacobi &&
      !report.rows.empty()) {
    SpeedupModel model;
    model.nt = report.rows.back().nt;
    model.cf = report.rows.back().cf;
    model.k_p = observed_kp > 0 ? observed_kp : 2;
    model.cs = cfg.cs;
    SpeedupVariant variant = cfg.method == Method::ParaDIn ? SpeedupVariant::ParaDIn
                             : cfg.cs > 1                  ? SpeedupVariant::CombinedCoarsened
                                                           : SpeedupVariant::Combined;
    const char* vname = variant == SpeedupVariant::ParaDIn             ? "paradin"
                        : variant == SpeedupVariant::CombinedCoarsened ? "combined+coarsening"
                                                                       : "combined";
    summary << "speedup model (" << vname << ", nt=" << model.nt << ", cf=" << model.cf
            << ", k_p=" << model.k_p << "): S=" << format_double(predict_speedup(model, variant))
            << " (model estimate; measured speedup depends on hardware)\n";
  }

  report.csv = csv.str();
  report.rates_csv = rates.str();
  report.summary = summary.str();

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path dir(cfg.out_dir);
    write_file((dir / "runs.csv").string(), report.csv);
    write_file((dir / "rates.csv").string(), report.rates_csv);
    write_file((dir / "summary.txt").string(), report.summary);
    std::ostringstream plot;
    plot << "# h " << norm_kind_name(cfg.newton.norm_kind) << "_error\n";
    for (const RunRow& row : report.rows) {
      if (row.failed) continue;
      GridSpec g = experiment_grid(cfg.problem.kind, row.nt, row.nx, row.ny);
      plot << format_double(g.hx) << ' ' << format_double(row.err.by_kind(cfg.newton.norm_kind))
           << '\n';
    }
    write_file((dir / "error_vs_h.dat").string(), plot.str());
    std::string flog = failures.str();
    if (!flog.empty()) write_file((dir / "failures.log").string(), flog);
    if (cfg.dump_solution) {
      for (size_t i = 0; i < report.rows.size(); ++i) {
        const RunRow& row = report.rows[i];
        if (row.failed) continue;
        GridSpec g = experiment_grid(cfg.problem.kind, row.nt, row.nx, row.ny);
        std::ostringstream dump;
        dump << "# t x y u\n";
        const SpaceTimeSolution& sol = dumps[i];
        for (int m = 1; m <= g.nt; ++m)
          for (int j = 1; j <= g.ny; ++j)
            for (int ii = 1; ii <= g.nx; ++ii)
              dump << format_double(g.t(m)) << ' ' << format_double(g.x(ii)) << ' '
                   << format_double(g.y(j)) << ' ' << format_double(sol.levels[m - 1].at(ii, j, g.nx))
                   << '\n';
        write_file((dir / ("solution_" + mname + "_" + grid_label(row.nt, row.nx, row.ny) + ".dat"))
                       .string(),
                   dump.str());
      }
    }
  }
  return report;
}

RunRow solve_single(const ExperimentConfig& cfg_in, size_t grid_index, SolveReport* full) {
  ExperimentConfig cfg = cfg_in;
  finalize_config(cfg);
  if (grid_index >= cfg.nts.size())
    throw InvalidArgument("grid index " + std::to_string(grid_index) + " out of range (config has " +
                          std::to_string(cfg.nts.size()) + " grids)");
  ResolvedRun run = resolve_run(cfg, grid_index);
  RunRow row;
  row.nt = run.grid.nt;
  row.nx = run.grid.nx;
  row.ny = run.grid.ny;
  row.blocks = run.blocks;
  row.cf = run.cf;
  row.cs = cfg.cs;
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep = dispatch(cfg, cfg.method, run);
  row.wall_s = cfg.timing
                   ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                   : 0.0;
  row.err = error_norms(rep.solution, cfg.problem, run.grid);
  row.newton_iters = rep.newton_iters;
  row.parareal_iters = sum(rep.parareal_iters_per_newton);
  row.jacobi_iters = rep.jacobi_iters;
  if (full) *full = std::move(rep);
  return row;
}

std::vector<CompareRow> compare_methods(const ExperimentConfig& cfg_in, Method a, Method b) {
  ExperimentConfig cfg = cfg_in;
  finalize_config(cfg);
  std::vector<CompareRow> rows;
  for (size_t i = 0; i < cfg.nts.size(); ++i) {
    ResolvedRun run = resolve_run(cfg, i);
    SolveReport ra = dispatch(cfg, a, run);
    SolveReport rb = dispatch(cfg, b, run);
    CompareRow row;
    row.nt = run.grid.nt;
    row.nx = run.grid.nx;
    row.ny = run.grid.ny;
    row.max_diff = max_pointwise_diff(ra.solution, rb.solution);
    row.tolerance = 10.0 * cfg.newton.eps_newton;
    row.ok = row.max_diff <= row.tolerance;
    rows.push_back(row);
  }
  return rows;
}

namespace {

struct Check {
  bool ok;
  std::string text;
};

void emit(std::ostream& out, std::vector<Check>& checks, bool ok, const std::string& text) {
  out << (ok ? "[PASS] " : "[FAIL] ") << text << '\n';
  checks.push_back({ok, text});
}

int failures_of(const std::vector<Check>& checks) {
  int n = 0;
  for (const Check& c : checks) n += c.ok ? 0 : 1;
  return n;
}

struct TableCase {
  int nt, nx, ny;
  double ref_err;
};

int verify_table(std::ostream& out, const Topology& topo, const std::string& problem,
                 const std::vector<TableCase>& cases, const std::vector<double>& ref_rates,
                 NormKind norm) {
  std::vector<Check> checks;
  std::vector<double> errs;
  for (const TableCase& tc : cases) {
    ExperimentConfig cfg;
    apply_setting(cfg, "problem", problem);
    cfg.method = Method::Sequential;
    cfg.nts = {tc.nt};
    cfg.nxs = {tc.nx};
    cfg.nys = {tc.ny};
    cfg.topo = topo;
    cfg.mode_set = true;
    cfg.workers_set = true;
    ExperimentReport rep = run_experiment(cfg);
    const RunRow& row = rep.rows.at(0);
    std::string label = problem + " " + grid_label(tc.nt, tc.nx, tc.ny);
    if (row.failed) {
      emit(out, checks, false, label + " solve failed: " + row.error);
      errs.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double e = row.err.by_kind(norm);
    errs.push_back(e);
    bool ok = e >= 0.5 * tc.ref_err && e <= 2.0 * tc.ref_err;
    emit(out, checks, ok,
         label + " " + norm_kind_name(norm) + "=" + format_double(e) + " reference " +
             format_double(tc.ref_err) + " (factor-2 band)");
  }
  for (size_t i = 0; i < ref_rates.size() && i + 1 < errs.size(); ++i) {
    double rate = std::log2(errs[i] / errs[i + 1]);
    bool ok = std::isfinite(rate) && std::abs(rate - ref_rates[i]) <= 0.15;
    emit(out, checks, ok,
         problem + " rate " + grid_label(cases[i].nt, cases[i].nx, cases[i].ny) + " -> " +
             grid_label(cases[i + 1].nt, cases[i + 1].nx, cases[i + 1].ny) + " = " +
             format_double(rate) + " reference " + format_double(ref_rates[i]) + " (+/-0.15)");
  }
  return failures_of(checks);
}

int verify_equivalence(std::ostream& out, const Topology& topo) {
  std::vector<Check> checks;
  struct Case {
    const char* problem;
    int nt, nx, ny;
  };
  const Case cases[] = {{"heat", 30, 4, 4},   {"heat", 60, 8, 8},    {"heat", 120, 16, 16},
                        {"burgers", 30, 7, 7}, {"burgers", 60, 11, 11}};
  const Method others[] = {Method::ParaDIn, Method::ParaDInParareal};
  for (const Case& c : cases) {
    ExperimentConfig cfg;
    apply_setting(cfg, "problem", c.problem);
    cfg.nts = {c.nt};
    cfg.nxs = {c.nx};
    cfg.nys = {c.ny};
    cfg.topo = topo;
    cfg.mode_set = true;
    cfg.workers_set = true;
    for (Method m : others) {
      std::string label = std::string(c.problem) + " " + grid_label(c.nt, c.nx, c.ny) +
                          " sequential vs " + method_name(m);
      try {
        std::vector<CompareRow> rows = compare_methods(cfg, Method::Sequential, m);
        const CompareRow& row = rows.at(0);
        emit(out, checks, row.ok,
             label + ": max diff " + format_double(row.max_diff) + " tolerance " +
                 format_double(row.tolerance));
      } catch (const Error& e) {
        emit(out, checks, false, label + " failed: " + std::string(e.what()));
      }
    }
  }
  return failures_of(checks);
}

int verify_proposition1(std::ostream& out, const Topology& topo) {
  std::vector<Check> checks;
  ProblemSpec p = heat_problem();
  GridSpec g = experiment_grid(ProblemKind::NonlinearHeat, 16, 4, 4);
  SpaceTimeSolution u;
  u.initial = initial_field(p, g);
  u.levels.assign(static_cast<size_t>(g.nt), u.initial);
  LinearSystem sys = assemble_linear_system(p, g, u);
  std::vector<std::vector<double>> direct = linear_paradin(sys, topo);
  auto max_diff = [](const std::vector<std::vector<double>>& a,
                     const std::vector<std::vector<double>>& b) {
    double m = 0.0;
    for (size_t l = 0; l < a.size(); ++l)
      for (size_t i = 0; i < a[l].size(); ++i) m = std::max(m, std::abs(a[l][i] - b[l][i]));
    return m;
  };
  for (int m : {2, 4, 8}) {
    BlockLayout layout = BlockLayout::for_grid(g, m);
    auto exact = linear_block_jacobi(sys, layout, g, NormKind::L2, 0.0, m, topo);
    double d_exact = max_diff(exact, direct);
    emit(out, checks, d_exact <= 1e-10,
         "block-Jacobi heat 16x4x4 M=" + std::to_string(m) + ": diff after M sweeps " +
             format_double(d_exact) + " (<= 1e-10)");
    auto early = linear_block_jacobi(sys, layout, g, NormKind::L2, 0.0, m - 1, topo);
    double d_early = max_diff(early, direct);
    emit(out, checks, d_early > 1e-8,
         "block-Jacobi heat 16x4x4 M=" + std::to_string(m) + ": diff after M-1 sweeps " +
             format_double(d_early) + " (> 1e-8)");
  }
  return failures_of(checks);
}

}  // namespace

int run_verify_suite(const std::string& suite, std::ostream& out, const Topology& topo) {
  if (suite == "table1") {
    return verify_table(out, topo, "heat",
                        {{30, 4, 4, 2.40e-5}, {60, 8, 8, 8.50e-6}, {120, 16, 16, 2.65e-6}},
                        {1.50, 1.68}, NormKind::L2);
  }
  if (suite == "table4") {
    return verify_table(out, topo, "burgers",
                        {{30, 7, 7, 3.00e-2}, {60, 11, 11, 2.12e-2}, {120, 21, 21, 1.33e-2}},
                        {0.50, 0.67}, NormKind::L1);
  }
  if (suite == "equivalence") return verify_equivalence(out, topo);
  if (suite == "proposition1") return verify_proposition1(out, topo);
  throw InvalidArgument("unknown verify suite '" + suite +
                        "' (expected table1, table4, equivalence, or proposition1)");
}

}  // namespace paradin
