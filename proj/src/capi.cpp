#include "paradin/paradin.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "harness.hpp"

struct paradin_config {
  paradin::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
paradin_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PARADIN_OK;
  } catch (const paradin::InvalidArgument& e) {
    g_last_error = e.what();
    return PARADIN_ERR_INVALID_ARGUMENT;
  } catch (const paradin::SingularMatrix& e) {
    g_last_error = e.what();
    return PARADIN_ERR_SINGULAR_MATRIX;
  } catch (const paradin::IterationCap& e) {
    g_last_error = e.what();
    return PARADIN_ERR_ITERATION_CAP;
  } catch (const paradin::Divergence& e) {
    g_last_error = e.what();
    return PARADIN_ERR_DIVERGENCE;
  } catch (const paradin::Deadlock& e) {
    g_last_error = e.what();
    return PARADIN_ERR_DEADLOCK;
  } catch (const paradin::IoError& e) {
    g_last_error = e.what();
    return PARADIN_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PARADIN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PARADIN_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* paradin_version(void) { return "0.1.0"; }

const char* paradin_last_error(void) { return g_last_error.c_str(); }

paradin_config* paradin_config_create(void) {
  paradin_config* cfg = new (std::nothrow) paradin_config();
  if (!cfg) g_last_error = "allocation failed";
  return cfg;
}

paradin_config* paradin_config_load(const char* path) {
  if (!path) {
    g_last_error = "path is NULL";
    return nullptr;
  }
  paradin_config* out = nullptr;
  paradin_status st = guarded([&] {
    auto cfg = paradin::load_config(path);
    out = new paradin_config{std::move(cfg)};
  });
  return st == PARADIN_OK ? out : nullptr;
}

paradin_status paradin_config_set(paradin_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (!cfg || !key || !value) throw paradin::InvalidArgument("config, key, and value required");
    paradin::apply_setting(cfg->cfg, key, value);
  });
}

void paradin_config_destroy(paradin_config* cfg) { delete cfg; }

paradin_status paradin_run_experiment(const paradin_config* cfg, char** out_csv,
                                      char** out_summary, int32_t* out_failed_rows) {
  return guarded([&] {
    if (!cfg) throw paradin::InvalidArgument("config required");
    paradin::ExperimentReport report = paradin::run_experiment(cfg->cfg);
    if (out_csv) *out_csv = dup_string(report.csv);
    if (out_summary) *out_summary = dup_string(report.summary);
    if (out_failed_rows) {
      int32_t failed = 0;
      for (const paradin::RunRow& row : report.rows) failed += row.failed ? 1 : 0;
      *out_failed_rows = failed;
    }
  });
}

paradin_status paradin_solve_grid(const paradin_config* cfg, int32_t grid_index,
                                  paradin_run_report* out) {
  return guarded([&] {
    if (!cfg || !out) throw paradin::InvalidArgument("config and report required");
    if (grid_index < 0) throw paradin::InvalidArgument("grid index must be >= 0");
    paradin::RunRow row = paradin::solve_single(cfg->cfg, static_cast<size_t>(grid_index));
    *out = paradin_run_report{};
    out->l1 = row.err.l1;
    out->l2 = row.err.l2;
    out->linf = row.err.linf;
    out->nt = row.nt;
    out->nx = row.nx;
    out->ny = row.ny;
    out->blocks = row.blocks;
    out->cf = row.cf;
    out->cs = row.cs;
    out->newton_iters = row.newton_iters;
    out->parareal_iters = row.parareal_iters;
    out->jacobi_iters = row.jacobi_iters;
    out->wall_s = row.wall_s;
  });
}

paradin_status paradin_verify(const paradin_config* cfg, const char* suite,
                              paradin_line_callback cb, void* user, int32_t* out_failures) {
  return guarded([&] {
    if (!suite) throw paradin::InvalidArgument("suite name required");
    paradin::Topology topo;
    if (cfg) {
      paradin::ExperimentConfig finalized = cfg->cfg;
      paradin::finalize_config(finalized);
      topo = finalized.topo;
    }
    std::ostringstream lines;
    int failures = paradin::run_verify_suite(suite, lines, topo);
    if (cb) {
      std::istringstream in(lines.str());
      std::string line;
      while (std::getline(in, line)) cb(line.c_str(), user);
    }
    if (out_failures) *out_failures = failures;
  });
}

paradin_status paradin_predict_speedup(const char* variant, int32_t nt, int32_t cf, int32_t p,
                                       int32_t k_p, int32_t cs, int32_t d, double* out) {
  return guarded([&] {
    if (!variant || !out) throw paradin::InvalidArgument("variant and output required");
    paradin::SpeedupVariant v;
    std::string name(variant);
    if (name == "paradin") {
      v = paradin::SpeedupVariant::ParaDIn;
    } else if (name == "combined") {
      v = paradin::SpeedupVariant::Combined;
    } else if (name == "combined_coarsened") {
      v = paradin::SpeedupVariant::CombinedCoarsened;
    } else {
      throw paradin::InvalidArgument(
          "variant must be 'paradin', 'combined', or 'combined_coarsened'");
    }
    paradin::SpeedupModel model;
    model.nt = nt;
    model.cf = cf;
    model.p = p;
    model.k_p = k_p;
    model.cs = cs;
    model.d = d;
    *out = paradin::predict_speedup(model, v);
  });
}

void paradin_string_free(char* s) { std::free(s); }

}  // extern "C"
