/* Public C interface of the paradin shared library.
 *
 * The library solves 2-D nonlinear heat and viscous Burgers equations with
 * BDF1 time stepping, either sequentially or with parallel-in-time methods
 * (ParaDIn product chains, block-Jacobi, linear Parareal, and the combined
 * ParaDIn-Parareal scheme), and drives grid-refinement experiments.
 *
 * Usage: create or load a config, adjust it with paradin_config_set (the
 * same key=value vocabulary as the config file format), then run either a
 * whole experiment (CSV reports) or a single grid solve.  All functions are
 * thread-compatible: distinct configs may be used from distinct threads, but
 * a single config must not be shared without external synchronization.
 *
 * Errors: functions return a paradin_status; the text of the most recent
 * failure in the calling thread is available via paradin_last_error().
 */
#ifndef PARADIN_PARADIN_H
#define PARADIN_PARADIN_H

#include <stdint.h>

#if defined(_WIN32)
#define PARADIN_API __declspec(dllexport)
#elif defined(PARADIN_BUILDING)
#define PARADIN_API __attribute__((visibility("default")))
#else
#define PARADIN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum paradin_status {
  PARADIN_OK = 0,
  PARADIN_ERR_INVALID_ARGUMENT = 1, /* bad key, value, or call contract */
  PARADIN_ERR_SINGULAR_MATRIX = 2,  /* LU factorization hit a zero pivot */
  PARADIN_ERR_ITERATION_CAP = 3,    /* Newton failed to converge within the cap */
  PARADIN_ERR_DIVERGENCE = 4,       /* Parareal/Jacobi iteration diverged */
  PARADIN_ERR_DEADLOCK = 5,         /* worker stage deadlocked (emulated mode) */
  PARADIN_ERR_IO = 6,               /* config or report file I/O failed */
  PARADIN_ERR_INTERNAL = 7          /* any other failure */
} paradin_status;

/* Opaque experiment configuration. */
typedef struct paradin_config paradin_config;

/* Result of one grid solve. */
typedef struct paradin_run_report {
  double l1;   /* space-time error norms against the exact solution */
  double l2;
  double linf;
  int32_t nt, nx, ny;      /* grid actually solved */
  int32_t blocks, cf, cs;  /* layout actually used */
  int32_t newton_iters;
  int32_t parareal_iters;  /* summed over Newton iterations */
  int32_t jacobi_iters;
  double wall_s;           /* 0 when timing = off */
} paradin_run_report;

/* Library version as "major.minor.patch". */
PARADIN_API const char* paradin_version(void);

/* Message of the most recent error in this thread; empty string if the last
 * call succeeded.  The pointer stays valid until the next library call on
 * this thread. */
PARADIN_API const char* paradin_last_error(void);

/* Fresh config with the built-in defaults (heat problem, one 30x4x4 grid,
 * sequential method, emulated mode).  NULL only on allocation failure. */
PARADIN_API paradin_config* paradin_config_create(void);

/* Config parsed from a flat key = value file.  NULL on error (see
 * paradin_last_error). */
PARADIN_API paradin_config* paradin_config_load(const char* path);

/* Applies one setting; keys match the config file format: problem, nt, nx,
 * ny, blocks, method, cf, cs, eps_newton, safety_factor, max_newton,
 * max_parareal, norm, mu0, alpha, shock_speed, mode, workers, out_dir, seed,
 * timing, dump_solution. */
PARADIN_API paradin_status paradin_config_set(paradin_config* cfg, const char* key,
                                              const char* value);

PARADIN_API void paradin_config_destroy(paradin_config* cfg);

/* Runs every configured grid with the configured method.  Individual solver
 * failures become failed CSV rows and do not abort the run; *out_failed_rows
 * (optional) receives their count.  When the config sets out_dir, report
 * files are written there.  When out_csv / out_summary are non-NULL they
 * receive malloc'd copies of the CSV and the human-readable summary; release
 * them with paradin_string_free. */
PARADIN_API paradin_status paradin_run_experiment(const paradin_config* cfg, char** out_csv,
                                                  char** out_summary, int32_t* out_failed_rows);

/* Solves the single grid at grid_index (into the config's nt list) and fills
 * *out.  Unlike paradin_run_experiment, solver failures are returned as
 * status codes. */
PARADIN_API paradin_status paradin_solve_grid(const paradin_config* cfg, int32_t grid_index,
                                              paradin_run_report* out);

/* Receives one report line (without trailing newline). */
typedef void (*paradin_line_callback)(const char* line, void* user);

/* Runs a named verification suite: "table1", "table4", "equivalence", or
 * "proposition1".  Each check line is passed to cb (when non-NULL);
 * *out_failures (optional) receives the number of failed checks.  cfg is
 * optional and only supplies mode/workers; pass NULL for defaults.  Returns
 * PARADIN_OK when the suite ran, even if checks failed. */
PARADIN_API paradin_status paradin_verify(const paradin_config* cfg, const char* suite,
                                          paradin_line_callback cb, void* user,
                                          int32_t* out_failures);

/* Closed-form speedup estimate.  variant is "paradin", "combined", or
 * "combined_coarsened"; cs and d are ignored unless coarsening applies, and
 * p is the cost exponent of the coarse-grid solve (3 for these 2-D runs). */
PARADIN_API paradin_status paradin_predict_speedup(const char* variant, int32_t nt, int32_t cf,
                                                   int32_t p, int32_t k_p, int32_t cs, int32_t d,
                                                   double* out);

/* Frees a string returned by paradin_run_experiment. */
PARADIN_API void paradin_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PARADIN_PARADIN_H */
