/* lefturn C API.
 *
 * Opaque handles, integer status codes. Every function that can fail returns
 * a lefturn_status and leaves a message for lefturn_last_error() on the
 * calling thread. Strings handed out through char** are owned by the caller
 * and released with lefturn_string_free().
 */
#ifndef LEFTURN_H
#define LEFTURN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LEFTURN_BUILDING)
#    define LEFTURN_API __declspec(dllexport)
#  else
#    define LEFTURN_API __declspec(dllimport)
#  endif
#else
#  define LEFTURN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lefturn_status {
  LEFTURN_OK = 0,
  LEFTURN_E_ARG = 1,     /* null handle, bad index, bad worker count */
  LEFTURN_E_CONFIG = 2,  /* malformed or invalid configuration */
  LEFTURN_E_IO = 3,      /* file could not be read or written */
  LEFTURN_E_RUNTIME = 4  /* anything else raised by the core */
} lefturn_status;

/* Controller ids, matching the order used in reports. */
enum { LEFTURN_BASE_AV1 = 0, LEFTURN_BASE_AV2 = 1, LEFTURN_SITUATION_AWARE = 2 };

typedef struct lefturn_config lefturn_config;
typedef struct lefturn_result lefturn_result;

/* One aggregated (volume, controller) cell. Reductions are percent and NaN
 * when undefined (zero baseline, missing baseline, or the baseline itself). */
typedef struct lefturn_summary_row {
  double volume;
  int controller;
  int runs;
  int collisions;
  int infeasible;
  double brake_mean;
  double tt_subject_mean;
  double tt_follower_mean;
  double dwell_mean;
  double brake_red_vs_base1;
  double brake_red_vs_base2;
  double tt_subject_red_vs_base1;
  double tt_subject_red_vs_base2;
  double tt_follower_red_vs_base1;
  double tt_follower_red_vs_base2;
} lefturn_summary_row;

LEFTURN_API const char* lefturn_version(void);
/* Message of the last failure on this thread; "" if none. */
LEFTURN_API const char* lefturn_last_error(void);
LEFTURN_API void lefturn_string_free(char* s);

/* Worker count from LEFTURN_WORKERS, else the hardware concurrency. */
LEFTURN_API int lefturn_default_workers(void);

LEFTURN_API lefturn_status lefturn_config_default(lefturn_config** out);
LEFTURN_API lefturn_status lefturn_config_parse(const char* json, lefturn_config** out);
LEFTURN_API lefturn_status lefturn_config_load(const char* path, lefturn_config** out);
LEFTURN_API void lefturn_config_free(lefturn_config* c);
LEFTURN_API lefturn_status lefturn_config_to_json(const lefturn_config* c, char** out);
LEFTURN_API size_t lefturn_config_warning_count(const lefturn_config* c);
/* NULL when i is out of range. Valid while the handle lives. */
LEFTURN_API const char* lefturn_config_warning(const lefturn_config* c, size_t i);

/* Runs every configured cell. When out_dir is non-NULL it must exist and
 * receives metrics.csv, summary.csv, run_info.json and trace files. */
LEFTURN_API lefturn_status lefturn_run(const lefturn_config* c, int workers, const char* out_dir,
                                       lefturn_result** out);
/* As lefturn_run, plus comparison.md. Needs at least two controllers
 * (LEFTURN_E_CONFIG otherwise). */
LEFTURN_API lefturn_status lefturn_compare(const lefturn_config* c, int workers, const char* out_dir,
                                           lefturn_result** out);
LEFTURN_API void lefturn_result_free(lefturn_result* r);

LEFTURN_API size_t lefturn_result_run_count(const lefturn_result* r);
LEFTURN_API size_t lefturn_result_collision_runs(const lefturn_result* r);
LEFTURN_API size_t lefturn_result_infeasible_runs(const lefturn_result* r);
LEFTURN_API size_t lefturn_result_summary_count(const lefturn_result* r);
LEFTURN_API lefturn_status lefturn_result_summary(const lefturn_result* r, size_t i, lefturn_summary_row* out);
/* Markdown comparison table; LEFTURN_E_CONFIG with fewer than two controllers. */
LEFTURN_API lefturn_status lefturn_result_report(const lefturn_result* r, char** out);

/* Reads metrics.csv (and traces) in dir and writes the SVG plots there.
 * *out receives the written paths, one per line. */
LEFTURN_API lefturn_status lefturn_plot(const char* dir, char** out);

/* Optimizer-vs-oracle comparison table as CSV. */
LEFTURN_API lefturn_status lefturn_oracle_table(uint64_t seed, int instances, char** out);

#ifdef __cplusplus
}
#endif

#endif /* LEFTURN_H */
