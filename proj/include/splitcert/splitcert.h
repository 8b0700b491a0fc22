#ifndef SPLITCERT_SPLITCERT_H
#define SPLITCERT_SPLITCERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPLITCERT_BUILDING_LIBRARY)
#define SC_API __attribute__((visibility("default")))
#else
#define SC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_CONFIG = 1,   /* unknown problem/algorithm, bad parameter, inapplicable theorem */
  SC_ERR_DOMAIN = 2,   /* point outside dom f */
  SC_ERR_CONTRACT = 3, /* violated precondition */
  SC_ERR_PARSE = 4,    /* missing or malformed file */
  SC_ERR_INVALID_ARGUMENT = 5,
  SC_ERR_INTERNAL = 6
} sc_status;

/* An immutable run trace together with its reference data. */
typedef struct sc_trace sc_trace;

typedef struct sc_run_config {
  const char* problem_id;
  const char* algo; /* fb, fb-smooth, psg, inc, dr */
  double alpha;
  double theta;
  double eps;
  int64_t T;
  uint64_t seed;
} sc_run_config;

/* alpha 0.1, theta 0.5, eps 0, T 1000, seed 0, strings NULL. */
SC_API void sc_run_config_init(sc_run_config* config);

/* Message of the last failed call on this thread; "" if none. */
SC_API const char* sc_last_error(void);
SC_API const char* sc_version(void);

/* Strings returned through char** parameters are owned by the caller. */
SC_API void sc_string_free(char* s);

SC_API sc_status sc_catalog_json(char** out);
SC_API sc_status sc_problem_json(const char* problem_id, char** out);

SC_API sc_status sc_run(const sc_run_config* config, sc_trace** out);
SC_API void sc_trace_destroy(sc_trace* trace);
SC_API int64_t sc_trace_length(const sc_trace* trace);
SC_API const char* sc_trace_algo(const sc_trace* trace);

/* Writes path (trace CSV), path.json (metadata) and path.iterates.csv. */
SC_API sc_status sc_trace_write(const sc_trace* trace, const char* path);
SC_API sc_status sc_trace_read(const char* path, sc_trace** out);
SC_API sc_status sc_trace_csv(const sc_trace* trace, char** out);

/* Which iterates join x_ref as test points; AUTO thins to t = 1, 2, 4, ...
 * when T > 1e4. */
typedef enum sc_iterate_points {
  SC_ITERATES_AUTO = 0,
  SC_ITERATES_ALL = 1,
  SC_ITERATES_GEOMETRIC = 2,
  SC_ITERATES_NONE = 3
} sc_iterate_points;

/* constants_source: NULL or "auto", a provenance name, or a JSON file path.
 * B <= 0 or NaN means "use the analytic bound, else the observed one".
 * tol_rel <= 0 means the default 1e-9. */
SC_API sc_status sc_certify(const sc_trace* trace, const char* constants_source, double B,
                            double tol_rel, sc_iterate_points iterates, int* passed,
                            char** json_out);

/* violated is set to 1 when some T has gap > bound. csv_out may be NULL. */
SC_API sc_status sc_bounds(const sc_trace* trace, const char* theorem, double B, int* violated,
                           char** csv_out, char** summary_out);

SC_API sc_status sc_slope(const sc_trace* trace, double window_decades, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
