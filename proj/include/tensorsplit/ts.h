/* tensorsplit C API: opaque handles + integer status codes.
 *
 * Every function returns ts_status (TS_OK on success); on failure
 * ts_last_error_message() carries a thread-local description. Out-pointers
 * are written only on success. Handles must be destroyed with the matching
 * *_destroy call; destroying NULL is a no-op.
 */
#ifndef TENSORSPLIT_TS_H
#define TENSORSPLIT_TS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t ts_status;

enum {
  TS_OK = 0,
  TS_ERR_INVALID_ARG = 1,
  TS_ERR_INDEFINITE_METRIC = 2,
  TS_ERR_GRID_MISMATCH = 3,
  TS_ERR_KIND_MISMATCH = 4,
  TS_ERR_NOT_CONVERGED = 5,
  TS_ERR_INCONSISTENT_RHS = 6,
  TS_ERR_IO = 7,
  TS_ERR_PARSE = 8,
  TS_ERR_INTERNAL = 9
};

typedef struct ts_grid ts_grid;
typedef struct ts_metric ts_metric;
typedef struct ts_field ts_field;
typedef struct ts_decomposition ts_decomposition;

const char* ts_version(void);
/* Thread-local message for the most recent failing call in this thread. */
const char* ts_last_error_message(void);
void ts_string_free(char* s);

/* ---- grid ---- */
ts_status ts_grid_create(int32_t n, const int32_t* dims, const double* lengths, ts_grid** out);
void ts_grid_destroy(ts_grid* g);
ts_status ts_grid_dim(const ts_grid* g, int32_t* n_out);
ts_status ts_grid_points(const ts_grid* g, uint64_t* points_out);

/* ---- metric ---- */
/* spec_json: the metric spec object or builtin shorthand as in config files. */
ts_status ts_metric_create(const ts_grid* g, const char* spec_json, ts_metric** out);
void ts_metric_destroy(ts_metric* m);

/* ---- fields ---- */
/* kind: "scalar" | "oneform" | "vector" | "symtensor" | "twoform".
 * data may be NULL (zero field); length must be ncomp * points. */
ts_status ts_field_create(const ts_grid* g, const char* kind, const double* data, size_t len,
                          ts_field** out);
void ts_field_destroy(ts_field* f);
ts_status ts_field_kind(const ts_field* f, const char** kind_out);
ts_status ts_field_size(const ts_field* f, size_t* len_out);
ts_status ts_field_copy_data(const ts_field* f, double* out, size_t len);
ts_status ts_field_read(const char* path, ts_field** out);
ts_status ts_field_write(const ts_field* f, const char* path);

/* weighted L2 inner product (full g-contraction; strict-upper for 2-forms) */
ts_status ts_l2_inner(const ts_field* a, const ts_field* b, const ts_metric* m, double* out);

/* ---- decompositions ----
 * options_json: {"solve":{...},"kernel":{...},"order":2|4,"seed":...} (all optional). */
ts_status ts_berger_ebin(const ts_metric* m, const ts_field* phi, const char* options_json,
                         ts_decomposition** out);
ts_status ts_york(const ts_metric* m, const ts_field* phi, const char* options_json,
                  ts_decomposition** out);
void ts_decomposition_destroy(ts_decomposition* d);
/* part: "theta" | "phi0" | "lambda" | "phi_tt" (per decomposition kind) */
ts_status ts_decomposition_part(const ts_decomposition* d, const char* part, ts_field** out);
/* diagnostics + solver stats as a JSON document; free with ts_string_free */
ts_status ts_decomposition_diagnostics(const ts_decomposition* d, char** json_out);

/* ---- full command runner (the CLI entry point) ----
 * Executes one fully-resolved config document and returns the report JSON.
 * exit_code: 0 all checks pass, 2 solver non-convergence, 3 failed checks.
 * Config errors return TS_ERR_PARSE / TS_ERR_INVALID_ARG (CLI maps to 1). */
ts_status ts_run(const char* config_json, char** report_json_out, int32_t* exit_code_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TENSORSPLIT_TS_H */
