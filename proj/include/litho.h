/*
 * Public C interface to the litho mask-synthesis core.
 *
 * All state lives behind an opaque context handle created from a JSON
 * experiment configuration. Functions return a litho_status; on failure the
 * context stores a human-readable message retrievable with
 * litho_context_last_error(). Successful coarse operations leave a JSON
 * summary retrievable with litho_context_report_json().
 *
 * litho_context_create* always allocates a context (even on failure, so the
 * error message can be read); destroy it with litho_context_destroy().
 */
#ifndef LITHO_H
#define LITHO_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LITHO_API __declspec(dllexport)
#else
#define LITHO_API __attribute__((visibility("default")))
#endif

typedef enum litho_status {
    LITHO_OK = 0,
    LITHO_ERROR_VALIDATION = 2, /* bad config, geometry, file format, grid mismatch */
    LITHO_ERROR_NUMERICAL = 3,  /* eigensolver or optimizer failure, non-finite objective */
    LITHO_ERROR_IO = 4,         /* filesystem problem */
    LITHO_ERROR_INTERNAL = 5
} litho_status;

typedef struct litho_context litho_context;

LITHO_API const char* litho_version(void);

LITHO_API litho_status litho_context_create(const char* config_json, litho_context** out_ctx);
LITHO_API litho_status litho_context_create_from_file(const char* config_path, litho_context** out_ctx);
LITHO_API void litho_context_destroy(litho_context* ctx);

LITHO_API const char* litho_context_last_error(const litho_context* ctx);
LITHO_API const char* litho_context_report_json(const litho_context* ctx);

/* config overrides, applied before the first stateful operation */
LITHO_API litho_status litho_context_set_seed(litho_context* ctx, unsigned long long seed);
LITHO_API litho_status litho_context_set_hvar_list(litho_context* ctx, const double* values, size_t count);

/* build target + SOCS model (cache-aware) + exposure threshold */
LITHO_API litho_status litho_prepare(litho_context* ctx);

/* force-build the SOCS decomposition and store it under cache_dir */
LITHO_API litho_status litho_build_socs(litho_context* ctx, const char* cache_dir);

/* emit the configured target pattern as a PBM raster */
LITHO_API litho_status litho_write_target(litho_context* ctx, const char* out_path);

/* full optimization run; artifacts (trace.csv, checkpoints, rasters,
 * report.json) are written under out_dir */
LITHO_API litho_status litho_optimize(litho_context* ctx, const char* out_dir);

/* exposure + metrics for a stored mask (.field/.pgm/.pbm) */
LITHO_API litho_status litho_analyze(litho_context* ctx, const char* mask_path, const char* out_dir);

/* threshold sweep table for a stored mask, written as CSV */
LITHO_API litho_status litho_sweep(litho_context* ctx, const char* mask_path, const char* out_csv);

/* verify analytic gradients against the finite-difference oracle on a random
 * grid_n x grid_n phase field; LITHO_ERROR_NUMERICAL if any check exceeds its
 * tolerance (details in the report JSON) */
LITHO_API litho_status litho_gradcheck(litho_context* ctx, int grid_n, unsigned long long seed);

#ifdef __cplusplus
}
#endif

#endif /* LITHO_H */
