/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef DEBTSCOPE_H
#define DEBTSCOPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsGateStatus {
  DS_GATE_STATUS_PASS = 0,
  DS_GATE_STATUS_WARN = 1,
  DS_GATE_STATUS_FAIL = 2,
} DsGateStatus;

typedef enum DsPlotFormat {
  DS_PLOT_FORMAT_CSV = 0,
  DS_PLOT_FORMAT_SVG = 1,
} DsPlotFormat;

typedef enum DsReportFormat {
  DS_REPORT_FORMAT_TEXT = 0,
  DS_REPORT_FORMAT_CSV = 1,
  DS_REPORT_FORMAT_HTML = 2,
  DS_REPORT_FORMAT_JSON = 3,
} DsReportFormat;

/**
 * Result codes.
 */
typedef enum DsStatus {
  DS_STATUS_OK = 0,
  /**
   * A required pointer was null, a string was not UTF-8, or an effort
   * string did not parse.
   */
  DS_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The project root or a named file does not exist.
   */
  DS_STATUS_NOT_FOUND = 2,
  DS_STATUS_IO = 3,
  /**
   * Bad config, rule manifest, gate config or coverage report.
   */
  DS_STATUS_CONFIG = 4,
  /**
   * The history store is held by another writer.
   */
  DS_STATUS_LOCKED = 5,
  /**
   * The history store contains a record that does not parse.
   */
  DS_STATUS_CORRUPT = 6,
  DS_STATUS_UNKNOWN_RUN = 7,
  DS_STATUS_UNKNOWN_METRIC = 8,
  /**
   * The metric exists but has no value for this run (e.g. coverage without
   * a coverage report).
   */
  DS_STATUS_NO_VALUE = 9,
  /**
   * A bug inside the library; the call had no effect.
   */
  DS_STATUS_INTERNAL = 10,
} DsStatus;

/**
 * One analysis run: a fresh analysis or a run loaded from history.
 */
typedef struct DsAnalysis DsAnalysis;

/**
 * A project's run history.
 */
typedef struct DsStore DsStore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or null if none. The
 * pointer stays valid until the next failing call on this thread.
 */
const char *ds_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ds_version(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ds_string_free(char *s);

/**
 * Analyze the project at `root`.
 *
 * `config` names a `debtscope.conf`; null uses the one in `root` if present.
 * `coverage` names an LCOV or Cobertura report, or null. When `record` is
 * true the run is appended to the project's history and gets a run id.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum DsStatus ds_analyze(const char *root,
                         const char *config,
                         const char *coverage,
                         bool record,
                         struct DsAnalysis **out);

/**
 * Release an analysis. Null is ignored.
 *
 * # Safety
 * `a` must come from this library and not have been freed already.
 */
void ds_analysis_free(struct DsAnalysis *a);

/**
 * Run id of the analysis; 0 when it was not recorded.
 *
 * # Safety
 * `a` must be a live analysis handle or null (which yields 0).
 */
uint64_t ds_analysis_run_id(const struct DsAnalysis *a);

/**
 * Look up a metric by key (e.g. `"td_ratio"`, `"blocker_issues"`).
 *
 * # Safety
 * `a` must be a live handle, `key` NUL-terminated, `value` writable.
 */
enum DsStatus ds_analysis_metric(const struct DsAnalysis *a, const char *key, double *value);

/**
 * Render the report for an analysis into a newly allocated string.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum DsStatus ds_analysis_report(const struct DsAnalysis *a,
                                 enum DsReportFormat format,
                                 char **out);

/**
 * Evaluate the gate config at `gate_path` against an analysis.
 *
 * # Safety
 * `a` must be a live handle, `gate_path` NUL-terminated, `status` writable.
 */
enum DsStatus ds_gate_evaluate(const struct DsAnalysis *a,
                               const char *gate_path,
                               enum DsGateStatus *status);

/**
 * Open the run history of the project at `root`. The history need not exist
 * yet.
 *
 * # Safety
 * `root` must be NUL-terminated and `out` writable.
 */
enum DsStatus ds_store_open(const char *root, struct DsStore **out);

/**
 * Release a store handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ds_store_free(struct DsStore *s);

/**
 * Number of recorded runs.
 *
 * # Safety
 * `s` must be a live handle and `count` writable.
 */
enum DsStatus ds_store_run_count(const struct DsStore *s, uint64_t *count);

/**
 * Load a recorded run; `run_id` 0 means the latest.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum DsStatus ds_store_load(const struct DsStore *s, uint64_t run_id, struct DsAnalysis **out);

/**
 * Render the history of one metric as CSV or SVG into a newly allocated
 * string.
 *
 * # Safety
 * `s` must be a live handle, `key` NUL-terminated, `out` writable.
 */
enum DsStatus ds_store_trend(const struct DsStore *s,
                             const char *key,
                             enum DsPlotFormat format,
                             char **out);

/**
 * Technical-debt ratio in percent under the default cost model; 0 when
 * `loc` is 0.
 */
double ds_td_ratio(uint64_t remediation_minutes, uint64_t loc);

/**
 * Format minutes as an effort string such as `"2d 6h"` (8-hour days). Returns
 * null only on allocation failure; release with [`ds_string_free`].
 */
char *ds_format_effort(uint64_t minutes);

/**
 * Parse an effort string produced by [`ds_format_effort`] back to minutes.
 *
 * # Safety
 * `text` must be NUL-terminated and `minutes` writable.
 */
enum DsStatus ds_parse_effort(const char *text, uint64_t *minutes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEBTSCOPE_H */
