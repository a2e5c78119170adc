#ifndef CROSSED_SPECTRUM_H
#define CROSSED_SPECTRUM_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen at build time. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_UTF8 = 2,
  CS_STATUS_PARSE_ERROR = 3,
  CS_STATUS_INVALID_INPUT = 4,
  CS_STATUS_INTERNAL = 5,
  CS_STATUS_OUT_OF_RANGE = 6,
} CsStatus;

/**
 * The multiplicity report of one scenario.
 */
typedef struct CsReport CsReport;

/**
 * A parsed and validated scenario.
 */
typedef struct CsScenario CsScenario;

/**
 * One row of a report. The stratum label is available through
 * `cs_report_point_stratum`.
 */
typedef struct CsPointSummary {
  size_t stabilizer_order;
  size_t v;
  size_t dim_v;
  uint32_t m_u;
  size_t witness_order;
  size_t witness_r;
  size_t dim_r;
  size_t index_sz_h;
  bool fell;
  bool in_o_char;
} CsPointSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cs_version(void);

/**
 * Parses and builds a scenario from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CsStatus cs_scenario_from_json(const char *json, struct CsScenario **out);

/**
 * # Safety
 * `scenario` must come from `cs_scenario_from_json` or be null.
 */
void cs_scenario_free(struct CsScenario *scenario);

/**
 * Number of strata of the scenario's space.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum CsStatus cs_scenario_num_strata(const struct CsScenario *scenario, size_t *out);

/**
 * Computes the multiplicity report. Bound violations do not make this call
 * fail; count them with `cs_report_num_violations`.
 *
 * # Safety
 * `scenario` must be a live handle and `out` writable.
 */
enum CsStatus cs_analyze(const struct CsScenario *scenario, struct CsReport **out);

/**
 * # Safety
 * `report` must come from `cs_analyze` or be null.
 */
void cs_report_free(struct CsReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CsStatus cs_report_num_points(const struct CsReport *report, size_t *out);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CsStatus cs_report_point(const struct CsReport *report,
                              size_t index,
                              struct CsPointSummary *out);

/**
 * Stratum label of a point, as a string to release with `cs_string_free`.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CsStatus cs_report_point_stratum(const struct CsReport *report, size_t index, char **out);

/**
 * # Safety
 * `report` must be a live handle; either out pointer may be null.
 */
enum CsStatus cs_report_is_fell(const struct CsReport *report, bool *fell, bool *continuous_trace);

/**
 * Number of bound or corollary violations found by `cs_analyze`.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CsStatus cs_report_num_violations(const struct CsReport *report, size_t *out);

/**
 * The report as pretty JSON, identical to the CLI output.
 *
 * # Safety
 * `report` must be a live handle and `out` writable. Free the string with
 * `cs_string_free`.
 */
enum CsStatus cs_report_to_json(const struct CsReport *report, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void cs_string_free(char *s);

/**
 * Weyl dimension of the `SO(n)` representation with the given highest
 * weight (`n / 2` entries).
 *
 * # Safety
 * `entries` must point to `len` readable values and `out` be writable.
 */
enum CsStatus cs_so_weyl_dimension(size_t n, const int64_t *entries, size_t len, uint64_t *out);

/**
 * Whether restriction to `SO(n-1)` is multiplicity free with matching
 * dimensions.
 *
 * # Safety
 * `entries` must point to `len` readable values and `passed` be writable.
 */
enum CsStatus cs_so_verify_branching(size_t n, const int64_t *entries, size_t len, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CROSSED_SPECTRUM_H */
