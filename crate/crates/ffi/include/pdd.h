#ifndef PDD_H
#define PDD_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes shared by all entry points.
 */
typedef enum PddStatus {
  PDD_STATUS_OK = 0,
  PDD_STATUS_NULL_ARGUMENT = 1,
  PDD_STATUS_INVALID_UTF8 = 2,
  PDD_STATUS_PARSE = 3,
  PDD_STATUS_DOMAIN = 4,
  PDD_STATUS_PRECONDITION = 5,
  PDD_STATUS_REFUSAL = 6,
  PDD_STATUS_OVERFLOW = 7,
  PDD_STATUS_PANIC = 8,
} PddStatus;

/**
 * A parsed instance.
 */
typedef struct PddInstance PddInstance;

/**
 * Outcome of a solver run.
 */
typedef struct PddResult PddResult;

/**
 * Solver selection. Obtain defaults from [`pdd_options_default`].
 */
typedef struct PddOptions {
  /**
   * Solver id such as `"tw"`; null selects automatically.
   */
  const char *algorithm;
  /**
   * Use the randomized color-coding families.
   */
  bool monte_carlo;
  uint64_t seed;
  double epsilon;
  /**
   * Also compute the maximum diversity.
   */
  bool optimize;
  /**
   * Largest estimated cost a specialized solver may have.
   */
  double budget;
} PddOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *pdd_last_error(void);

/**
 * Exact mode, automatic selection, no optimization.
 */
struct PddOptions pdd_options_default(void);

/**
 * Parses an instance document (`#tree`, `#web`, `#params` sections).
 *
 * # Safety
 * `document` must be a nul-terminated string and `out` a writable pointer.
 */
enum PddStatus pdd_instance_parse(const char *document, struct PddInstance **out);

/**
 * # Safety
 * `inst` must come from [`pdd_instance_parse`] and not be freed twice.
 */
void pdd_instance_free(struct PddInstance *inst);

/**
 * Number of taxa, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t pdd_instance_num_taxa(const struct PddInstance *inst);

/**
 * Runs the portfolio. `options` may be null for defaults.
 *
 * # Safety
 * `inst` must be a live handle, `options` null or valid, `out` writable.
 */
enum PddStatus pdd_solve(const struct PddInstance *inst,
                         const struct PddOptions *options,
                         struct PddResult **out);

/**
 * # Safety
 * `res` must come from [`pdd_solve`] and not be freed twice.
 */
void pdd_result_free(struct PddResult *res);

/**
 * True when the instance is a yes-instance.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
bool pdd_result_is_yes(const struct PddResult *res);

/**
 * Diversity of the witness; 0 when there is none.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
uint64_t pdd_result_pd(const struct PddResult *res);

/**
 * Writes the maximum diversity to `out` when it was computed.
 *
 * # Safety
 * `res` must be null or a live handle, `out` null or writable.
 */
bool pdd_result_optimum(const struct PddResult *res, uint64_t *out);

/**
 * Number of taxa in the witness.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
size_t pdd_result_witness_len(const struct PddResult *res);

/**
 * Name of witness taxon `i`, or null when out of range. Owned by `res`.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
const char *pdd_result_witness_name(const struct PddResult *res, size_t i);

/**
 * The full run record as JSON. Owned by `res`.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
const char *pdd_result_json(const struct PddResult *res);

/**
 * Checks a claimed solution given as `len` taxon names. `passed` is set to
 * whether size, viability and diversity all hold.
 *
 * # Safety
 * `names` must point to `len` nul-terminated strings (or be null when `len`
 * is 0) and `passed` must be writable.
 */
enum PddStatus pdd_verify(const struct PddInstance *inst,
                          const char *const *names,
                          size_t len,
                          bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PDD_H */
