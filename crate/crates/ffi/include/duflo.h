#ifndef DUFLO_H
#define DUFLO_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define DUFLO_OK 0

#define DUFLO_ERR_NULL -1

#define DUFLO_ERR_UTF8 -2

#define DUFLO_ERR_LOOKUP -3

#define DUFLO_ERR_STRUCTURAL -4

#define DUFLO_ERR_PARSE -5

#define DUFLO_ERR_PARAMETER -6

#define DUFLO_ERR_PRECONDITION -7

#define DUFLO_ERR_BOUND -8

#define DUFLO_ERR_IO -9

#define DUFLO_ERR_JSON -10

#define DUFLO_ERR_INVALID_ALGEBRA -11

#define DUFLO_ERR_PANIC -12

/**
 * A Lie algebra given by structure constants.
 */
typedef struct DufloAlgebra DufloAlgebra;

/**
 * Result of a verification run.
 */
typedef struct DufloReport DufloReport;

typedef struct DufloWeightEstimate {
  double mean;
  double std_error;
  uint64_t samples;
  uint64_t seed;
} DufloWeightEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *duflo_last_error(void);

/**
 * Loads a catalog algebra (`abelian2`, `aff1`, `heisenberg3`, `sl2`, `so3`).
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
int32_t duflo_algebra_catalog(const char *name, struct DufloAlgebra **out);

/**
 * Parses the JSON algebra format used by the command-line tool. The algebra
 * is not validated.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
int32_t duflo_algebra_from_json(const char *json, struct DufloAlgebra **out);

/**
 * # Safety
 * `alg` must come from this library and `out` must be valid.
 */
int32_t duflo_algebra_dim(const struct DufloAlgebra *alg, uintptr_t *out);

/**
 * Writes whether antisymmetry and the Jacobi identity hold.
 *
 * # Safety
 * `alg` must come from this library and `out` must be valid.
 */
int32_t duflo_algebra_validate(const struct DufloAlgebra *alg, bool *out);

/**
 * # Safety
 * `alg` must come from this library (or be null) and not be used afterwards.
 */
void duflo_algebra_free(struct DufloAlgebra *alg);

/**
 * Runs the verification. A zero bound selects its default (`p_max = dim`,
 * `d_max = 3`, `search_bound = d_max + 2`).
 *
 * # Safety
 * `alg` must come from this library and `out` must be valid.
 */
int32_t duflo_verify(const struct DufloAlgebra *alg,
                     uintptr_t p_max,
                     uintptr_t d_max,
                     uintptr_t search_bound,
                     struct DufloReport **out);

/**
 * Writes whether no gating check failed.
 *
 * # Safety
 * `report` must come from this library and `out` must be valid.
 */
int32_t duflo_report_ok(const struct DufloReport *report, bool *out);

/**
 * The report as JSON; release with [`duflo_string_free`].
 *
 * # Safety
 * `report` must come from this library and `out` must be valid.
 */
int32_t duflo_report_json(const struct DufloReport *report, char **out);

/**
 * # Safety
 * `report` must come from this library (or be null) and not be used afterwards.
 */
void duflo_report_free(struct DufloReport *report);

/**
 * `f * g` for polynomials written over the algebra's basis labels; release
 * the result with [`duflo_string_free`].
 *
 * # Safety
 * `alg` must come from this library; `f`, `g` must be valid C strings and
 * `out` a valid pointer.
 */
int32_t duflo_star(const struct DufloAlgebra *alg, const char *f, const char *g, char **out);

/**
 * Monte-Carlo weight of a graph written as `1->2, 2->G1`.
 *
 * # Safety
 * `graph` must be a valid C string and `out` a valid pointer.
 */
int32_t duflo_weight_mc(const char *graph,
                        uint64_t samples,
                        uint64_t seed,
                        struct DufloWeightEstimate *out);

/**
 * Difference of the two endpoint weights of the deployed Bernoulli graph, as
 * an exact rational string; release with [`duflo_string_free`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
int32_t duflo_bernoulli_difference(uintptr_t p, char **out);

/**
 * # Safety
 * `s` must come from this library (or be null) and not be used afterwards.
 */
void duflo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUFLO_H */
