#ifndef ISOFAN_H
#define ISOFAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsofanStatus {
  ISOFAN_STATUS_OK = 0,
  ISOFAN_STATUS_INVALID_ARGUMENT = 1,
  ISOFAN_STATUS_NOT_FOUND = 2,
  ISOFAN_STATUS_NUMERIC = 3,
  ISOFAN_STATUS_NULL_POINTER = 4,
  ISOFAN_STATUS_PANIC = 5,
} IsofanStatus;

/**
 * Riemann data: a gas law and two states.
 */
typedef struct IsofanProblem IsofanProblem;

/**
 * Standard solution of a problem.
 */
typedef struct IsofanSolution IsofanSolution;

/**
 * Wedge construction, possibly built on the rotated data.
 */
typedef struct IsofanWedge IsofanWedge;

typedef struct IsofanState {
  double rho;
  double v1;
  double v2;
} IsofanState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *isofan_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void isofan_string_free(char *s);

/**
 * Validates the data and returns a new problem handle in `*out_problem`.
 *
 * # Safety
 * `left`, `right` and `out_problem` must be valid pointers or null.
 */
enum IsofanStatus isofan_problem_new(double k,
                                     double gamma,
                                     const struct IsofanState *left,
                                     const struct IsofanState *right,
                                     struct IsofanProblem **out_problem);

/**
 * # Safety
 * `p` must be null or a handle from [`isofan_problem_new`], not yet freed.
 */
void isofan_problem_free(struct IsofanProblem *p);

/**
 * Case number 1 to 7 in `*case_number`, 0 for constant data.
 * `*near_boundary` (if not null) flags data within rounding of a case boundary.
 *
 * # Safety
 * Pointers must be valid or null; `near_boundary` may be null.
 */
enum IsofanStatus isofan_classify(const struct IsofanProblem *p,
                                  int32_t *case_number,
                                  bool *near_boundary);

/**
 * # Safety
 * `p` and `out_solution` must be valid or null.
 */
enum IsofanStatus isofan_solve_standard(const struct IsofanProblem *p,
                                        struct IsofanSolution **out_solution);

/**
 * # Safety
 * `s` must be null or a handle from [`isofan_solve_standard`], not yet freed.
 */
void isofan_solution_free(struct IsofanSolution *s);

/**
 * Middle state of a two-wave solution. `NotFound` for single waves,
 * constant data and vacuum.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_solution_middle(const struct IsofanSolution *s,
                                         struct IsofanState *middle);

/**
 * Checks the solution against the problem. Nonpositive tolerances select
 * the defaults. `*pass` receives the overall verdict.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_solution_verify(const struct IsofanProblem *p,
                                         const struct IsofanSolution *s,
                                         double tol_eq,
                                         double tol_strict,
                                         bool *pass);

/**
 * JSON form of the solution; free with [`isofan_string_free`].
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_solution_json(const struct IsofanSolution *s, char **json);

/**
 * Direct search for a fan subsolution. `NotFound` when the search is empty.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_search_subsolution(const struct IsofanProblem *p,
                                            double *rho1,
                                            double *delta2);

/**
 * Wedge construction with default options. Mirrored data is rotated first.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_wedge_build(const struct IsofanProblem *p, struct IsofanWedge **out_wedge);

/**
 * # Safety
 * `w` must be null or a handle from [`isofan_wedge_build`], not yet freed.
 */
void isofan_wedge_free(struct IsofanWedge *w);

/**
 * Auxiliary state, glue margin and whether the data was rotated.
 * Any out pointer may be null.
 *
 * # Safety
 * `w` must be a valid handle; other pointers valid or null.
 */
enum IsofanStatus isofan_wedge_summary(const struct IsofanWedge *w,
                                       struct IsofanState *aux,
                                       double *glue_margin,
                                       bool *rotated);

/**
 * JSON form of the construction; free with [`isofan_string_free`].
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum IsofanStatus isofan_wedge_json(const struct IsofanWedge *w, char **json);

/**
 * Seeded lemma suite. `*all_pass` receives the verdict.
 *
 * # Safety
 * `all_pass` must be valid or null.
 */
enum IsofanStatus isofan_lemma_suite(uint64_t seed, size_t samples, bool *all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOFAN_H */
