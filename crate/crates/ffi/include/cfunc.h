#ifndef CFUNC_H
#define CFUNC_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum CfuncMethod {
  CFUNC_METHOD_FIBER = 0,
  CFUNC_METHOD_TOTAL_DEGREE = 1,
} CfuncMethod;

typedef enum CfuncStatus {
  CFUNC_STATUS_OK = 0,
  CFUNC_STATUS_NULL_POINTER = 1,
  CFUNC_STATUS_INVALID_ARGUMENT = 2,
  CFUNC_STATUS_NOT_PRIME = 3,
  CFUNC_STATUS_NUMERICAL = 4,
  CFUNC_STATUS_PANIC = 5,
} CfuncStatus;

// Opaque set of odd C-functions.
typedef struct CfuncSolutionSet CfuncSolutionSet;

// Summary of a solution set; totals count multiplicity.
typedef struct CfuncCounts {
  size_t total;
  size_t distinct;
  size_t unimodular;
  size_t dirichlet;
  size_t real_valued;
  size_t max_multiplicity;
  size_t total_paths;
  size_t diverged;
} CfuncCounts;

// Message of the last failure on this thread, or null. Owned by the library;
// valid until the next call.
const char *cfunc_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void cfunc_free_string(char *s);

// J(ω^j1, ω^j2) modulo the prime `p`, written to `re` and `im`.
//
// # Safety
// `re` and `im` must be valid for writes.
enum CfuncStatus cfunc_jacobi_sum(uint64_t p, int64_t j1, int64_t j2, double *re, double *im);

// Whether the function with values `re[x] + i·im[x]`, `x < d`, is a
// C-function up to `tol`. The verdict goes to `out`.
//
// # Safety
// `re` and `im` must point to `d` doubles; `out` must be valid for writes.
enum CfuncStatus cfunc_is_c_function(const double *re,
                                     const double *im,
                                     size_t d,
                                     double tol,
                                     bool *out);

// Unitary transform `f̂(k) = d^{-1/2} Σ f(x) e^{2πikx/d}`, in place.
//
// # Safety
// `re` and `im` must point to `d` writable doubles.
enum CfuncStatus cfunc_dft(double *re, double *im, size_t d);

// Every odd C-function on C_d with multiplicity. The handle written to
// `out` is released with [`cfunc_solution_set_free`].
//
// # Safety
// `out` must be valid for writes.
enum CfuncStatus cfunc_solve(uint64_t d,
                             enum CfuncMethod method,
                             uint64_t seed,
                             struct CfuncSolutionSet **out);

// # Safety
// `set` must come from [`cfunc_solve`] and not be freed twice. Null is ignored.
void cfunc_solution_set_free(struct CfuncSolutionSet *set);

// # Safety
// `set` must be a live handle; `out` must be valid for writes.
enum CfuncStatus cfunc_solution_set_counts(const struct CfuncSolutionSet *set,
                                           struct CfuncCounts *out);

// JSON text of the whole set, freed with [`cfunc_free_string`].
//
// # Safety
// `set` must be a live handle; `out` must be valid for writes.
enum CfuncStatus cfunc_solution_set_to_json(const struct CfuncSolutionSet *set, char **out);

#endif  /* CFUNC_H */
