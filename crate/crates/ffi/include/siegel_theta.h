#ifndef SIEGEL_THETA_H
#define SIEGEL_THETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SthStatus {
  STH_STATUS_OK = 0,
  STH_STATUS_NULL_POINTER = 1,
  STH_STATUS_INVALID_UTF8 = 2,
  STH_STATUS_PARSE = 3,
  STH_STATUS_DOMAIN = 4,
  STH_STATUS_PANIC = 5,
} SthStatus;

/**
 * CM data for Q(zeta_5) together with its evaluation settings.
 */
typedef struct SthContext SthContext;

/**
 * A parsed theta product.
 */
typedef struct SthFamily SthFamily;

typedef struct SthComplex {
  double re;
  double im;
} SthComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null.
 * Valid until the next call into the library from the same thread.
 */
const char *sth_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void sth_string_free(char *s);

/**
 * Evaluates Theta(u, Z; r, s). `z_re`/`z_im` hold Z row-major (g*g
 * entries); `u_re`/`u_im` hold g entries and may both be null for u = 0.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum SthStatus sth_theta_eval(uintptr_t g,
                              const double *z_re,
                              const double *z_im,
                              const double *u_re,
                              const double *u_im,
                              const char *chi,
                              double tol,
                              struct SthComplex *out);

/**
 * Builds the CM context; `tol` is the target error of the lattice sums.
 *
 * # Safety
 * `out` must be writable.
 */
enum SthStatus sth_context_new(double tol, struct SthContext **out);

/**
 * # Safety
 * `ctx` must come from [`sth_context_new`] or be null.
 */
void sth_context_free(struct SthContext *ctx);

/**
 * Phi_chi(Z0) for the CM point Z0.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SthStatus sth_context_phi(const struct SthContext *ctx,
                               const char *chi,
                               struct SthComplex *out);

/**
 * Applies the Artin symbol of (x), x = sum coords[k] zeta^k, to Phi_chi.
 * Writes a JSON object with `chi_out`, `multiplier` and `value` to
 * `out_json`.
 *
 * # Safety
 * Pointers must be valid; `coords` holds `len` entries.
 */
enum SthStatus sth_artin_action(const struct SthContext *ctx,
                                const int64_t *coords,
                                uintptr_t len,
                                uint64_t p,
                                const char *chi,
                                char **out_json);

/**
 * Evaluates the fixed-point congruence for x and p; JSON in `out_json`.
 *
 * # Safety
 * Pointers must be valid; `coords` holds `len` entries.
 */
enum SthStatus sth_belong_criterion(const struct SthContext *ctx,
                                    const int64_t *coords,
                                    uintptr_t len,
                                    uint64_t p,
                                    char **out_json);

/**
 * Parses a theta product in the text format read by the CLI.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum SthStatus sth_family_parse(const char *text, struct SthFamily **out);

/**
 * # Safety
 * `fam` must come from [`sth_family_parse`] or be null.
 */
void sth_family_free(struct SthFamily *fam);

/**
 * Checks modularity for Gamma(N), N the common denominator of the family.
 * `diagnostic` may be null; otherwise it receives a string to free.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SthStatus sth_family_check(const struct SthFamily *fam, bool *modular, char **diagnostic);

/**
 * Runs verification suites and writes the JSON report to `out_json`.
 * `suites` is a comma separated list such as "theta,cm", or null for all.
 * `failed` (nullable) receives the number of failed checks.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SthStatus sth_verify(const char *suites, uint64_t seed, uintptr_t *failed, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIEGEL_THETA_H */
