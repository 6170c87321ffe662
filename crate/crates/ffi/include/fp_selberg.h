#ifndef FP_SELBERG_H
#define FP_SELBERG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FpsStatus {
  FPS_STATUS_OK = 0,
  /**
   * Argument outside the domain of the operation or closed form.
   */
  FPS_STATUS_DOMAIN = 1,
  /**
   * Operands from different fields.
   */
  FPS_STATUS_TYPE = 2,
  /**
   * A denominator vanishes mod p.
   */
  FPS_STATUS_SINGULAR = 3,
  /**
   * Term or cell budget exceeded.
   */
  FPS_STATUS_RESOURCE = 4,
  /**
   * Two routes that must agree disagreed.
   */
  FPS_STATUS_MISMATCH = 5,
  FPS_STATUS_NULL_POINTER = 6,
  FPS_STATUS_INVALID_ARGUMENT = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  FPS_STATUS_PANIC = 8,
} FpsStatus;

/**
 * Opaque prime field handle.
 */
typedef struct FpsField FpsField;

/**
 * `(n, a, b, c)` of an F_p-Selberg integral; the prime comes from the field handle.
 */
typedef struct FpsSelbergParams {
  uint64_t n;
  uint64_t a;
  uint64_t b;
  uint64_t c;
} FpsSelbergParams;

/**
 * Outcome of checking one KZ instance.
 */
typedef struct FpsKzOutcome {
  bool regime;
  bool matches_closed_form;
  bool residuals_vanish;
  bool singular;
  bool identically_zero;
} FpsKzOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *fps_last_error_message(void);

/**
 * Creates the prime field F_p, `3 <= p < 2^31`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FpsStatus fps_field_new(uint64_t p, struct FpsField **out);

/**
 * Releases a field handle; null is ignored.
 *
 * # Safety
 * `f` must come from [`fps_field_new`] and not be used afterwards.
 */
void fps_field_free(struct FpsField *f);

/**
 * The prime of a field handle, or 0 for null.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint64_t fps_field_prime(const struct FpsField *f);

/**
 * `n! mod p` for `0 <= n <= p-1`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_factorial(const struct FpsField *f, int64_t n, uint64_t *out);

/**
 * `C(n, m) mod p` by Lucas' theorem.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_binom_lucas(const struct FpsField *f, uint64_t n, uint64_t m, uint64_t *out);

/**
 * The F_p-beta integral of `x^a (1-x)^b`, `a, b < p`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_beta(const struct FpsField *f, uint64_t a, uint64_t b, uint64_t *out);

/**
 * The F_p-Selberg integral by coefficient extraction.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_selberg_s(const struct FpsField *f,
                             const struct FpsSelbergParams *params_in,
                             uint64_t *out);

/**
 * The integral decorated by `x_1 ... x_k`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_selberg_skn(const struct FpsField *f,
                               const struct FpsSelbergParams *params_in,
                               uint64_t k,
                               uint64_t *out);

/**
 * The main product formula; Domain outside its regime.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_selberg_rhs(const struct FpsField *f,
                               const struct FpsSelbergParams *params_in,
                               uint64_t *out);

/**
 * Sum of the integrand over all points of F_p^n.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_selberg_sum_oracle(const struct FpsField *f,
                                      const struct FpsSelbergParams *params_in,
                                      uint64_t *out);

/**
 * The decorated product formula, `0 <= k <= n-1`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_aomoto_rhs(const struct FpsField *f,
                              const struct FpsSelbergParams *params_in,
                              uint64_t k,
                              uint64_t *out);

/**
 * The Morris-derived formula.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_morris_form_rhs(const struct FpsField *f,
                                   const struct FpsSelbergParams *params_in,
                                   uint64_t *out);

/**
 * The binomial formula for `a = p-1-(n-1)c-k`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_binom_form_rhs(const struct FpsField *f,
                                  const struct FpsSelbergParams *params_in,
                                  uint64_t k,
                                  uint64_t *out);

/**
 * The factorized value on region `i >= 1`.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_factorization_rhs(const struct FpsField *f,
                                     const struct FpsSelbergParams *params_in,
                                     uint64_t i,
                                     uint64_t *out);

/**
 * Region index of `(a, b)`: `i` for `Omega_i`, `-1` when outside.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_region(const struct FpsField *f,
                          const struct FpsSelbergParams *params_in,
                          int64_t *out);

/**
 * Whether the Jacobi-polynomial identity holds for the parameters.
 *
 * # Safety
 * Pointer arguments must be null or valid; `out` must be valid for writes.
 */
enum FpsStatus fps_jacobi_check(const struct FpsField *f,
                                const struct FpsSelbergParams *params_in,
                                bool *out);

/**
 * Whether the two-variable summation identity holds for `(n, c)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FpsStatus fps_verify_identity(uint32_t n, uint32_t c, bool *out);

/**
 * The identity's right-hand side with the common summand factor removed,
 * e.g. `12(x+y+2)(x+y+3)` for `n = 2, c = 2`. Free with [`fps_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FpsStatus fps_identity_normal_form(uint32_t n, uint32_t c, char **out);

/**
 * Builds the KZ solution for `(p, m1, m2, n, kappa_num/kappa_den)` and checks it.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FpsStatus fps_kz_check(uint64_t p,
                            uint64_t m1,
                            uint64_t m2,
                            uint64_t n,
                            int64_t kappa_num,
                            int64_t kappa_den,
                            struct FpsKzOutcome *out);

/**
 * CSV table `a,b,value,region` of `S_n(a, b, c)`. Free with [`fps_string_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FpsStatus fps_table_csv(uint64_t p, uint64_t n, uint64_t c, bool full, char **out);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fps_string_free(char *s);

/**
 * Length of a NUL-terminated string, for callers without `strlen`.
 *
 * # Safety
 * `s` must be null or NUL-terminated.
 */
size_t fps_string_len(const char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FP_SELBERG_H */
