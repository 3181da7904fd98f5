#ifndef HLSYM_H
#define HLSYM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdint.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum HlsymStatus {
  HLSYM_STATUS_OK = 0,
  HLSYM_STATUS_NULL_POINTER = 1,
  HLSYM_STATUS_INVALID_UTF8 = 2,
  HLSYM_STATUS_PARSE = 3,
  HLSYM_STATUS_PARAMETER = 4,
  HLSYM_STATUS_DEGREE_CAP = 5,
  HLSYM_STATUS_DIVISION_BY_ZERO = 6,
  HLSYM_STATUS_INTERNAL = 7,
  /**
   * The suite ran and found counterexamples; the report is still written.
   */
  HLSYM_STATUS_VERIFY_FAILED = 8,
} HlsymStatus;

/**
 * HL data `P_λ(·;t)`, `Q_λ(·;t)` at one parameter.
 */
typedef struct HlsymContext HlsymContext;

/**
 * Modified basis `P̃_λ(·;-t)`.
 */
typedef struct HlsymModified HlsymModified;

/**
 * Pairing of `P_μ(·;t²)` with the modified basis at `t`.
 */
typedef struct HlsymTwisted HlsymTwisted;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *hlsym_last_error(void);

/**
 * Library version as a static string.
 */
const char *hlsym_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or a string from this library that has not been freed.
 */
void hlsym_string_free(char *s);

/**
 * # Safety
 * `t` is a NUL-terminated string; `out` is writable.
 */
enum HlsymStatus hlsym_context_new(const char *t, uint32_t degree_cap, struct HlsymContext **out);

/**
 * # Safety
 * `ctx` is null or a live handle; it must not be used afterwards.
 */
void hlsym_context_free(struct HlsymContext *ctx);

/**
 * `P_λ` in power sums, as `{"terms": [{"mu": [...], "c": "..."}]}`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_context_hl_p(const struct HlsymContext *ctx, const char *lambda, char **out);

/**
 * `Q_λ` in power sums.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_context_hl_q(const struct HlsymContext *ctx, const char *lambda, char **out);

/**
 * Coefficients in the `P` basis of an element given in power-sum JSON,
 * as `[{"mu": [...], "c": "..."}]`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_context_expand_in_p(const struct HlsymContext *ctx,
                                           const char *element_json,
                                           char **out);

/**
 * Nonzero `f^λ_{μν}` as `{"kind": "f", "t", "entries": [...]}`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_context_structconst_f(const struct HlsymContext *ctx,
                                             const char *mu,
                                             const char *nu,
                                             char **out);

/**
 * # Safety
 * `t` is a NUL-terminated string; `out` is writable.
 */
enum HlsymStatus hlsym_modified_new(const char *t, uint32_t degree_cap, struct HlsymModified **out);

/**
 * # Safety
 * `basis` is null or a live handle; it must not be used afterwards.
 */
void hlsym_modified_free(struct HlsymModified *basis);

/**
 * `P̃_λ` in power sums.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_modified_p_tilde(const struct HlsymModified *basis,
                                        const char *lambda,
                                        char **out);

/**
 * `Q̃_λ` in power sums.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_modified_q_tilde(const struct HlsymModified *basis,
                                        const char *lambda,
                                        char **out);

/**
 * Coefficients in the `P̃` basis of an element given in power-sum JSON.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_modified_expand(const struct HlsymModified *basis,
                                       const char *element_json,
                                       char **out);

/**
 * Nonzero sign-twisted constants `f̄^λ_{μν}`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_modified_structconst_fbar(const struct HlsymModified *basis,
                                                 const char *mu,
                                                 const char *nu,
                                                 char **out);

/**
 * # Safety
 * `t` is a NUL-terminated string; `out` is writable.
 */
enum HlsymStatus hlsym_twisted_new(const char *t, uint32_t degree_cap, struct HlsymTwisted **out);

/**
 * # Safety
 * `twisted` is null or a live handle; it must not be used afterwards.
 */
void hlsym_twisted_free(struct HlsymTwisted *twisted);

/**
 * Nonzero `f̃^λ_{μν}` for `π(P_μ(·;t²)) P̃_ν`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_twisted_structconst_ftilde(const struct HlsymTwisted *twisted,
                                                  const char *mu,
                                                  const char *nu,
                                                  char **out);

/**
 * Rewrites an element such as `"3/2*p[2,1] - P[1]"` in basis `to`
 * (`p`, `P`, `Q`, `Pt`, `Qt`). Output: `{"basis", "t", "terms": [...]}`.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_expand(const char *t,
                              uint32_t degree_cap,
                              const char *to,
                              const char *element,
                              char **out);

/**
 * Runs a verification suite and writes its JSON report. A negative `cap`
 * selects the suite default; `workers == 0` uses all cores. Returns
 * `VerifyFailed` (with the report written) when counterexamples were found.
 *
 * # Safety
 * Pointers are null or valid per their types.
 */
enum HlsymStatus hlsym_verify(const char *suite,
                              const char *t,
                              int32_t cap,
                              uint32_t workers,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HLSYM_H */
