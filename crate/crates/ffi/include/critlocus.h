#ifndef CRITLOCUS_H
#define CRITLOCUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CritlocusStatus {
  CritlocusStatus_Ok = 0,
  CritlocusStatus_NullPointer = 1,
  CritlocusStatus_InvalidUtf8 = 2,
  CritlocusStatus_InvalidInput = 3,
  CritlocusStatus_Invariant = 4,
  CritlocusStatus_Panic = 5,
} CritlocusStatus;

/**
 * Opaque framed representation.
 */
typedef struct CritlocusRep CritlocusRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; do not free.
 */
const char *critlocus_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void critlocus_string_free(char *s);

/**
 * Parses `{n, r, A, B, C, V}` JSON into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CritlocusStatus critlocus_rep_from_json(const char *json, struct CritlocusRep **out);

/**
 * # Safety
 * `rep` must be null or a handle from [`critlocus_rep_from_json`], not yet freed.
 */
void critlocus_rep_free(struct CritlocusRep *rep);

/**
 * # Safety
 * `rep` must be a live handle; `n` and `r` must be writable.
 */
enum CritlocusStatus critlocus_rep_shape(const struct CritlocusRep *rep, size_t *n, size_t *r);

/**
 * `Tr A[B,C]` as a JSON scalar (`"p/q"` or `{"re","im"}`).
 *
 * # Safety
 * `rep` must be a live handle; `out` must be writable. Free the result
 * with [`critlocus_string_free`].
 */
enum CritlocusStatus critlocus_rep_eval_potential(const struct CritlocusRep *rep, char **out);

/**
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum CritlocusStatus critlocus_rep_is_stable(const struct CritlocusRep *rep, bool *out);

/**
 * # Safety
 * `rep` must be a live handle; `out` must be writable.
 */
enum CritlocusStatus critlocus_rep_is_critical(const struct CritlocusRep *rep, bool *out);

/**
 * Tangent comparison over all monomial ideals of colength `n` (1..=6).
 * Writes the JSON table to `out` and whether every row agrees to `all_equal`.
 *
 * # Safety
 * `out` and `all_equal` must be writable.
 */
enum CritlocusStatus critlocus_hilb_compare(size_t n, char **out, bool *all_equal);

/**
 * Hat-element product table and Massey report at the point `"a,b,c"`.
 * `all_hold` receives whether every relation in the table holds.
 *
 * # Safety
 * `point` must be a NUL-terminated string; `out` and `all_hold` writable.
 */
enum CritlocusStatus critlocus_koszul_table(const char *point, char **out, bool *all_hold);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRITLOCUS_H */
