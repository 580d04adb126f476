#ifndef PSGHOST_H
#define PSGHOST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsgStatus {
  PsgStatus_Ok = 0,
  PsgStatus_NullPointer = 1,
  PsgStatus_InvalidField = 2,
  PsgStatus_FieldMismatch = 3,
  PsgStatus_Domain = 4,
  PsgStatus_Parse = 5,
  PsgStatus_Integrity = 6,
  PsgStatus_Io = 7,
  PsgStatus_DivisionByZero = 8,
  PsgStatus_InvalidUtf8 = 9,
  PsgStatus_Inconsistent = 10,
  PsgStatus_Panic = 11,
} PsgStatus;

typedef struct PsgField PsgField;

typedef struct PsgMultiset PsgMultiset;

typedef struct PsgPlane PsgPlane;

typedef struct PsgPoly PsgPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread ("" if none). Owned by
 * the library; valid until the next call.
 */
const char *psg_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void psg_string_free(char *s);

/**
 * GF(p^h) with the built-in modulus.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PsgStatus psg_field_new(uint32_t p, uint32_t h, struct PsgField **out);

/**
 * Field from "p", "p^h" or a prime power.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` valid for writes.
 */
enum PsgStatus psg_field_parse(const char *spec, struct PsgField **out);

/**
 * Field order q, or 0 for a null handle.
 *
 * # Safety
 * `field` must be a live handle or null.
 */
uint32_t psg_field_order(const struct PsgField *field);

/**
 * # Safety
 * `field` must come from this library or be null.
 */
void psg_field_free(struct PsgField *field);

/**
 * # Safety
 * `field` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_plane_new(const struct PsgField *field, struct PsgPlane **out);

/**
 * Number of points (and of lines), or 0 for a null handle.
 *
 * # Safety
 * `plane` must be a live handle or null.
 */
uintptr_t psg_plane_size(const struct PsgPlane *plane);

/**
 * # Safety
 * `plane` must come from this library or be null.
 */
void psg_plane_free(struct PsgPlane *plane);

/**
 * Empty multiset over a field.
 *
 * # Safety
 * `field` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_multiset_new(const struct PsgField *field, struct PsgMultiset **out);

/**
 * Multiset from the `# mset q=...` text format.
 *
 * # Safety
 * `field` must be a live handle, `src` NUL-terminated, `out` valid.
 */
enum PsgStatus psg_multiset_parse(const struct PsgField *field,
                                  const char *src,
                                  struct PsgMultiset **out);

/**
 * Adds `m` copies of the point (a,b,c); multiplicities are kept mod p.
 *
 * # Safety
 * `set` must be a live handle.
 */
enum PsgStatus psg_multiset_add(struct PsgMultiset *set,
                                uint32_t a,
                                uint32_t b,
                                uint32_t c,
                                uint32_t m);

/**
 * # Safety
 * `set` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_multiset_to_text(const struct PsgMultiset *set, char **out);

/**
 * # Safety
 * `set` must come from this library or be null.
 */
void psg_multiset_free(struct PsgMultiset *set);

/**
 * The power sum polynomial of a multiset.
 *
 * # Safety
 * `set` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_power_sum(const struct PsgMultiset *set, struct PsgPoly **out);

/**
 * # Safety
 * `set` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_is_ghost(const struct PsgMultiset *set, bool *out);

/**
 * Polynomial from the `# psp q=...` text format.
 *
 * # Safety
 * `field` must be a live handle, `src` NUL-terminated, `out` valid.
 */
enum PsgStatus psg_poly_parse(const struct PsgField *field, const char *src, struct PsgPoly **out);

/**
 * Value at the line [a,b,c] as the integer encoding of a field element.
 *
 * # Safety
 * `poly` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_poly_evaluate(const struct PsgPoly *poly,
                                 uint32_t a,
                                 uint32_t b,
                                 uint32_t c,
                                 uint32_t *out);

/**
 * # Safety
 * `poly` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_poly_is_zero(const struct PsgPoly *poly, bool *out);

/**
 * # Safety
 * `poly` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_poly_to_text(const struct PsgPoly *poly, char **out);

/**
 * # Safety
 * `poly` must come from this library or be null.
 */
void psg_poly_free(struct PsgPoly *poly);

/**
 * Rank, ghost exponent and kernel basis as a JSON document.
 *
 * # Safety
 * `field` must be a live handle; `out` valid for writes.
 */
enum PsgStatus psg_ghost_report_json(const struct PsgField *field, char **out);

/**
 * One multiset with the given polynomial plus the ghost exponent of the
 * solution coset. Returns `Inconsistent` (and writes nothing) when no
 * multiset has this polynomial.
 *
 * # Safety
 * `poly` must be a live handle; `particular` and `exponent` valid.
 */
enum PsgStatus psg_solve(const struct PsgPoly *poly,
                         struct PsgMultiset **particular,
                         uintptr_t *exponent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSGHOST_H */
