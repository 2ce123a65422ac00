#ifndef PARTCX_H
#define PARTCX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum PcxStatus {
  PCX_STATUS_OK = 0,
  /**
   * A required pointer was null.
   */
  PCX_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input, including invalid UTF-8 and non-prime characteristics.
   */
  PCX_STATUS_ARGUMENT = 2,
  /**
   * A hypothesis of the requested computation does not hold.
   */
  PCX_STATUS_PRECONDITION = 3,
  /**
   * The computation would exceed its size bound.
   */
  PCX_STATUS_RESOURCE = 4,
  /**
   * An internal consistency check failed.
   */
  PCX_STATUS_INVARIANT = 5,
  /**
   * A value does not fit the output type.
   */
  PCX_STATUS_OVERFLOW = 6,
  /**
   * The library panicked; the handle arguments are unchanged.
   */
  PCX_STATUS_PANIC = 7,
} PcxStatus;

/**
 * A table of Betti numbers over one field, indexed by degree.
 */
typedef struct PcxBettiTable PcxBettiTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The string
 * stays valid until the next call into this library on the same thread.
 */
const char *pcx_last_error(void);

/**
 * Version string of the library and its chain-complex code.
 */
const char *pcx_version(void);

/**
 * Reduced Betti numbers of `|Π_n|`, or of `|Π_n|/G` when `generators` is
 * non-null. `generators` holds `generator_count` NUL-terminated strings in
 * cycle notation such as `"(1 2)(3 4)"`.
 *
 * # Safety
 * `generators` must be null or point to `generator_count` valid C strings;
 * `out` must be valid for a pointer write.
 */
enum PcxStatus pcx_partition_betti(size_t n,
                                   const char *const *generators,
                                   size_t generator_count,
                                   uint64_t characteristic,
                                   struct PcxBettiTable **out);

/**
 * Reduced Betti numbers of `|Π_n|/(Σ_{n_1} × … × Σ_{n_k})`, computed from
 * the simplicial model.
 *
 * # Safety
 * `parts` must point to `len` values; `out` must be valid for a pointer write.
 */
enum PcxStatus pcx_quotient_betti(const size_t *parts,
                                  size_t len,
                                  uint64_t characteristic,
                                  struct PcxBettiTable **out);

/**
 * Betti numbers of the same quotient predicted from the closed-form basis.
 *
 * # Safety
 * `parts` must point to `len` values; `out` must be valid for a pointer write.
 */
enum PcxStatus pcx_predicted_quotient_betti(const size_t *parts,
                                            size_t len,
                                            uint64_t characteristic,
                                            struct PcxBettiTable **out);

/**
 * Reduced Betti numbers of the atom `Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}`;
 * `predicted` selects the closed form instead of the simplicial model.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum PcxStatus pcx_atom_betti(size_t n,
                              size_t ell,
                              uint64_t characteristic,
                              bool predicted,
                              struct PcxBettiTable **out);

/**
 * Number of Lyndon words with the given letter multiplicities.
 *
 * # Safety
 * `parts` must point to `len` values; `out` must be valid for a write.
 */
enum PcxStatus pcx_witt_count(const size_t *parts, size_t len, uint64_t *out);

/**
 * Whether the quotient for this composition is a wedge of spheres.
 *
 * # Safety
 * `parts` must point to `len` values; `out` must be valid for a write.
 */
enum PcxStatus pcx_quotient_is_wedge(const size_t *parts, size_t len, bool *out);

/**
 * Number of degrees with nonzero rank; 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t pcx_table_len(const struct PcxBettiTable *table);

/**
 * The `index`-th nonzero entry in increasing degree.
 *
 * # Safety
 * `table` must be a live handle; `degree` and `rank` must be valid for writes.
 */
enum PcxStatus pcx_table_entry(const struct PcxBettiTable *table,
                               size_t index,
                               int64_t *degree,
                               uint64_t *rank);

/**
 * Rank in `degree`, 0 when absent or for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
uint64_t pcx_table_rank(const struct PcxBettiTable *table, int64_t degree);

/**
 * Characteristic of the table's field, 0 for the rationals.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
uint64_t pcx_table_characteristic(const struct PcxBettiTable *table);

/**
 * Whether two tables have the same field and ranks.
 *
 * # Safety
 * Both arguments must be null or live handles.
 */
bool pcx_table_equal(const struct PcxBettiTable *a, const struct PcxBettiTable *b);

/**
 * The table as JSON, to be released with `pcx_string_free`; null on error.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
char *pcx_table_to_json(const struct PcxBettiTable *table);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from `pcx_table_to_json` not yet freed.
 */
void pcx_string_free(char *s);

/**
 * Releases a table handle. Null is ignored.
 *
 * # Safety
 * `table` must be null or a handle from this library not yet freed.
 */
void pcx_table_free(struct PcxBettiTable *table);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARTCX_H */
