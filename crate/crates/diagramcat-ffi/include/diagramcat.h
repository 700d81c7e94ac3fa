#ifndef DIAGRAMCAT_H
#define DIAGRAMCAT_H

/* Generated by cbindgen from crates/diagramcat-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  DC_STATUS_INVALID_UTF8 = 2,
  DC_STATUS_PARSE = 3,
  DC_STATUS_INVALID_PARTITION = 4,
  DC_STATUS_SHAPE_MISMATCH = 5,
  DC_STATUS_NOT_IN_CATEGORY = 6,
  DC_STATUS_BOUND_EXCEEDED = 7,
  DC_STATUS_NOT_REGULAR = 8,
  DC_STATUS_OVERFLOW = 9,
  DC_STATUS_INVALID_ARGUMENT = 10,
  DC_STATUS_PANIC = 11,
} DcStatus;

typedef enum DcTag {
  DC_TAG_P = 0,
  DC_TAG_PB = 1,
  DC_TAG_B = 2,
  DC_TAG_PP = 3,
  DC_TAG_M = 4,
  DC_TAG_TL = 5,
} DcTag;

/**
 * Opaque sandwich semigroup handle.
 */
typedef struct DcContext DcContext;

/**
 * Opaque partition handle.
 */
typedef struct DcPartition DcPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *dc_last_error(void);

/**
 * Parse the text form `m n | block | …`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum DcStatus dc_partition_parse(const char *text, struct DcPartition **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not already freed.
 */
void dc_partition_free(struct DcPartition *p);

/**
 * Text form of `p`; release with [`dc_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum DcStatus dc_partition_to_text(const struct DcPartition *p, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void dc_string_free(char *s);

/**
 * # Safety
 * `p` must be a live handle; `m` and `n` writable.
 */
enum DcStatus dc_partition_shape(const struct DcPartition *p, size_t *m, size_t *n);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum DcStatus dc_partition_rank(const struct DcPartition *p, size_t *out);

/**
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum DcStatus dc_partition_in_category(const struct DcPartition *p, enum DcTag tag, bool *out);

/**
 * `a·b`, floating components discarded.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum DcStatus dc_partition_compose(const struct DcPartition *a,
                                   const struct DcPartition *b,
                                   struct DcPartition **out);

/**
 * `α*`, the up-down reflection.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum DcStatus dc_partition_involution(const struct DcPartition *p, struct DcPartition **out);

/**
 * `|K_mn|` by formula; `Overflow` if it does not fit in 64 bits.
 *
 * # Safety
 * `out` must be writable.
 */
enum DcStatus dc_homset_size(enum DcTag tag, size_t m, size_t n, uint64_t *out);

/**
 * The sandwich semigroup on `K_mn` with `σ ∈ K_nm`. `sigma` stays owned by the caller.
 *
 * # Safety
 * `sigma` must be a live handle and `out` writable.
 */
enum DcStatus dc_context_new(enum DcTag tag,
                             size_t m,
                             size_t n,
                             const struct DcPartition *sigma,
                             struct DcContext **out);

/**
 * # Safety
 * `ctx` must be null or a handle from this library, not already freed.
 */
void dc_context_free(struct DcContext *ctx);

/**
 * `|K_mn|`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum DcStatus dc_context_size(const struct DcContext *ctx, size_t *out);

/**
 * `|Reg(K_mn^σ)|`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum DcStatus dc_context_regular_size(const struct DcContext *ctx, size_t *out);

/**
 * `|E(K_mn^σ)|`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum DcStatus dc_context_idempotent_count(const struct DcContext *ctx, size_t *out);

/**
 * `α ⋆ β = ασβ`.
 *
 * # Safety
 * All handles must be live and `out` writable.
 */
enum DcStatus dc_context_star(const struct DcContext *ctx,
                              const struct DcPartition *a,
                              const struct DcPartition *b,
                              struct DcPartition **out);

/**
 * The JSON analysis report for a single context spec; release with [`dc_string_free`].
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` writable.
 */
enum DcStatus dc_analyze_json(const char *spec, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DIAGRAMCAT_H */
