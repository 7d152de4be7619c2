#ifndef SER_FFI_H
#define SER_FFI_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SerSampler {
  SER_SAMPLER_UNIFORM = 0,
  SER_SAMPLER_STRATIFIED = 1,
} SerSampler;

/**
 * Result code of every fallible call.
 */
typedef enum SerStatus {
  SER_STATUS_OK = 0,
  SER_STATUS_NULL_POINTER = 1,
  SER_STATUS_EMPTY = 2,
  SER_STATUS_ZERO_CAPACITY = 3,
  SER_STATUS_INVALID_ARGUMENT = 4,
  SER_STATUS_SLOT_OUT_OF_RANGE = 5,
  SER_STATUS_DIVISION_BY_ZERO = 6,
  SER_STATUS_PANIC = 7,
} SerStatus;

/**
 * Opaque replay memory handle.
 */
typedef struct SerReplay SerReplay;

typedef struct SerTransition {
  uint32_t state;
  uint32_t action;
  double reward;
  uint32_t next_state;
  bool terminal;
} SerTransition;

typedef struct SerStats {
  size_t size;
  size_t capacity;
  size_t num_keys;
  size_t max_multiplicity;
  double redundancy_fraction;
} SerStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a memory of `capacity` slots whose sampler is seeded with `seed`.
 * Release it with [`ser_replay_free`].
 *
 * # Safety
 * `out_handle` must be valid for writes.
 */
enum SerStatus ser_replay_new(enum SerSampler sampler,
                              size_t capacity,
                              uint64_t seed,
                              struct SerReplay **out_handle);

/**
 * Destroys a handle. Passing null is a no-op.
 *
 * # Safety
 * `handle` must be null or come from [`ser_replay_new`] and not be freed twice.
 */
void ser_replay_free(struct SerReplay *handle);

/**
 * Stores one transition, evicting the oldest when full.
 *
 * # Safety
 * `handle` must be a live handle and `transition` valid for reads.
 */
enum SerStatus ser_replay_insert(struct SerReplay *handle, const struct SerTransition *transition);

/**
 * Draws one transition. `out_slot` may be null when the slot index is not
 * needed.
 *
 * # Safety
 * `handle` must be a live handle; `out_transition` valid for writes;
 * `out_slot` null or valid for writes.
 */
enum SerStatus ser_replay_sample(struct SerReplay *handle,
                                 size_t *out_slot,
                                 struct SerTransition *out_transition);

/**
 * Draws `count` transitions independently, with replacement, into
 * `out_transitions[0..count]`. `out_slots` may be null.
 *
 * # Safety
 * `out_transitions` (and `out_slots` when non-null) must point to `count`
 * writable elements.
 */
enum SerStatus ser_replay_sample_batch(struct SerReplay *handle,
                                       size_t count,
                                       size_t *out_slots,
                                       struct SerTransition *out_transitions);

/**
 * Reads the transition stored in `slot`.
 *
 * # Safety
 * `handle` must be a live handle and `out_transition` valid for writes.
 */
enum SerStatus ser_replay_get(const struct SerReplay *handle,
                              size_t slot,
                              struct SerTransition *out_transition);

/**
 * Number of stored transitions, or 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t ser_replay_len(const struct SerReplay *handle);

/**
 * # Safety
 * `handle` must be a live handle and `out_stats` valid for writes.
 */
enum SerStatus ser_replay_stats(const struct SerReplay *handle, struct SerStats *out_stats);

/**
 * Exact probability that one draw returns `slot`.
 *
 * # Safety
 * `handle` must be a live handle and `out_probability` valid for writes.
 */
enum SerStatus ser_replay_slot_probability(const struct SerReplay *handle,
                                           size_t slot,
                                           double *out_probability);

/**
 * `100 * (stratified - random) / (uniform - random)`.
 *
 * # Safety
 * `out_score` must be valid for writes.
 */
enum SerStatus ser_relative_score(double stratified,
                                  double uniform,
                                  double random,
                                  double *out_score);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *ser_status_message(enum SerStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SER_FFI_H */
