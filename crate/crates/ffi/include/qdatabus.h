/* Copyright 2026 qdatabus Contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef QDATABUS_H
#define QDATABUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible entry point.
typedef enum QdbStatus {
  QDB_STATUS_OK = 0,
  // A required pointer argument was NULL.
  QDB_STATUS_NULL_POINTER = 1,
  // Inputs were rejected (bad chain, label, size, non-UTF-8 string, ...).
  QDB_STATUS_INVALID_ARGUMENT = 2,
  // The computation failed numerically (e.g. an unphysical state).
  QDB_STATUS_NUMERICAL = 3,
  // The caller's buffer is too small; nothing was written.
  QDB_STATUS_BUFFER_TOO_SMALL = 4,
  // A panic was caught at the boundary.
  QDB_STATUS_PANIC = 5,
} QdbStatus;

// Values accepted by the `model` argument of `qdb_chain_set_disorder`.
typedef enum QdbDisorderModel {
  // Relative perturbation of every ring bond.
  QDB_DISORDER_MODEL_BOND = 0,
  // Additive perturbation of every ring on-site term.
  QDB_DISORDER_MODEL_SITE = 1,
} QdbDisorderModel;

// Values accepted by the `base` argument of `qdb_state_pair_log_negativity`.
typedef enum QdbLogBase {
  QDB_LOG_BASE_NATURAL = 0,
  QDB_LOG_BASE_TWO = 1,
} QdbLogBase;

// Opaque chain description: ring, probes, spectator and disorder.
typedef struct QdbChain QdbChain;

// Opaque Gaussian state (covariance matrix) over the modes of a chain.
typedef struct QdbState QdbState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qdb_version(void);

// Copies the calling thread's last error message (NUL-terminated) into
// `buffer` and returns the number of bytes required including the NUL.
//
// If `buffer` is NULL or `capacity` is too small, nothing is written and the
// required size is still returned. An empty message means the last call
// succeeded.
//
// # Safety
// `buffer` must be NULL or valid for `capacity` bytes of writes.
size_t qdb_last_error_message(char *buffer, size_t capacity);

// Creates a ring of `ring_size` oscillators with nearest-neighbour coupling
// `coupling` and no probes.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QdbStatus qdb_chain_new(size_t ring_size, double coupling, struct QdbChain **out);

// Releases a chain. NULL is ignored.
//
// # Safety
// `chain` must be NULL or a pointer returned by `qdb_chain_new` that has not
// been freed.
void qdb_chain_free(struct QdbChain *chain);

// Attaches a probe oscillator `label` to ring site `site` (1-based) with
// coupling `epsilon` and squared-frequency shift `detuning`.
//
// # Safety
// `chain` must be a live handle; `label` a NUL-terminated string.
enum QdbStatus qdb_chain_add_probe(struct QdbChain *chain,
                                   const char *label,
                                   size_t site,
                                   double epsilon,
                                   double detuning);

// Adds (`enabled != 0`) or removes the decoupled spectator mode.
//
// # Safety
// `chain` must be a live handle.
enum QdbStatus qdb_chain_set_spectator(struct QdbChain *chain, bool enabled);

// Sets seeded ring disorder of width `spread`; `spread = 0` clears it.
// `model` is one of the `QdbDisorderModel` values.
//
// # Safety
// `chain` must be a live handle.
enum QdbStatus qdb_chain_set_disorder(struct QdbChain *chain,
                                      uint32_t model,
                                      double spread,
                                      uint64_t seed);

// Number of modes: ring sites, probes and the spectator if present.
//
// # Safety
// `chain` must be a live handle; `out` valid for one write.
enum QdbStatus qdb_chain_mode_count(const struct QdbChain *chain, size_t *out);

// Writes the potential matrix `V` (row-major, `n × n` with `n` the mode
// count) into `buffer`.
//
// # Safety
// `chain` must be a live handle; `buffer` valid for `capacity` doubles.
enum QdbStatus qdb_chain_potential(const struct QdbChain *chain, double *buffer, size_t capacity);

// Creates the two-mode squeezed vacuum with squeezing `r` between the modes
// labelled `label_a` and `label_b` of `chain`, all other modes in vacuum.
//
// # Safety
// `chain` must be a live handle, labels NUL-terminated, `out` valid.
enum QdbStatus qdb_state_two_mode_squeezed(const struct QdbChain *chain,
                                           double r,
                                           const char *label_a,
                                           const char *label_b,
                                           struct QdbState **out);

// Releases a state. NULL is ignored.
//
// # Safety
// `state` must be NULL or a live handle that has not been freed.
void qdb_state_free(struct QdbState *state);

// Evolves `state` in place for time `t` under the chain's Hamiltonian.
//
// # Safety
// Both handles must be live; the state must have the chain's mode count.
enum QdbStatus qdb_state_evolve(const struct QdbChain *chain, struct QdbState *state, double t);

// Logarithmic negativity between modes `i` and `j` (0-based) of `state`;
// `base` is one of the `QdbLogBase` values.
//
// # Safety
// `state` must be a live handle; `out` valid for one write.
enum QdbStatus qdb_state_pair_log_negativity(const struct QdbState *state,
                                             size_t i,
                                             size_t j,
                                             uint32_t base,
                                             double *out);

// Entanglement transfer efficiency at time `t` for a chain with exactly two
// probes and the spectator: `E_N(receiver : spectator)(t) / E_N(0)`, the
// sender starting two-mode squeezed (`r`) with the spectator.
//
// # Safety
// `chain` must be a live handle; `out` valid for one write.
enum QdbStatus qdb_transfer_efficiency(const struct QdbChain *chain,
                                       double r,
                                       double t,
                                       double *out);

// Closed-form three-probe amplitudes at scaled time `tau` for a ring of
// `ring_size`: `[bus, probe a, probe b, probe c]`, real parts in `re` and
// imaginary parts in `im` (four doubles each).
//
// # Safety
// `re` and `im` must each be valid for four writes.
enum QdbStatus qdb_three_probe_coefficients(size_t ring_size, double tau, double *re, double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDATABUS_H */
