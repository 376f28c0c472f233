#ifndef AKQ_H
#define AKQ_H

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum AkqStatus {
  AKQ_STATUS_OK = 0,
  AKQ_STATUS_NULL_POINTER = 1,
  AKQ_STATUS_INVALID_ARGUMENT = 2,
  AKQ_STATUS_LAYOUT = 3,
  AKQ_STATUS_PROJECTION_EMPTY = 4,
  AKQ_STATUS_SINGULAR = 5,
  AKQ_STATUS_DEGENERATE_INPUT = 6,
  AKQ_STATUS_INCONSISTENCY = 7,
  // The protocol hit its round limit without a first beam.
  AKQ_STATUS_EXHAUSTED = 8,
  AKQ_STATUS_PANIC = 99,
} AkqStatus;

// Which maximally entangling angle to use.
typedef enum AkqSign {
  AKQ_SIGN_PLUS = 0,
  AKQ_SIGN_MINUS = 1,
} AkqSign;

// A normalized single-qubit state.
typedef struct AkqState AkqState;

// Seeded Monte-Carlo driver for teleportation and swapping.
typedef struct AkqTeleporter AkqTeleporter;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *akq_version(void);

// Message for the most recent failure on this thread, or NULL.
// Valid until the next failing call on the same thread.
const char *akq_last_error(void);

// Builds `a|0⟩ + b|1⟩`, normalizing the input.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkqStatus akq_state_new(double re0, double im0, double re1, double im1, struct AkqState **out);

// Draws a Haar-random qubit from a seeded generator.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkqStatus akq_state_random(uint64_t seed, struct AkqState **out);

// # Safety
// `state` must be NULL or a handle from this library not yet freed.
void akq_state_free(struct AkqState *state);

// Writes the two amplitudes as `re[0] + i·im[0]`, `re[1] + i·im[1]`.
//
// # Safety
// `re` and `im` must each point to two writable doubles.
enum AkqStatus akq_state_amplitudes(const struct AkqState *state, double *re, double *im);

// Von Neumann entropy (nats) of the system qubit after the interaction.
//
// # Safety
// `state` must be a live handle and `out` a writable double.
enum AkqStatus akq_entropy(const struct AkqState *state, double theta_rad, double *out);

// Probabilities of the three meter beams.
//
// # Safety
// `state` must be a live handle and `out` must point to three writable doubles.
enum AkqStatus akq_branch_probabilities(const struct AkqState *state,
                                        double theta_rad,
                                        double *out);

// `1 − (4/3) sin²θ`; NaN for a non-finite angle.
double akq_imperfection(double theta_rad);

// Per-axis excess tracking noise (three doubles) and the total tracking noise.
// Fails with `AKQ_STATUS_SINGULAR` where `sin 2θ` vanishes.
//
// # Safety
// `state` must be a live handle, `excess` three writable doubles, `total` one.
enum AkqStatus akq_uncertainty(const struct AkqState *state,
                               double theta_rad,
                               double *excess,
                               double *total);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AkqStatus akq_teleporter_new(uint64_t seed, enum AkqSign sign, struct AkqTeleporter **out);

// # Safety
// `teleporter` must be NULL or a handle from this library not yet freed.
void akq_teleporter_free(struct AkqTeleporter *teleporter);

// Teleports `input` onto the carrier qubit, recycling failed rounds.
//
// `output` may be NULL; otherwise it receives a new handle for the carrier
// state, owned by the caller.
//
// # Safety
// Handles must be live; `rounds` and `fidelity` must be writable.
enum AkqStatus akq_teleport(struct AkqTeleporter *teleporter,
                            const struct AkqState *input,
                            uint32_t *rounds,
                            double *fidelity,
                            struct AkqState **output);

// Swaps `(phi1 ⊗ psi1 + phi2 ⊗ psi2)` from `R–P` onto `R–A2`.
//
// Reports the fidelity of the final `R–A2` pair with the input pair and the
// `R` entropies before and after.
//
// # Safety
// Handles must be live; `rounds`, `fidelity`, `entropy_in` and `entropy_out` must be writable.
enum AkqStatus akq_swap(struct AkqTeleporter *teleporter,
                        const struct AkqState *phi1,
                        const struct AkqState *psi1,
                        const struct AkqState *phi2,
                        const struct AkqState *psi2,
                        uint32_t *rounds,
                        double *fidelity,
                        double *entropy_in,
                        double *entropy_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AKQ_H */
