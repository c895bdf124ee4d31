#ifndef ENTANGLE_NET_H
#define ENTANGLE_NET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum EnStatus {
  EN_STATUS_OK = 0,
  EN_STATUS_NULL_POINTER = 1,
  EN_STATUS_INVALID_ARGUMENT = 2,
  EN_STATUS_INTEGRATION_FAILURE = 3,
  /**
   * A sweep handle was queried before `en_sweep_run`.
   */
  EN_STATUS_NOT_READY = 4,
  EN_STATUS_PANIC = 5,
} EnStatus;

typedef enum EnDynamics {
  EN_DYNAMICS_DOUBLE_JC = 0,
  EN_DYNAMICS_TAVIS = 1,
} EnDynamics;

typedef enum EnFamily {
  EN_FAMILY_PHI = 0,
  EN_FAMILY_PSI = 1,
} EnFamily;

typedef enum EnPair {
  EN_PAIR_SAME = 0,
  EN_PAIR_CROSS = 1,
} EnPair;

/**
 * One single-mode model with a prepared initial state.
 */
typedef struct EnModel EnModel;

/**
 * Minimum-entanglement scan of the two-atom-per-cavity network.
 */
typedef struct EnSweep EnSweep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length
 * excluding the terminator, or 0 when there is none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t en_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *en_version(void);

/**
 * Creates a model. `photons` is the Fock level of every cavity; the
 * truncation is chosen automatically.
 *
 * # Safety
 * `out` must be null or valid for writes. The handle written there must be
 * released with [`en_model_free`].
 */
enum EnStatus en_model_new(enum EnDynamics dynamics,
                           enum EnFamily family,
                           double alpha_deg,
                           uint32_t photons,
                           double omega_over_lambda,
                           struct EnModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`en_model_new`] not yet freed.
 */
void en_model_free(struct EnModel *model);

/**
 * Writes the 4×4 pair density at `τ` row-major into `re[16]` and `im[16]`.
 *
 * # Safety
 * `model` must be a live handle; `re` and `im` must each hold 16 doubles.
 */
enum EnStatus en_model_pair_density(const struct EnModel *model,
                                    enum EnPair pair,
                                    double tau,
                                    double *re,
                                    double *im);

/**
 * Concurrence of the pair at `τ`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum EnStatus en_model_concurrence(const struct EnModel *model,
                                   enum EnPair pair,
                                   double tau,
                                   double *out);

/**
 * Wootters concurrence of a two-qubit density matrix given row-major as
 * `re[16]`, `im[16]`.
 *
 * # Safety
 * `re` and `im` must each hold 16 doubles; `out` must be valid for writes.
 */
enum EnStatus en_concurrence(const double *re, const double *im, double *out);

/**
 * The thirteen coefficient functions `a b c d f h k l m n p q r` at `τ` for
 * a cavity in `|photons>`.
 *
 * # Safety
 * `out` must hold 13 doubles.
 */
enum EnStatus en_coefficients(double tau, uint32_t photons, double *out);

/**
 * Long-time multimode pair state parameters `y`, `|x|` and the concurrence
 * shared by the same and cross pairs.
 *
 * # Safety
 * The three out-pointers must be valid for writes.
 */
enum EnStatus en_steady_state(enum EnFamily family,
                              double alpha_deg,
                              double *y,
                              double *x_abs,
                              double *concurrence_out);

/**
 * Creates a sweep over `τ ∈ [0, tau_max]` on `tau_steps` points.
 *
 * # Safety
 * `out` must be valid for writes; release the handle with [`en_sweep_free`].
 */
enum EnStatus en_sweep_new(enum EnFamily family,
                           uint32_t photons,
                           double tau_max,
                           size_t tau_steps,
                           struct EnSweep **out);

/**
 * # Safety
 * `sweep` must be null or a handle from [`en_sweep_new`] not yet freed.
 */
void en_sweep_free(struct EnSweep *sweep);

/**
 * Evaluates `E_min` at each of the `len` angles (degrees) and the summary.
 * Replaces the results of any earlier run.
 *
 * # Safety
 * `sweep` must be a live handle; `alphas_deg` must hold `len` doubles.
 */
enum EnStatus en_sweep_run(struct EnSweep *sweep, const double *alphas_deg, size_t len);

/**
 * Number of evaluated angles.
 *
 * # Safety
 * `sweep` must be a live handle; `out` must be valid for writes.
 */
enum EnStatus en_sweep_len(const struct EnSweep *sweep, size_t *out);

/**
 * Angle (degrees), `E_min` and the `τ` of the minimum for entry `index`.
 *
 * # Safety
 * `sweep` must be a live handle; the out-pointers must be valid for writes.
 */
enum EnStatus en_sweep_get(const struct EnSweep *sweep,
                           size_t index,
                           double *alpha_deg,
                           double *e_min,
                           double *tau_at_min);

/**
 * Refined preservation threshold (degrees) and the best angle with its
 * `E_min`. `found` is set to 0 and the threshold to NaN when no angle keeps
 * entanglement.
 *
 * # Safety
 * `sweep` must be a live handle; the out-pointers must be valid for writes.
 */
enum EnStatus en_sweep_summary(const struct EnSweep *sweep,
                               int32_t *found,
                               double *threshold_deg,
                               double *argmax_deg,
                               double *max_e_min);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTANGLE_NET_H */
