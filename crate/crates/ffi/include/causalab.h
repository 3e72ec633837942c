#ifndef CAUSALAB_H
#define CAUSALAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CausalabStatus {
  CAUSALAB_STATUS_OK = 0,
  CAUSALAB_STATUS_INVALID_ARGUMENT = 1,
  CAUSALAB_STATUS_NON_CONVERGENCE = 2,
  CAUSALAB_STATUS_ASSERTION_FAILED = 3,
  CAUSALAB_STATUS_NULL_POINTER = 4,
  CAUSALAB_STATUS_BUFFER_TOO_SMALL = 5,
  CAUSALAB_STATUS_BELOW_NOISE_FLOOR = 6,
  CAUSALAB_STATUS_PANIC = 7,
} CausalabStatus;

typedef enum CausalabBoundary {
  CAUSALAB_BOUNDARY_DIRICHLET = 0,
  CAUSALAB_BOUNDARY_NEUMANN = 1,
  CAUSALAB_BOUNDARY_ROBIN = 2,
  CAUSALAB_BOUNDARY_TWISTED = 3,
} CausalabBoundary;

/**
 * Lieb-Liniger ground state.
 */
typedef struct CausalabLlSolution CausalabLlSolution;

/**
 * Eigenvalues of a boundary Hamiltonian.
 */
typedef struct CausalabSpectrum CausalabSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next causalab call on the same thread.
 */
const char *causalab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *causalab_version(void);

/**
 * Lowest `n_modes` eigenvalues of `-d^2/dx^2` on `[0, length]`.
 * `sigma0`/`sigma_l` are read for Robin walls and `theta` for twisted ones.
 *
 * # Safety
 * `out` must be valid for writes. The handle written there must be freed
 * with [`causalab_spectrum_free`].
 */
enum CausalabStatus causalab_spectrum_solve(enum CausalabBoundary boundary,
                                            double length,
                                            double sigma0,
                                            double sigma_l,
                                            double theta,
                                            size_t n_modes,
                                            size_t points,
                                            struct CausalabSpectrum **out);

/**
 * Number of eigenvalues held by `spectrum`, or 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle.
 */
size_t causalab_spectrum_len(const struct CausalabSpectrum *spectrum);

/**
 * Copy the eigenvalues into `buffer`. Fails with
 * `CAUSALAB_STATUS_BUFFER_TOO_SMALL` when `capacity` is short; `written`
 * then holds the required length.
 *
 * # Safety
 * `spectrum` must be a live handle, `buffer` valid for `capacity` writes
 * and `written` valid for one write.
 */
enum CausalabStatus causalab_spectrum_energies(const struct CausalabSpectrum *spectrum,
                                               double *buffer,
                                               size_t capacity,
                                               size_t *written);

/**
 * # Safety
 * `spectrum` must be null or a handle from [`causalab_spectrum_solve`]
 * that has not been freed.
 */
void causalab_spectrum_free(struct CausalabSpectrum *spectrum);

/**
 * Solve the Lieb-Liniger equation at coupling `gamma` with `nodes`
 * Gauss-Legendre nodes (units `hbar = 2 m0 = 1`).
 *
 * # Safety
 * `out` must be valid for writes. The handle must be freed with
 * [`causalab_ll_free`].
 */
enum CausalabStatus causalab_ll_solve(double gamma, size_t nodes, struct CausalabLlSolution **out);

/**
 * `f(gamma)` and the auxiliary `alpha` of a solution.
 *
 * # Safety
 * `solution` must be a live handle; `f_gamma` and `alpha` valid for writes.
 */
enum CausalabStatus causalab_ll_values(const struct CausalabLlSolution *solution,
                                       double *f_gamma,
                                       double *alpha);

/**
 * Density `g` at the quadrature nodes.
 *
 * # Safety
 * As for [`causalab_spectrum_energies`].
 */
enum CausalabStatus causalab_ll_density(const struct CausalabLlSolution *solution,
                                        double *buffer,
                                        size_t capacity,
                                        size_t *written);

/**
 * # Safety
 * `solution` must be null or an unfreed handle from [`causalab_ll_solve`].
 */
void causalab_ll_free(struct CausalabLlSolution *solution);

/**
 * Ground-state energy per length `rho^3 f(lambda / rho)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CausalabStatus causalab_ll_energy_density(double lambda,
                                               double rho,
                                               size_t nodes,
                                               double *out);

/**
 * `omega_c(k) = sqrt(m0^2 c^4 + k^2 c^2)` and the kernel gap
 * `1/(2 m0) - c^2/(2 omega_c(k))`.
 *
 * # Safety
 * `omega` and `gap` must be valid for writes.
 */
enum CausalabStatus causalab_dispersion(double k, double m0, double c, double *omega, double *gap);

/**
 * Correlator difference between the relativistic and nonrelativistic
 * vacuum two-point functions for Gaussian test functions of widths `w1`,
 * `w2` in `dimension` dimensions.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CausalabStatus causalab_delta_c_gaussian(double w1,
                                              double w2,
                                              size_t dimension,
                                              double tau,
                                              double m0,
                                              double c,
                                              double *out);

/**
 * Probability outside `[-r, r]` at time `t` for a free particle of mass
 * `mass` started in the normalized bump of radius `radius` at the origin,
 * evolved in a periodic box of length `box_length` with `points` samples.
 * Returns `CAUSALAB_STATUS_BELOW_NOISE_FLOOR` when the value cannot be told
 * apart from rounding.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CausalabStatus causalab_tail_probability(double radius,
                                              double r,
                                              double t,
                                              double mass,
                                              double box_length,
                                              size_t points,
                                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUSALAB_H */
