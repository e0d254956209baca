#ifndef SPECTRAL_TAIL_H
#define SPECTRAL_TAIL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ST_CONSTANT_EXPLICIT 0

#define ST_CONSTANT_UNIT 1

#define ST_QUAD_SERIES 0

#define ST_QUAD_THETA 1

/**
 * Opaque Gauss rule.
 */
typedef struct StQuadratureRule StQuadratureRule;

/**
 * Opaque θ profile.
 */
typedef struct StThetaProfile StThetaProfile;

typedef int32_t StStatus;

#define ST_OK 0

#define ST_ERR_DOMAIN 1

#define ST_ERR_ANALYTICITY 2

#define ST_ERR_PRECISION 3

#define ST_ERR_NUMERICAL 4

#define ST_ERR_NULL_POINTER 5

#define ST_ERR_PANIC 6

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message (NUL-terminated, truncated
 * to `len`) into `buf` and returns the full length including the NUL.
 * Pass a null `buf` to query the length.
 *
 * # Safety
 * `buf` is null or valid for `len` bytes.
 */
size_t st_last_error_message(char *buf, size_t len);

/**
 * ln Γ(x), x > 0.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_log_gamma(double x, double *out);

/**
 * σ_{n,j}^{α,β}.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_sigma(size_t n, size_t j, double alpha, double beta, double *out);

/**
 * General Jacobi coefficient bound.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_jacobi(size_t n, double alpha, double beta, double rho, double m, double *out);

/**
 * Gegenbauer coefficient bound.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_gegenbauer(size_t n, double alpha, double rho, double m, double *out);

/**
 * Legendre coefficient bound, n ≥ 1.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_legendre(size_t n, double rho, double m, double *out);

/**
 * Xiang's Jacobi coefficient bound.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_xiang(size_t n, double alpha, double beta, double rho, double m, double *out);

/**
 * L² truncation bound for the degree-(N-1) partial sum.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_truncation_bound(size_t big_n,
                             double alpha,
                             double beta,
                             double rho,
                             double m,
                             int32_t constant_mode,
                             double *out);

/**
 * Computable quadrature bound; `form` is `ST_QUAD_SERIES` or `ST_QUAD_THETA`.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_quad_computable(size_t n,
                                  double alpha,
                                  double rho,
                                  double m,
                                  int32_t form,
                                  double *out);

/**
 * Gegenbauer quadrature bound with the given constant mode.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_bound_quad_gegenbauer(size_t n,
                                  double alpha,
                                  double rho,
                                  double m,
                                  int32_t constant_mode,
                                  double *out);

/**
 * J_n^{α,α}((w+1/w)/2).
 *
 * # Safety
 * `out_re` and `out_im` are valid for writes.
 */
StStatus st_gegenbauer_on_ellipse(size_t n,
                                  double alpha,
                                  double w_re,
                                  double w_im,
                                  double *out_re,
                                  double *out_im);

/**
 * n-point Gauss rule for (1-x)^α(1+x)^β. Free with `st_quadrature_rule_free`.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_quadrature_rule_new(size_t n, double alpha, double beta, struct StQuadratureRule **out);

/**
 * Number of nodes; 0 for a null handle.
 *
 * # Safety
 * `rule` is null or a live handle.
 */
size_t st_quadrature_rule_len(const struct StQuadratureRule *rule);

/**
 * Copies nodes and weights into arrays of length `len`, which must equal the rule length.
 *
 * # Safety
 * `rule` is a live handle; `nodes` and `weights` are valid for `len` writes.
 */
StStatus st_quadrature_rule_copy(const struct StQuadratureRule *rule,
                                 double *nodes,
                                 double *weights,
                                 size_t len);

/**
 * Releases a rule; null is ignored.
 *
 * # Safety
 * `rule` is null or a handle not yet freed.
 */
void st_quadrature_rule_free(struct StQuadratureRule *rule);

/**
 * θ_{n,l}, l = 0..=L, for (1-x²)^α. Free with `st_theta_profile_free`.
 *
 * # Safety
 * `out` is valid for a write.
 */
StStatus st_theta_profile_new(size_t n, double alpha, size_t big_l, struct StThetaProfile **out);

/**
 * Number of θ values (L + 1); 0 for a null handle.
 *
 * # Safety
 * `p` is null or a live handle.
 */
size_t st_theta_profile_len(const struct StThetaProfile *p);

/**
 * Copies θ into an array of length `len`, which must equal the profile length.
 *
 * # Safety
 * `p` is a live handle; `theta` is valid for `len` writes.
 */
StStatus st_theta_profile_copy(const struct StThetaProfile *p, double *theta, size_t len);

/**
 * Θ_n^α and the smallest l attaining it.
 *
 * # Safety
 * `p` is a live handle; `theta_max` and `argmax_l` are valid for writes.
 */
StStatus st_theta_profile_max(const struct StThetaProfile *p, double *theta_max, size_t *argmax_l);

/**
 * Releases a profile; null is ignored.
 *
 * # Safety
 * `p` is null or a handle not yet freed.
 */
void st_theta_profile_free(struct StThetaProfile *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_TAIL_H */
