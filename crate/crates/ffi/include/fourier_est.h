#ifndef FOURIER_EST_H
#define FOURIER_EST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FeKernel {
  FE_KERNEL_SIN = 0,
  FE_KERNEL_HAAR = 1,
} FeKernel;

/*
 Result of every fallible call. The non-zero codes below `FE_NULL_POINTER`
 match the command-line exit statuses.
 */
typedef enum FeStatus {
  FE_OK = 0,
  FE_INPUT = 1,
  FE_PARAMETER = 2,
  FE_DEGENERATE = 3,
  FE_NUMERIC = 4,
  FE_IO = 5,
  FE_NULL_POINTER = 6,
  FE_PANIC = 7,
} FeStatus;

/*
 A smoothed (possibly conditional) distribution function.
 */
typedef struct FeDistribution FeDistribution;

/*
 Parameters of the mixing-distribution estimator.
 */
typedef struct FeMixingParams {
  double h;
  double r;
  double r1;
  double r2;
  /*
   Monte Carlo size.
   */
  size_t n;
  uint64_t seed;
  bool stratified;
  bool isotonic;
} FeMixingParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *fe_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *fe_version(void);

/*
 Sine integral.
 */
enum FeStatus fe_si(double x, double *out);

/*
 Smoothed distribution function of `n` observations with smoothing `r`.

 # Safety
 `data` must point to `n` readable doubles; `out` must be writable.
 */
enum FeStatus fe_distribution_new(const double *data,
                                  size_t n,
                                  double r,
                                  enum FeKernel kernel,
                                  struct FeDistribution **out);

/*
 Conditional distribution of column `target` given columns `given_cols`
 at `given_point`, from a `rows × cols` row-major table.

 # Safety
 `data` must hold `rows * cols` doubles, `given_cols` and `given_point`
 `n_given` entries each; `out` must be writable.
 */
enum FeStatus fe_conditional_new(const double *data,
                                 size_t rows,
                                 size_t cols,
                                 size_t target,
                                 const size_t *given_cols,
                                 const double *given_point,
                                 size_t n_given,
                                 double r1,
                                 double r2,
                                 enum FeKernel kernel,
                                 struct FeDistribution **out);

/*
 Releases a handle; NULL is ignored.

 # Safety
 `h` must come from a constructor in this library and not be used again.
 */
void fe_distribution_free(struct FeDistribution *h);

/*
 Clamped estimate at `y`.

 # Safety
 `h` must be a live handle and `out` writable.
 */
enum FeStatus fe_distribution_cdf(const struct FeDistribution *h, double y, double *out);

/*
 Clamped estimates at `n` points.

 # Safety
 `grid` must hold `n` doubles and `out` have room for `n`.
 */
enum FeStatus fe_distribution_evaluate(const struct FeDistribution *h,
                                       const double *grid,
                                       size_t n,
                                       double *out);

/*
 Smallest `y` with `F(y) ≥ u`.

 # Safety
 `h` must be a live handle and `out` writable.
 */
enum FeStatus fe_distribution_inverse(const struct FeDistribution *h, double u, double *out);

/*
 `count` seeded draws.

 # Safety
 `out` must have room for `count` doubles.
 */
enum FeStatus fe_distribution_sample(const struct FeDistribution *h,
                                     size_t count,
                                     uint64_t seed,
                                     double *out);

/*
 `count` synthetic rows drawn from the chain of conditionals of a
 `rows × cols` table, written row-major to `out` (`count * cols` doubles).

 # Safety
 Buffers must have the stated sizes.
 */
enum FeStatus fe_generate(const double *data,
                          size_t rows,
                          size_t cols,
                          size_t count,
                          double r1,
                          double r2,
                          enum FeKernel kernel,
                          uint64_t seed,
                          double *out);

/*
 `count` draws for entry `m` of a series given its two neighbours.

 # Safety
 `series` must hold `n` doubles and `out` have room for `count`.
 */
enum FeStatus fe_markov_impute(const double *series,
                               size_t n,
                               size_t m,
                               double r1,
                               double r2,
                               enum FeKernel kernel,
                               uint64_t seed,
                               size_t count,
                               double *out);

/*
 Mixing distribution `G(θ|x0)` on `n_theta` points from `n` rows of
 `(x, y)` pairs.

 # Safety
 `xy` must hold `2 * n` doubles, `theta` `n_theta`, and `out` `n_theta`.
 */
enum FeStatus fe_mixing_cdf(const double *xy,
                            size_t n,
                            double x0,
                            const double *theta,
                            size_t n_theta,
                            const struct FeMixingParams *params,
                            double *out);

/*
 Conditional quantiles of `y` at `n_u` levels and `n_x` covariate
 values, one `R` for every smoothing step. `out[k * n_x + j]` holds level
 `k` at covariate `j`.

 # Safety
 `xy` must hold `2 * n` doubles, `u` `n_u`, `x` `n_x`, `out` `n_u * n_x`.
 */
enum FeStatus fe_quantile(const double *xy,
                          size_t n,
                          const double *u,
                          size_t n_u,
                          const double *x,
                          size_t n_x,
                          double r,
                          size_t mc_samples,
                          uint64_t seed,
                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOURIER_EST_H */
