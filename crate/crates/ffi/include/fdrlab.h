#ifndef FDRLAB_H
#define FDRLAB_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FdrlabStatus {
  FDRLAB_STATUS_OK = 0,
  /**
   * An argument is outside its domain or the configuration is invalid.
   */
  FDRLAB_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The requested quantity is undefined for these inputs.
   */
  FDRLAB_STATUS_UNDEFINED = 2,
  /**
   * Input data are degenerate (e.g. zero variance).
   */
  FDRLAB_STATUS_DEGENERATE = 3,
  FDRLAB_STATUS_NULL_POINTER = 4,
  /**
   * A bug inside the library; the message has details.
   */
  FDRLAB_STATUS_INTERNAL = 5,
} FdrlabStatus;

/**
 * Opaque simulation result.
 */
typedef struct FdrlabSimSummary FdrlabSimSummary;

/**
 * Tree diagram cells and derived rates. `npv` and `fnr_among_negatives`
 * are NaN when no negatives are possible.
 */
typedef struct FdrlabBreakdown {
  double true_pos;
  double false_pos;
  double true_neg;
  double false_neg;
  double fdr;
  double ppv;
  double npv;
  double fnr_among_negatives;
} FdrlabBreakdown;

/**
 * Odds on H0; infinite when the prevalence is zero.
 */
typedef struct FdrlabOdds {
  double prior_odds_h0;
  double likelihood_ratio_h0_h1;
  double posterior_odds_h0;
  double fdr;
} FdrlabOdds;

typedef struct FdrlabSimConfig {
  uint64_t n_per_group;
  double true_mean_control;
  double true_mean_treatment;
  double sd;
  uint64_t n_sims;
  double alpha;
  uint64_t master_seed;
} FdrlabSimConfig;

/**
 * Scalar fields of a simulation summary. `mean_diff_significant` is NaN
 * when no test was significant.
 */
typedef struct FdrlabSimStats {
  uint64_t n_sims;
  uint64_t count_significant;
  double mean_diff_all;
  double sd_diff_all;
  double mean_diff_significant;
  uint64_t count_wrong_sign_significant;
  uint64_t master_seed;
} FdrlabSimStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread; empty if none.
 */
const char *fdrlab_last_error(void);

/**
 * Tree diagram of a significance test. Pass `n_tests <= 0` for
 * proportions instead of expected counts.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_significance_breakdown(double prevalence,
                                                double power,
                                                double alpha,
                                                double n_tests,
                                                struct FdrlabBreakdown *out);

/**
 * Tree diagram of a diagnostic screen. Pass `population <= 0` for
 * proportions.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_screening_breakdown(double prevalence,
                                             double sensitivity,
                                             double specificity,
                                             double population,
                                             struct FdrlabBreakdown *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_posterior_odds(double prevalence,
                                        double power,
                                        double alpha,
                                        struct FdrlabOdds *out);

/**
 * Minimum Bayes factor -e p ln p, for 0 < p < 1/e.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_berger_min_bayes_factor(double p, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_berger_min_fdr(double p, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_alpha_for_target_fdr(double target, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_power_two_sample(uint64_t n_per_group,
                                          double effect_size,
                                          double alpha,
                                          double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FdrlabStatus fdrlab_solve_n(double target_power,
                                 double effect_size,
                                 double alpha,
                                 uint64_t *out);

/**
 * Defaults: n = 16 per group, both means 0, sd 1, 100000 tests,
 * alpha 0.05, seed 2014.
 */
struct FdrlabSimConfig fdrlab_sim_config_default(void);

/**
 * Runs a batch. On success `*out` owns a new handle.
 *
 * # Safety
 * `config` must be null or point to a valid config; `out` must be null or
 * valid for writes.
 */
enum FdrlabStatus fdrlab_simulate(const struct FdrlabSimConfig *config,
                                  struct FdrlabSimSummary **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `summary` must be null or a handle from `fdrlab_simulate` that has not
 * been freed.
 */
void fdrlab_summary_free(struct FdrlabSimSummary *summary);

/**
 * # Safety
 * `summary` must be null or a live handle; `out` null or writable.
 */
enum FdrlabStatus fdrlab_summary_stats(const struct FdrlabSimSummary *summary,
                                       struct FdrlabSimStats *out);

/**
 * Number of tests with lo <= p <= hi; bounds on the 0.001 grid.
 *
 * # Safety
 * `summary` must be null or a live handle; `out` null or writable.
 */
enum FdrlabStatus fdrlab_summary_count_in_interval(const struct FdrlabSimSummary *summary,
                                                   double lo,
                                                   double hi,
                                                   uint64_t *out);

/**
 * Copies histogram counts for bins of `bin_width` into `counts`. The
 * number of bins is always written to `n_bins`; when `capacity` is too
 * small nothing is copied and the status is `InvalidArgument`.
 *
 * # Safety
 * `summary` must be null or a live handle; `counts` must be null or valid
 * for `capacity` writes; `n_bins` null or writable.
 */
enum FdrlabStatus fdrlab_summary_histogram(const struct FdrlabSimSummary *summary,
                                           double bin_width,
                                           uint64_t *counts,
                                           size_t capacity,
                                           size_t *n_bins);

/**
 * FDR of a mixture of a null and an effect batch.
 *
 * # Safety
 * Handles must be null or live; `out` null or writable.
 */
enum FdrlabStatus fdrlab_mixture_fdr(const struct FdrlabSimSummary *null_summary,
                                     const struct FdrlabSimSummary *effect_summary,
                                     double prevalence,
                                     struct FdrlabBreakdown *out);

/**
 * FDR among tests with lo <= p <= hi.
 *
 * # Safety
 * Handles must be null or live; `out` null or writable.
 */
enum FdrlabStatus fdrlab_interval_fdr(const struct FdrlabSimSummary *null_summary,
                                      const struct FdrlabSimSummary *effect_summary,
                                      double prevalence,
                                      double lo,
                                      double hi,
                                      double *out);

/**
 * Master seed of the effect batch paired with a null batch seeded `seed`.
 */
uint64_t fdrlab_effect_seed(uint64_t seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDRLAB_H */
