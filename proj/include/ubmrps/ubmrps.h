/* Copyright 2026 The ubmrps Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the ubmrps toolkit.
 *
 * Every function returns a ubm_status. On failure a message is available
 * from ubm_last_error() on the calling thread until the next call on that
 * thread. Complex vectors are passed as interleaved (re, im) doubles; complex
 * matrices are row-major, also interleaved. Handles are opaque and released
 * with the matching *_free function; freeing NULL is a no-op.
 */

#ifndef UBMRPS_UBMRPS_H
#define UBMRPS_UBMRPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UBM_API __declspec(dllexport)
#else
#define UBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ubm_status {
  UBM_OK = 0,
  UBM_ERR_INVALID_ARGUMENT = 1,
  UBM_ERR_NUMERIC = 2,
  UBM_ERR_CONFIG = 3,
  UBM_ERR_IO = 4,
  UBM_ERR_INTERNAL = 5
} ubm_status;

UBM_API const char* ubm_version(void);
UBM_API const char* ubm_last_error(void);
UBM_API const char* ubm_status_name(ubm_status status);

/* ---- integrator ------------------------------------------------------ */

typedef enum ubm_carry { UBM_CARRY_MATRIX = 0, UBM_CARRY_VECTOR = 1 } ubm_carry;

typedef struct ubm_integrator_config {
  double step_size;
  int reunit_interval;
  double reunit_threshold;
  ubm_carry carry;
} ubm_integrator_config;

typedef struct ubm_stats {
  double max_unitarity_defect;
  double max_norm_defect;
  uint64_t reunitarizations;
  uint64_t steps;
} ubm_stats;

UBM_API void ubm_integrator_config_default(ubm_integrator_config* cfg);

typedef struct ubm_ensemble ubm_ensemble;

/* M samples of psi_t; `psi` holds 2n doubles and must have unit norm to
 * within 1e-12. Sample k depends only on (seed, k). */
UBM_API ubm_status ubm_ensemble_sample(int n, const double* psi, double t,
                                       size_t m,
                                       const ubm_integrator_config* cfg,
                                       uint64_t seed, ubm_ensemble** out);

/* One ensemble per time, all from the same M trajectories. `out` receives
 * n_times handles. */
UBM_API ubm_status ubm_ensemble_sample_path(int n, const double* psi,
                                            const double* times,
                                            size_t n_times, size_t m,
                                            const ubm_integrator_config* cfg,
                                            uint64_t seed, ubm_ensemble** out);

/* Fine (step h) and coarse (step 2h) ensembles on shared Brownian paths. */
UBM_API ubm_status ubm_ensemble_sample_paired(int n, const double* psi,
                                              double t, double fine_step,
                                              size_t m, uint64_t seed,
                                              ubm_ensemble** fine,
                                              ubm_ensemble** coarse);

UBM_API void ubm_ensemble_free(ubm_ensemble* e);
UBM_API ubm_status ubm_ensemble_dim(const ubm_ensemble* e, int* n);
UBM_API ubm_status ubm_ensemble_size(const ubm_ensemble* e, size_t* m);
UBM_API ubm_status ubm_ensemble_time(const ubm_ensemble* e, double* t);
/* Writes 2n doubles. */
UBM_API ubm_status ubm_ensemble_state(const ubm_ensemble* e, size_t k,
                                      double* out);
UBM_API ubm_status ubm_ensemble_stats(const ubm_ensemble* e, ubm_stats* out);

/* Writes 2n doubles: a Haar-distributed unit vector from stream (seed, k). */
UBM_API ubm_status ubm_haar_state(int n, uint64_t seed, uint64_t stream,
                                  double* out);

/* ---- estimators ------------------------------------------------------ */

typedef struct ubm_estimate {
  double value;
  double std_error;
  size_t n_samples;
} ubm_estimate;

/* Coordinates j, k are one-based. */
UBM_API ubm_status ubm_estimate_moment(const ubm_ensemble* e, int j, int p,
                                       ubm_estimate* out);
UBM_API ubm_status ubm_estimate_covariance(const ubm_ensemble* e, int j,
                                           int k, ubm_estimate* out);
/* `a` is an n x n Hermitian matrix, 2 n^2 doubles. */
UBM_API ubm_status ubm_estimate_observable(const ubm_ensemble* e,
                                           const double* a,
                                           ubm_estimate* out);
UBM_API ubm_status ubm_estimate_renyi(const ubm_ensemble* e, int p,
                                      ubm_estimate* out);

/* ---- analytics ------------------------------------------------------- */

UBM_API int ubm_max_coefficient_index(void);
/* Writes n_max + 1 doubles a_0..a_{n_max}. */
UBM_API ubm_status ubm_solve_coefficients(int n, double c, int n_max,
                                          double* out);
UBM_API ubm_status ubm_kummer_1f1(double a, double b, double z, double* out);
UBM_API ubm_status ubm_laplace_marginal(int n, double c, double t,
                                        double lambda, int n_max,
                                        double* out);
UBM_API ubm_status ubm_moment(int n, double c, int p, double t, double* out);
UBM_API ubm_status ubm_moment_e1(int n, int p, int j, double t, double* out);
UBM_API ubm_status ubm_covariance(int n, double fj0, double fk0, double fjk0,
                                  double t, double* out);
UBM_API ubm_status ubm_observable_average(int n, const double* a,
                                          const double* psi, double t,
                                          double* out);
UBM_API ubm_status ubm_entropy_bound(int n, int p, double t, double* out);
UBM_API ubm_status ubm_renyi_bound(int n, const double* psi, int p, double t,
                                   double* out);
UBM_API ubm_status ubm_haar_entropy_bound(int n, double* out);
UBM_API ubm_status ubm_haar_moment(int n, int p, double* out);
UBM_API ubm_status ubm_pde_residual(int n, double c, double t,
                                    const double* lambdas, size_t count,
                                    int n_max, double* out);

/* ---- validation ------------------------------------------------------ */

enum {
  UBM_BATTERY_MOMENTS = 1u << 0,
  UBM_BATTERY_COVARIANCES = 1u << 1,
  UBM_BATTERY_OBSERVABLE = 1u << 2,
  UBM_BATTERY_ENTROPY = 1u << 3,
  UBM_BATTERY_INVARIANCE = 1u << 4,
  UBM_BATTERY_INVERSION = 1u << 5,
  UBM_BATTERY_HAAR = 1u << 6,
  UBM_BATTERY_ALL = (1u << 7) - 1
};

typedef struct ubm_validation_config {
  int dim;
  const double* times; /* n_times entries */
  size_t n_times;
  const double* initial;    /* 2*dim doubles, or NULL for e_1 */
  const double* observable; /* 2*dim*dim doubles, or NULL for the default */
  uint64_t seed;
  size_t samples;
  double threshold;
  ubm_integrator_config integrator;
  int max_moment;
  unsigned batteries;
  double invariance_time;
  size_t invariance_samples;
  size_t panel_size;
  double ks_alpha;
  double panel_pass_fraction;
  size_t inversion_samples;
  double haar_time;
  size_t haar_samples;
} ubm_validation_config;

/* Fills the defaults; `times` points at static storage. */
UBM_API void ubm_validation_config_default(ubm_validation_config* cfg);

typedef struct ubm_validation ubm_validation;

typedef struct ubm_report {
  const char* name; /* owned by the validation handle */
  const char* kind;
  double analytic_value;
  double value;
  double std_error;
  size_t n_samples;
  double slack;
  double z_score;
  double threshold;
  int pass;
} ubm_report;

/* Newline-separated check names. If `buf` is NULL or `cap` is too small
 * only `*needed` (including the terminator) is written. */
UBM_API ubm_status ubm_validation_check_names(const ubm_validation_config* cfg,
                                              char* buf, size_t cap,
                                              size_t* needed);
UBM_API ubm_status ubm_validation_run(const ubm_validation_config* cfg,
                                      ubm_validation** out);
UBM_API void ubm_validation_free(ubm_validation* v);
UBM_API ubm_status ubm_validation_report_count(const ubm_validation* v,
                                               size_t* count);
UBM_API ubm_status ubm_validation_report(const ubm_validation* v, size_t i,
                                         ubm_report* out);
UBM_API ubm_status ubm_validation_all_passed(const ubm_validation* v,
                                             int* all_passed);
UBM_API ubm_status ubm_validation_diagnostics(const ubm_validation* v,
                                              ubm_stats* stats,
                                              double* max_probability_defect);
/* JSON report stream; the pointer stays valid until ubm_validation_free. */
UBM_API ubm_status ubm_validation_json(const ubm_validation* v,
                                       const char** json);

#ifdef __cplusplus
}
#endif

#endif /* UBMRPS_UBMRPS_H */
