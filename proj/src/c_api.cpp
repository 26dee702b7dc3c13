// Copyright 2026 The ubmrps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ubmrps/ubmrps.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubmrps/analytics.hpp"
#include "ubmrps/error.hpp"
#include "ubmrps/integrator.hpp"
#include "ubmrps/montecarlo.hpp"
#include "ubmrps/validation.hpp"
#include "ubmrps/version.hpp"

struct ubm_ensemble {
  ubmrps::EnsembleSample sample;
};

struct ubm_validation {
  ubmrps::ValidationConfig config;
  ubmrps::ValidationResult result;
  std::string json;
};

namespace {

using ubmrps::Complex;

thread_local std::string g_last_error;

ubm_status fail(ubm_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
ubm_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return UBM_OK;
  } catch (const ubmrps::Error& e) {
    return fail(static_cast<ubm_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(UBM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UBM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UBM_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) {
    throw ubmrps::InvalidArgument(std::string(what) + " must not be NULL");
  }
}

void require_dim(int n) {
  if (n < 1) throw ubmrps::InvalidArgument("dimension must be >= 1");
}

ubmrps::PureState read_state(int n, const double* psi) {
  require_dim(n);
  require(psi, "psi");
  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) v(j) = Complex(psi[2 * j], psi[2 * j + 1]);
  return ubmrps::PureState(std::move(v));
}

void write_state(const Eigen::VectorXcd& v, double* out) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    out[2 * j] = v(j).real();
    out[2 * j + 1] = v(j).imag();
  }
}

ubmrps::HermitianMatrix read_hermitian(int n, const double* a) {
  require_dim(n);
  require(a, "matrix");
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t i = 2 * (static_cast<std::size_t>(r) * n + c);
      m(r, c) = Complex(a[i], a[i + 1]);
    }
  }
  return ubmrps::HermitianMatrix(std::move(m));
}

ubmrps::IntegratorConfig read_config(const ubm_integrator_config* cfg) {
  ubmrps::IntegratorConfig out;
  if (cfg != nullptr) {
    out.step_size = cfg->step_size;
    out.reunit_interval = cfg->reunit_interval;
    out.reunit_threshold = cfg->reunit_threshold;
    if (cfg->carry != UBM_CARRY_MATRIX && cfg->carry != UBM_CARRY_VECTOR) {
      throw ubmrps::ConfigError("unknown carry mode");
    }
    out.carry = cfg->carry == UBM_CARRY_VECTOR ? ubmrps::Carry::kVector
                                               : ubmrps::Carry::kMatrix;
  }
  out.validate();
  return out;
}

ubmrps::ValidationConfig read_validation(const ubm_validation_config* c) {
  require(c, "config");
  ubmrps::ValidationConfig v;
  v.dim = c->dim;
  if (c->n_times > 0) require(c->times, "times");
  v.times.assign(c->times, c->times + c->n_times);
  if (c->initial) v.initial = read_state(c->dim, c->initial);
  if (c->observable) v.observable = read_hermitian(c->dim, c->observable);
  v.seed = c->seed;
  v.samples = c->samples;
  v.threshold = c->threshold;
  v.integrator = read_config(&c->integrator);
  v.max_moment = c->max_moment;
  v.batteries = c->batteries;
  v.invariance_time = c->invariance_time;
  v.invariance_samples = c->invariance_samples;
  v.panel_size = c->panel_size;
  v.ks_alpha = c->ks_alpha;
  v.panel_pass_fraction = c->panel_pass_fraction;
  v.inversion_samples = c->inversion_samples;
  v.haar_time = c->haar_time;
  v.haar_samples = c->haar_samples;
  return v;
}

void write_estimate(const ubmrps::Estimate& e, ubm_estimate* out) {
  out->value = e.value;
  out->std_error = e.std_error;
  out->n_samples = e.n_samples;
}

void write_stats(const ubmrps::IntegrationStats& s, ubm_stats* out) {
  out->max_unitarity_defect = s.max_unitarity_defect;
  out->max_norm_defect = s.max_norm_defect;
  out->reunitarizations = s.reunitarizations;
  out->steps = s.steps;
}

}  // namespace

extern "C" {

const char* ubm_version(void) { return ubmrps::kVersion; }

const char* ubm_last_error(void) { return g_last_error.c_str(); }

const char* ubm_status_name(ubm_status status) {
  switch (status) {
    case UBM_OK:
      return "ok";
    case UBM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case UBM_ERR_NUMERIC:
      return "numeric error";
    case UBM_ERR_CONFIG:
      return "configuration error";
    case UBM_ERR_IO:
      return "i/o error";
    case UBM_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void ubm_integrator_config_default(ubm_integrator_config* cfg) {
  if (cfg == nullptr) return;
  const ubmrps::IntegratorConfig d;
  cfg->step_size = d.step_size;
  cfg->reunit_interval = d.reunit_interval;
  cfg->reunit_threshold = d.reunit_threshold;
  cfg->carry = UBM_CARRY_MATRIX;
}

ubm_status ubm_ensemble_sample(int n, const double* psi, double t, size_t m,
                               const ubm_integrator_config* cfg, uint64_t seed,
                               ubm_ensemble** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto e = ubmrps::sample_ensemble(read_state(n, psi), t, m,
                                     read_config(cfg), seed);
    *out = new ubm_ensemble{std::move(e)};
  });
}

ubm_status ubm_ensemble_sample_path(int n, const double* psi,
                                    const double* times, size_t n_times,
                                    size_t m, const ubm_integrator_config* cfg,
                                    uint64_t seed, ubm_ensemble** out) {
  return guarded([&] {
    require(out, "out");
    require(times, "times");
    for (size_t i = 0; i < n_times; ++i) out[i] = nullptr;
    auto path = ubmrps::sample_ensemble_path(
        read_state(n, psi), std::span<const double>(times, n_times), m,
        read_config(cfg), seed);
    std::vector<std::unique_ptr<ubm_ensemble>> owned;
    owned.reserve(path.size());
    for (auto& e : path) owned.emplace_back(new ubm_ensemble{std::move(e)});
    for (size_t i = 0; i < n_times; ++i) out[i] = owned[i].release();
  });
}

ubm_status ubm_ensemble_sample_paired(int n, const double* psi, double t,
                                      double fine_step, size_t m,
                                      uint64_t seed, ubm_ensemble** fine,
                                      ubm_ensemble** coarse) {
  return guarded([&] {
    require(fine, "fine");
    require(coarse, "coarse");
    *fine = *coarse = nullptr;
    auto pair = ubmrps::sample_paired_ensembles(read_state(n, psi), t,
                                                fine_step, m, seed);
    auto f = std::make_unique<ubm_ensemble>(ubm_ensemble{std::move(pair.fine)});
    auto c =
        std::make_unique<ubm_ensemble>(ubm_ensemble{std::move(pair.coarse)});
    *fine = f.release();
    *coarse = c.release();
  });
}

void ubm_ensemble_free(ubm_ensemble* e) { delete e; }

ubm_status ubm_ensemble_dim(const ubm_ensemble* e, int* n) {
  return guarded([&] {
    require(e, "ensemble");
    require(n, "n");
    *n = e->sample.dim();
  });
}

ubm_status ubm_ensemble_size(const ubm_ensemble* e, size_t* m) {
  return guarded([&] {
    require(e, "ensemble");
    require(m, "m");
    *m = e->sample.size();
  });
}

ubm_status ubm_ensemble_time(const ubm_ensemble* e, double* t) {
  return guarded([&] {
    require(e, "ensemble");
    require(t, "t");
    *t = e->sample.time();
  });
}

ubm_status ubm_ensemble_state(const ubm_ensemble* e, size_t k, double* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    if (k >= e->sample.size()) {
      throw ubmrps::InvalidArgument("sample index out of range");
    }
    write_state(e->sample.amplitudes().col(static_cast<Eigen::Index>(k)), out);
  });
}

ubm_status ubm_ensemble_stats(const ubm_ensemble* e, ubm_stats* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    write_stats(e->sample.stats(), out);
  });
}

ubm_status ubm_haar_state(int n, uint64_t seed, uint64_t stream, double* out) {
  return guarded([&] {
    require_dim(n);
    require(out, "out");
    ubmrps::RngStream rng(seed, stream);
    write_state(ubmrps::sample_haar_state(n, rng).eigen(), out);
  });
}

ubm_status ubm_estimate_moment(const ubm_ensemble* e, int j, int p,
                               ubm_estimate* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    write_estimate(ubmrps::estimate_moment(e->sample, j, p), out);
  });
}

ubm_status ubm_estimate_covariance(const ubm_ensemble* e, int j, int k,
                                   ubm_estimate* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    write_estimate(ubmrps::estimate_covariance(e->sample, j, k), out);
  });
}

ubm_status ubm_estimate_observable(const ubm_ensemble* e, const double* a,
                                   ubm_estimate* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    write_estimate(ubmrps::estimate_observable(
                       e->sample, read_hermitian(e->sample.dim(), a)),
                   out);
  });
}

ubm_status ubm_estimate_renyi(const ubm_ensemble* e, int p,
                              ubm_estimate* out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    write_estimate(ubmrps::estimate_renyi(e->sample, p), out);
  });
}

int ubm_max_coefficient_index(void) { return ubmrps::kMaxCoefficientIndex; }

ubm_status ubm_solve_coefficients(int n, double c, int n_max, double* out) {
  return guarded([&] {
    require(out, "out");
    const auto a = ubmrps::solve_coefficients(n, c, n_max);
    for (int i = 0; i <= n_max; ++i) out[i] = a[i];
  });
}

ubm_status ubm_kummer_1f1(double a, double b, double z, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::kummer_1f1(a, b, z);
  });
}

ubm_status ubm_laplace_marginal(int n, double c, double t, double lambda,
                                int n_max, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::laplace_marginal(n, c, t, lambda, n_max);
  });
}

ubm_status ubm_moment(int n, double c, int p, double t, double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(t >= 0.0)) throw ubmrps::InvalidArgument("t must be >= 0");
    *out = ubmrps::moment_curve(n, c, p)(t);
  });
}

ubm_status ubm_moment_e1(int n, int p, int j, double t, double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(t >= 0.0)) throw ubmrps::InvalidArgument("t must be >= 0");
    *out = ubmrps::moment_e1_curve(n, p, j)(t);
  });
}

ubm_status ubm_covariance(int n, double fj0, double fk0, double fjk0, double t,
                          double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(t >= 0.0)) throw ubmrps::InvalidArgument("t must be >= 0");
    *out = ubmrps::covariance_curve(n, fj0, fk0, fjk0)(t);
  });
}

ubm_status ubm_observable_average(int n, const double* a, const double* psi,
                                  double t, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::observable_average(read_hermitian(n, a), read_state(n, psi),
                                      t);
  });
}

ubm_status ubm_entropy_bound(int n, int p, double t, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::entropy_bound(n, p, t);
  });
}

ubm_status ubm_renyi_bound(int n, const double* psi, int p, double t,
                           double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::renyi_bound(read_state(n, psi), p, t);
  });
}

ubm_status ubm_haar_entropy_bound(int n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::haar_entropy_bound(n);
  });
}

ubm_status ubm_haar_moment(int n, int p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ubmrps::haar_moment(n, p);
  });
}

ubm_status ubm_pde_residual(int n, double c, double t, const double* lambdas,
                            size_t count, int n_max, double* out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(lambdas, "lambdas");
    *out = ubmrps::pde_residual(n, c, t,
                                std::span<const double>(lambdas, count), n_max);
  });
}

void ubm_validation_config_default(ubm_validation_config* cfg) {
  if (cfg == nullptr) return;
  static const ubmrps::ValidationConfig d;
  std::memset(cfg, 0, sizeof *cfg);
  cfg->dim = d.dim;
  cfg->times = d.times.data();
  cfg->n_times = d.times.size();
  cfg->initial = nullptr;
  cfg->observable = nullptr;
  cfg->seed = d.seed;
  cfg->samples = d.samples;
  cfg->threshold = d.threshold;
  ubm_integrator_config_default(&cfg->integrator);
  cfg->max_moment = d.max_moment;
  cfg->batteries = d.batteries;
  cfg->invariance_time = d.invariance_time;
  cfg->invariance_samples = d.invariance_samples;
  cfg->panel_size = d.panel_size;
  cfg->ks_alpha = d.ks_alpha;
  cfg->panel_pass_fraction = d.panel_pass_fraction;
  cfg->inversion_samples = d.inversion_samples;
  cfg->haar_time = d.haar_time;
  cfg->haar_samples = d.haar_samples;
}

ubm_status ubm_validation_check_names(const ubm_validation_config* cfg,
                                      char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(needed, "needed");
    std::string joined;
    for (const auto& name :
         ubmrps::validation_check_names(read_validation(cfg))) {
      joined += name;
      joined += '\n';
    }
    *needed = joined.size() + 1;
    if (buf != nullptr && cap >= joined.size() + 1) {
      std::memcpy(buf, joined.c_str(), joined.size() + 1);
    }
  });
}

ubm_status ubm_validation_run(const ubm_validation_config* cfg,
                              ubm_validation** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto v = std::make_unique<ubm_validation>();
    v->config = read_validation(cfg);
    v->result = ubmrps::run_validation_suite(v->config);
    v->json = ubmrps::validation_to_json(v->config, v->result);
    *out = v.release();
  });
}

void ubm_validation_free(ubm_validation* v) { delete v; }

ubm_status ubm_validation_report_count(const ubm_validation* v,
                                       size_t* count) {
  return guarded([&] {
    require(v, "validation");
    require(count, "count");
    *count = v->result.reports.size();
  });
}

ubm_status ubm_validation_report(const ubm_validation* v, size_t i,
                                 ubm_report* out) {
  return guarded([&] {
    require(v, "validation");
    require(out, "out");
    if (i >= v->result.reports.size()) {
      throw ubmrps::InvalidArgument("report index out of range");
    }
    const auto& r = v->result.reports[i];
    out->name = r.name.c_str();
    out->kind = ubmrps::report_kind_name(r.kind);
    out->analytic_value = r.analytic_value;
    out->value = r.estimate.value;
    out->std_error = r.estimate.std_error;
    out->n_samples = r.estimate.n_samples;
    out->slack = r.slack;
    out->z_score = r.z_score;
    out->threshold = r.threshold;
    out->pass = r.pass ? 1 : 0;
  });
}

ubm_status ubm_validation_all_passed(const ubm_validation* v,
                                     int* all_passed) {
  return guarded([&] {
    require(v, "validation");
    require(all_passed, "all_passed");
    *all_passed = v->result.all_passed() ? 1 : 0;
  });
}

ubm_status ubm_validation_diagnostics(const ubm_validation* v,
                                      ubm_stats* stats,
                                      double* max_probability_defect) {
  return guarded([&] {
    require(v, "validation");
    if (stats) write_stats(v->result.stats, stats);
    if (max_probability_defect) {
      *max_probability_defect = v->result.max_probability_defect;
    }
  });
}

ubm_status ubm_validation_json(const ubm_validation* v, const char** json) {
  return guarded([&] {
    require(v, "validation");
    require(json, "json");
    *json = v->json.c_str();
  });
}

}  // extern "C"
