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

// Monte Carlo estimators over ensembles of psi_t, two-sample
// Kolmogorov-Smirnov machinery and the validation report record.

#ifndef UBMRPS_MONTECARLO_HPP
#define UBMRPS_MONTECARLO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ubmrps/integrator.hpp"
#include "ubmrps/linalg.hpp"

namespace ubmrps {

/// Sample mean with its standard error sqrt(s^2 / n), s^2 the unbiased
/// sample variance. For n = 1 the standard error is +inf.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// Welford accumulation in index order; identical inputs give an exactly
/// zero standard error. Throws InvalidArgument on an empty span.
Estimate estimate_mean(std::span<const double> xs);

/// E |psi_t^j|^{2p}; j is one-based, p >= 1.
Estimate estimate_moment(const EnsembleSample& ensemble, int j, int p);
/// E |psi_t^j|^2 |psi_t^k|^2 for j != k (one-based).
Estimate estimate_covariance(const EnsembleSample& ensemble, int j, int k);
/// E <psi_t, A psi_t>.
Estimate estimate_observable(const EnsembleSample& ensemble,
                             const HermitianMatrix& a);
/// E S_p(psi_t) with S_p(psi) = ln(sum_j |psi^j|^{2p}) / (1 - p), p >= 2.
Estimate estimate_renyi(const EnsembleSample& ensemble, int p);

/// sup_x |F_a(x) - F_b(x)| of the two empirical distribution functions.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic critical value c(alpha) = sqrt(-ln(alpha / 2) / 2) of the
/// scaled statistic D sqrt(n m / (n + m)).
double ks_scaled_critical(double alpha);
/// Critical value on the D scale for sample sizes n and m.
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

enum class ReportKind {
  /// z = sign(d) max(0, |d| - slack) / se with d = estimate - analytic;
  /// passes when |z| <= threshold.
  kTwoSided,
  /// z = max(0, analytic - estimate - slack) / se; passes when z <= threshold.
  kLowerBound,
  /// estimate.value = D, analytic_value = critical D, z = D sqrt(nm/(n+m)),
  /// threshold = c(alpha); passes when z <= threshold.
  kKolmogorovSmirnov,
  /// estimate.value = fraction of passing sub-tests, analytic_value = the
  /// required fraction, z = max(0, required - fraction), threshold = 0.
  kPanelFraction,
};

const char* report_kind_name(ReportKind kind);

/// Configuration echoed on every report.
struct ReportConfig {
  int dim = 0;
  double t = 0.0;
  double c = 0.0;
  std::uint64_t seed = 0;
  double step_size = 0.0;
  std::size_t n_samples = 0;
};

struct ValidationReport {
  std::string name;
  ReportKind kind = ReportKind::kTwoSided;
  double analytic_value = 0.0;
  Estimate estimate;
  double slack = 0.0;
  double z_score = 0.0;
  double threshold = 0.0;
  bool pass = false;
  ReportConfig config;
};

/// Fills z_score and pass for kTwoSided and kLowerBound reports. A zero
/// standard error gives z = 0 when the excess is zero and +-inf otherwise.
ValidationReport make_report(std::string name, ReportKind kind,
                             double analytic, const Estimate& estimate,
                             double threshold, double slack,
                             const ReportConfig& config);

ValidationReport make_ks_report(std::string name, std::span<const double> a,
                                std::span<const double> b, double alpha,
                                const ReportConfig& config);

ValidationReport make_panel_report(std::string name,
                                   std::span<const ValidationReport> members,
                                   double required_fraction,
                                   const ReportConfig& config);

/// Serializes one report as a JSON object.
std::string report_to_json(const ValidationReport& report);

enum class InvarianceVariant {
  /// V psi = psi is required; compares psi_t against V psi_t.
  kStabilizer,
  /// Compares V psi_t (started at psi) against the run started at V psi.
  kTransported,
  /// Like kStabilizer but with V psi != psi, so the test should reject.
  kPowerCheck,
};

/// Two-sample KS test of |<phi, .>|^2 between two independently seeded
/// ensembles at time t, one report per panel vector. Throws InvalidArgument
/// for an empty panel, mismatched dimensions, or a stabilizer/power-check
/// precondition on V psi that does not hold (tolerance 1e-12).
std::vector<ValidationReport> invariance_test(
    const PureState& psi, double t, const UnitaryMatrix& v,
    std::span<const PureState> panel, std::size_t m,
    const IntegratorConfig& cfg, std::uint64_t seed, InvarianceVariant variant,
    double alpha = 0.01);

/// Seed of the second, independent ensemble in invariance_test.
std::uint64_t partner_seed(std::uint64_t seed);

}  // namespace ubmrps

#endif  // UBMRPS_MONTECARLO_HPP
