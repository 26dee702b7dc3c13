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

#include "ubmrps/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "ubmrps/error.hpp"
#include "ubmrps/json_writer.hpp"

namespace ubmrps {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_coordinate(const EnsembleSample& e, int j, const char* what) {
  if (j < 1 || j > e.dim()) {
    throw InvalidArgument(std::string(what) + " index " + std::to_string(j) +
                          " outside 1.." + std::to_string(e.dim()));
  }
}

void check_nonempty(const EnsembleSample& e) {
  if (e.size() == 0) throw InvalidArgument("empty ensemble");
}

template <class F>
Estimate estimate_columns(const EnsembleSample& e, F&& f) {
  check_nonempty(e);
  const Eigen::MatrixXcd& a = e.amplitudes();
  std::vector<double> xs(e.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = f(a.col(static_cast<Eigen::Index>(k)));
  }
  return estimate_mean(xs);
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

std::vector<double> overlaps(const PureState& phi, const Eigen::MatrixXcd& a) {
  const Eigen::RowVectorXcd ip = phi.eigen().adjoint() * a;
  std::vector<double> out(static_cast<std::size_t>(ip.size()));
  for (Eigen::Index k = 0; k < ip.size(); ++k) {
    out[static_cast<std::size_t>(k)] = std::norm(ip(k));
  }
  return out;
}

const char* variant_name(InvarianceVariant v) {
  switch (v) {
    case InvarianceVariant::kStabilizer:
      return "stabilizer";
    case InvarianceVariant::kTransported:
      return "transported";
    case InvarianceVariant::kPowerCheck:
      return "power_check";
  }
  return "unknown";
}

}  // namespace

Estimate estimate_mean(std::span<const double> xs) {
  if (xs.empty()) throw InvalidArgument("estimate of an empty sample");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  Estimate e;
  e.value = mean;
  e.n_samples = n;
  if (n < 2) {
    e.std_error = kInf;
  } else {
    const double var = std::max(0.0, m2 / static_cast<double>(n - 1));
    e.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

Estimate estimate_moment(const EnsembleSample& ensemble, int j, int p) {
  check_coordinate(ensemble, j, "coordinate");
  if (p < 1) throw InvalidArgument("moment order must be >= 1");
  return estimate_columns(ensemble, [&](const auto& col) {
    return ipow(std::norm(col(j - 1)), p);
  });
}

Estimate estimate_covariance(const EnsembleSample& ensemble, int j, int k) {
  check_coordinate(ensemble, j, "coordinate");
  check_coordinate(ensemble, k, "coordinate");
  if (j == k) {
    throw InvalidArgument("cross moment needs distinct coordinates");
  }
  return estimate_columns(ensemble, [&](const auto& col) {
    return std::norm(col(j - 1)) * std::norm(col(k - 1));
  });
}

Estimate estimate_observable(const EnsembleSample& ensemble,
                             const HermitianMatrix& a) {
  if (a.dim() != ensemble.dim()) {
    throw InvalidArgument("observable dimension " + std::to_string(a.dim()) +
                          " does not match ensemble dimension " +
                          std::to_string(ensemble.dim()));
  }
  const Eigen::MatrixXcd& m = a.eigen();
  return estimate_columns(ensemble, [&](const auto& col) {
    return col.dot(m * col).real();
  });
}

Estimate estimate_renyi(const EnsembleSample& ensemble, int p) {
  if (p < 2) throw InvalidArgument("Renyi order must be >= 2");
  return estimate_columns(ensemble, [&](const auto& col) {
    double y = 0.0;
    for (Eigen::Index j = 0; j < col.size(); ++j) {
      y += ipow(std::norm(col(j)), p);
    }
    return std::log(y) / (1.0 - p);
  });
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("KS statistic needs two non-empty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n -
                             static_cast<double>(j) / m));
  }
  return d;
}

double ks_scaled_critical(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("KS level must lie in (0, 1)");
  }
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("KS sample sizes must be > 0");
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return ks_scaled_critical(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

const char* report_kind_name(ReportKind kind) {
  switch (kind) {
    case ReportKind::kTwoSided:
      return "two_sided";
    case ReportKind::kLowerBound:
      return "lower_bound";
    case ReportKind::kKolmogorovSmirnov:
      return "kolmogorov_smirnov";
    case ReportKind::kPanelFraction:
      return "panel_fraction";
  }
  return "unknown";
}

ValidationReport make_report(std::string name, ReportKind kind,
                             double analytic, const Estimate& estimate,
                             double threshold, double slack,
                             const ReportConfig& config) {
  if (kind != ReportKind::kTwoSided && kind != ReportKind::kLowerBound) {
    throw InvalidArgument("make_report handles two-sided and bound checks");
  }
  if (slack < 0.0 || !(threshold >= 0.0)) {
    throw InvalidArgument("slack and threshold must be non-negative");
  }
  ValidationReport r;
  r.name = std::move(name);
  r.kind = kind;
  r.analytic_value = analytic;
  r.estimate = estimate;
  r.slack = slack;
  r.threshold = threshold;
  r.config = config;

  double signed_excess;
  if (kind == ReportKind::kTwoSided) {
    const double d = estimate.value - analytic;
    signed_excess = std::copysign(std::max(0.0, std::abs(d) - slack), d);
  } else {
    signed_excess = std::max(0.0, analytic - estimate.value - slack);
  }
  if (std::isnan(estimate.value) || std::isnan(analytic)) {
    r.z_score = std::numeric_limits<double>::quiet_NaN();
  } else if (signed_excess == 0.0) {
    r.z_score = 0.0;
  } else if (estimate.std_error == 0.0) {
    r.z_score = std::copysign(kInf, signed_excess);
  } else {
    r.z_score = signed_excess / estimate.std_error;
  }
  r.pass = std::abs(r.z_score) <= threshold;
  return r;
}

ValidationReport make_ks_report(std::string name, std::span<const double> a,
                                std::span<const double> b, double alpha,
                                const ReportConfig& config) {
  ValidationReport r;
  r.name = std::move(name);
  r.kind = ReportKind::kKolmogorovSmirnov;
  const double d = ks_statistic({a.begin(), a.end()}, {b.begin(), b.end()});
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  r.analytic_value = ks_critical_value(alpha, a.size(), b.size());
  r.estimate = Estimate{d, 0.0, a.size() + b.size()};
  r.slack = 0.0;
  r.z_score = d * std::sqrt(n * m / (n + m));
  r.threshold = ks_scaled_critical(alpha);
  r.pass = r.z_score <= r.threshold;
  r.config = config;
  return r;
}

ValidationReport make_panel_report(std::string name,
                                   std::span<const ValidationReport> members,
                                   double required_fraction,
                                   const ReportConfig& config) {
  if (members.empty()) throw InvalidArgument("empty panel");
  std::size_t passed = 0;
  for (const auto& m : members) passed += m.pass ? 1 : 0;
  const double fraction =
      static_cast<double>(passed) / static_cast<double>(members.size());
  ValidationReport r;
  r.name = std::move(name);
  r.kind = ReportKind::kPanelFraction;
  r.analytic_value = required_fraction;
  r.estimate = Estimate{fraction, 0.0, members.size()};
  r.z_score = std::max(0.0, required_fraction - fraction);
  r.threshold = 0.0;
  r.pass = r.z_score <= 0.0;
  r.config = config;
  return r;
}

std::string report_to_json(const ValidationReport& r) {
  JsonWriter w;
  w.begin_object();
  w.field("name", r.name);
  w.field("kind", report_kind_name(r.kind));
  w.field("analytic_value", r.analytic_value);
  w.key("estimate").begin_object();
  w.field("value", r.estimate.value);
  w.field("std_error", r.estimate.std_error);
  w.field("n_samples", static_cast<std::uint64_t>(r.estimate.n_samples));
  w.end_object();
  w.field("slack", r.slack);
  w.field("z_score", r.z_score);
  w.field("threshold", r.threshold);
  w.field("pass", r.pass);
  w.key("config").begin_object();
  w.field("N", r.config.dim);
  w.field("t", r.config.t);
  w.field("c", r.config.c);
  w.field("seed", r.config.seed);
  w.field("step", r.config.step_size);
  w.field("M", static_cast<std::uint64_t>(r.config.n_samples));
  w.end_object();
  w.end_object();
  return w.str();
}

std::uint64_t partner_seed(std::uint64_t seed) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<ValidationReport> invariance_test(
    const PureState& psi, double t, const UnitaryMatrix& v,
    std::span<const PureState> panel, std::size_t m,
    const IntegratorConfig& cfg, std::uint64_t seed, InvarianceVariant variant,
    double alpha) {
  if (panel.empty()) throw InvalidArgument("invariance test needs a panel");
  if (m == 0) throw InvalidArgument("invariance test needs M > 0");
  const int n = psi.dim();
  if (v.dim() != n) throw InvalidArgument("V has the wrong dimension");
  for (const auto& phi : panel) {
    if (phi.dim() != n) {
      throw InvalidArgument("panel vector has the wrong dimension");
    }
  }
  const Eigen::VectorXcd v_psi = v.eigen() * psi.eigen();
  const double moved = (v_psi - psi.eigen()).norm();
  if (variant == InvarianceVariant::kStabilizer && moved > 1e-12) {
    throw InvalidArgument("V does not fix psi");
  }
  if (variant == InvarianceVariant::kPowerCheck && moved <= 1e-12) {
    throw InvalidArgument("power check needs V psi != psi");
  }

  Eigen::MatrixXcd first;
  Eigen::MatrixXcd second;
  if (variant == InvarianceVariant::kTransported) {
    first = v.eigen() *
            sample_ensemble(psi, t, m, cfg, seed).amplitudes();
    const PureState start(v_psi, kTrajectoryNormTolerance);
    second = sample_ensemble(start, t, m, cfg, partner_seed(seed)).amplitudes();
  } else {
    first = sample_ensemble(psi, t, m, cfg, seed).amplitudes();
    second = v.eigen() *
             sample_ensemble(psi, t, m, cfg, partner_seed(seed)).amplitudes();
  }

  ReportConfig rc;
  rc.dim = n;
  rc.t = t;
  rc.c = std::norm(psi[0]);
  rc.seed = seed;
  rc.step_size = cfg.step_size;
  rc.n_samples = m;

  std::vector<ValidationReport> out;
  out.reserve(panel.size());
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const auto xs = overlaps(panel[i], first);
    const auto ys = overlaps(panel[i], second);
    out.push_back(make_ks_report(std::string("invariance/") +
                                     variant_name(variant) + "/phi=" +
                                     std::to_string(i),
                                 xs, ys, alpha, rc));
  }
  return out;
}

}  // namespace ubmrps
