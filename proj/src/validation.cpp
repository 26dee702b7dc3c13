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

#include "ubmrps/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#include "ubmrps/analytics.hpp"
#include "ubmrps/error.hpp"
#include "ubmrps/json_writer.hpp"
#include "ubmrps/version.hpp"

namespace ubmrps {
namespace {

constexpr std::uint64_t kInvarianceSeed = 1;
constexpr std::uint64_t kTransportedSeed = 2;
constexpr std::uint64_t kInversionSeed = 3;
constexpr std::uint64_t kHaarSeed = 4;

constexpr std::uint64_t kObservableStream = kAuxiliaryStreamBase;
constexpr std::uint64_t kStabilizerStream = kAuxiliaryStreamBase + 1;
constexpr std::uint64_t kTransportStream = kAuxiliaryStreamBase + 2;
constexpr std::uint64_t kPanelStream = kAuxiliaryStreamBase + 3;

bool has(const ValidationConfig& cfg, unsigned bit) {
  return (cfg.batteries & bit) != 0;
}

bool wants_main_run(const ValidationConfig& cfg) {
  return has(cfg, kBatteryMoments | kBatteryCovariances | kBatteryObservable |
                      kBatteryEntropy);
}

std::vector<int> moment_coordinates(int dim) {
  return dim >= 2 ? std::vector<int>{1, 2} : std::vector<int>{1};
}

std::vector<std::pair<int, int>> covariance_pairs(int dim) {
  std::vector<std::pair<int, int>> out{{1, 2}};
  if (dim >= 3) out.emplace_back(2, 3);
  return out;
}

const std::vector<int>& renyi_orders() {
  static const std::vector<int> kOrders{2, 3};
  return kOrders;
}

std::string at(double t) { return "/t=" + shortest_repr(t); }

std::string moment_name(int j, int p, double t) {
  return "moment/j=" + std::to_string(j) + "/p=" + std::to_string(p) + at(t);
}
std::string covariance_name(int j, int k, double t) {
  return "covariance/j=" + std::to_string(j) + "/k=" + std::to_string(k) +
         at(t);
}
std::string observable_name(double t) { return "observable" + at(t); }
std::string renyi_name(int p, double t) {
  return "renyi/p=" + std::to_string(p) + at(t);
}

// Names per block; the run below emits reports in exactly this order.
std::vector<std::string> main_names(const ValidationConfig& cfg, double t) {
  std::vector<std::string> out;
  if (has(cfg, kBatteryMoments)) {
    for (int j : moment_coordinates(cfg.dim)) {
      for (int p = 1; p <= cfg.max_moment; ++p) {
        out.push_back(moment_name(j, p, t));
      }
    }
  }
  if (has(cfg, kBatteryCovariances)) {
    for (auto [j, k] : covariance_pairs(cfg.dim)) {
      out.push_back(covariance_name(j, k, t));
    }
  }
  if (has(cfg, kBatteryObservable)) out.push_back(observable_name(t));
  if (has(cfg, kBatteryEntropy)) {
    for (int p : renyi_orders()) out.push_back(renyi_name(p, t));
  }
  return out;
}

std::vector<std::string> invariance_names() {
  return {"invariance/stabilizer", "invariance/transported"};
}

std::vector<std::string> inversion_names(const ValidationConfig& cfg) {
  return {"inversion/imag_trace" + at(cfg.invariance_time),
          "trace/real" + at(cfg.invariance_time)};
}

std::vector<std::string> haar_names(const ValidationConfig& cfg) {
  std::vector<std::string> out;
  for (int j = 1; j <= cfg.dim; ++j) {
    for (int p = 1; p <= cfg.max_moment; ++p) {
      out.push_back("haar/moment/j=" + std::to_string(j) +
                    "/p=" + std::to_string(p));
    }
  }
  out.push_back("haar/covariance/j=1/k=2");
  out.push_back("haar/observable");
  out.push_back("haar/renyi/p=2");
  return out;
}

ReportConfig echo(const ValidationConfig& cfg, double t, double c,
                  std::uint64_t seed, std::size_t m) {
  ReportConfig rc;
  rc.dim = cfg.dim;
  rc.t = t;
  rc.c = c;
  rc.seed = seed;
  rc.step_size = cfg.integrator.step_size;
  rc.n_samples = m;
  return rc;
}

void take_names(std::vector<ValidationReport>& reports,
                const std::vector<std::string>& names, std::size_t begin) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (reports.at(begin + i).name != names[i]) {
      throw InternalError("report order mismatch at " + names[i]);
    }
  }
}

void run_main(const ValidationConfig& cfg, const PureState& psi,
              const HermitianMatrix& a, ValidationResult& out) {
  const double slack = 2.0 * cfg.integrator.step_size;
  std::vector<double> c(static_cast<std::size_t>(cfg.dim));
  for (int j = 0; j < cfg.dim; ++j) c[static_cast<std::size_t>(j)] = std::norm(psi[j]);

  const auto ensembles = sample_ensemble_path(psi, cfg.times, cfg.samples,
                                              cfg.integrator, cfg.seed);
  out.stats.merge(ensembles.front().stats());
  for (const auto& e : ensembles) {
    const Eigen::MatrixXd probs = e.amplitudes().cwiseAbs2();
    for (Eigen::Index k = 0; k < probs.cols(); ++k) {
      out.max_probability_defect = std::max(
          out.max_probability_defect, std::abs(probs.col(k).sum() - 1.0));
    }
  }

  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const double t = cfg.times[i];
    const EnsembleSample& e = ensembles[i];
    const std::size_t begin = out.reports.size();
    if (has(cfg, kBatteryMoments)) {
      for (int j : moment_coordinates(cfg.dim)) {
        const double cj = c[static_cast<std::size_t>(j - 1)];
        for (int p = 1; p <= cfg.max_moment; ++p) {
          out.reports.push_back(make_report(
              moment_name(j, p, t), ReportKind::kTwoSided,
              moment_curve(cfg.dim, cj, p)(t), estimate_moment(e, j, p),
              cfg.threshold, slack, echo(cfg, t, cj, cfg.seed, cfg.samples)));
        }
      }
    }
    if (has(cfg, kBatteryCovariances)) {
      for (auto [j, k] : covariance_pairs(cfg.dim)) {
        const double cj = c[static_cast<std::size_t>(j - 1)];
        const double ck = c[static_cast<std::size_t>(k - 1)];
        out.reports.push_back(make_report(
            covariance_name(j, k, t), ReportKind::kTwoSided,
            covariance_curve(cfg.dim, cj, ck, cj * ck)(t),
            estimate_covariance(e, j, k), cfg.threshold, slack,
            echo(cfg, t, cj, cfg.seed, cfg.samples)));
      }
    }
    if (has(cfg, kBatteryObservable)) {
      out.reports.push_back(make_report(
          observable_name(t), ReportKind::kTwoSided,
          observable_average(a, psi, t), estimate_observable(e, a),
          cfg.threshold, slack, echo(cfg, t, c[0], cfg.seed, cfg.samples)));
    }
    if (has(cfg, kBatteryEntropy)) {
      for (int p : renyi_orders()) {
        out.reports.push_back(make_report(
            renyi_name(p, t), ReportKind::kLowerBound, renyi_bound(psi, p, t),
            estimate_renyi(e, p), cfg.threshold, slack,
            echo(cfg, t, c[0], cfg.seed, cfg.samples)));
      }
    }
    take_names(out.reports, main_names(cfg, t), begin);
  }
}

std::vector<PureState> make_panel(const PureState& psi, std::size_t size,
                                  std::uint64_t seed) {
  std::vector<PureState> panel;
  panel.reserve(size);
  panel.push_back(psi);
  RngStream rng(seed, kPanelStream);
  while (panel.size() < size) panel.push_back(sample_haar_state(psi.dim(), rng));
  return panel;
}

void run_invariance(const ValidationConfig& cfg, const PureState& psi,
                    ValidationResult& out) {
  const auto panel = make_panel(psi, cfg.panel_size, cfg.seed);
  IntegratorConfig icfg = cfg.integrator;
  icfg.carry = Carry::kVector;

  RngStream stab_rng(cfg.seed, kStabilizerStream);
  const UnitaryMatrix v_stab = random_stabilizer(psi, stab_rng);
  const std::uint64_t s1 = derive_seed(cfg.seed, kInvarianceSeed);
  auto stab = invariance_test(psi, cfg.invariance_time, v_stab, panel,
                              cfg.invariance_samples, icfg, s1,
                              InvarianceVariant::kStabilizer, cfg.ks_alpha);
  const ReportConfig rc1 = echo(cfg, cfg.invariance_time, std::norm(psi[0]),
                                s1, cfg.invariance_samples);
  out.reports.push_back(make_panel_report("invariance/stabilizer", stab,
                                          cfg.panel_pass_fraction, rc1));

  RngStream tr_rng(cfg.seed, kTransportStream);
  const UnitaryMatrix v_any = sample_haar_unitary(cfg.dim, tr_rng);
  const std::uint64_t s2 = derive_seed(cfg.seed, kTransportedSeed);
  auto transported = invariance_test(
      psi, cfg.invariance_time, v_any, panel, cfg.invariance_samples, icfg, s2,
      InvarianceVariant::kTransported, cfg.ks_alpha);
  const ReportConfig rc2 = echo(cfg, cfg.invariance_time, std::norm(psi[0]),
                                s2, cfg.invariance_samples);
  out.reports.push_back(make_panel_report("invariance/transported",
                                          transported,
                                          cfg.panel_pass_fraction, rc2));

  for (auto& r : stab) out.panel_members.push_back(std::move(r));
  for (auto& r : transported) out.panel_members.push_back(std::move(r));
}

void run_inversion(const ValidationConfig& cfg, ValidationResult& out) {
  IntegratorConfig icfg = cfg.integrator;
  icfg.carry = Carry::kMatrix;
  const double t = cfg.invariance_time;
  const std::uint64_t s = derive_seed(cfg.seed, kInversionSeed);
  IntegrationStats stats;
  const auto us =
      sample_unitaries(cfg.dim, t, cfg.inversion_samples, icfg, s, &stats);
  std::vector<double> re(us.size());
  std::vector<double> im(us.size());
  for (std::size_t k = 0; k < us.size(); ++k) {
    const Complex tr = us[k].eigen().trace();
    re[k] = tr.real();
    im[k] = tr.imag();
  }
  const auto names = inversion_names(cfg);
  const ReportConfig rc = echo(cfg, t, 1.0, s, cfg.inversion_samples);
  // E Tr U_t - E Tr U_t* = 2i E Im Tr U_t.
  out.reports.push_back(make_report(names[0], ReportKind::kTwoSided, 0.0,
                                    estimate_mean(im), cfg.threshold, 0.0, rc));
  out.reports.push_back(make_report(
      names[1], ReportKind::kTwoSided, cfg.dim * std::exp(-0.5 * t),
      estimate_mean(re), cfg.threshold, 2.0 * cfg.integrator.step_size, rc));
}

void run_haar(const ValidationConfig& cfg, const PureState& psi,
              const HermitianMatrix& a, ValidationResult& out) {
  IntegratorConfig icfg = cfg.integrator;
  icfg.carry = Carry::kVector;
  const double t = cfg.haar_time;
  const std::uint64_t s = derive_seed(cfg.seed, kHaarSeed);
  const auto e = sample_ensemble(psi, t, cfg.haar_samples, icfg, s);
  const int n = cfg.dim;
  const ReportConfig rc = echo(cfg, t, std::norm(psi[0]), s, cfg.haar_samples);
  const auto names = haar_names(cfg);
  const std::size_t begin = out.reports.size();
  std::size_t i = 0;
  for (int j = 1; j <= n; ++j) {
    for (int p = 1; p <= cfg.max_moment; ++p) {
      out.reports.push_back(make_report(names[i++], ReportKind::kTwoSided,
                                        haar_moment(n, p),
                                        estimate_moment(e, j, p),
                                        cfg.threshold, 0.0, rc));
    }
  }
  out.reports.push_back(make_report(names[i++], ReportKind::kTwoSided,
                                    1.0 / (n * (n + 1.0)),
                                    estimate_covariance(e, 1, 2),
                                    cfg.threshold, 0.0, rc));
  out.reports.push_back(make_report(names[i++], ReportKind::kTwoSided,
                                    a.trace() / n, estimate_observable(e, a),
                                    cfg.threshold, 0.0, rc));
  out.reports.push_back(make_report(names[i++], ReportKind::kLowerBound,
                                    -std::log(n * haar_moment(n, 2)),
                                    estimate_renyi(e, 2), cfg.threshold, 0.0,
                                    rc));
  take_names(out.reports, names, begin);
}

}  // namespace

void ValidationConfig::validate() const {
  if (dim < 2) throw ConfigError("validation needs N >= 2");
  if (samples == 0) throw ConfigError("validation needs M > 0");
  if (times.empty()) throw ConfigError("validation needs a non-empty t-grid");
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) {
      throw ConfigError("t-grid entries must be finite and >= 0");
    }
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw ConfigError("t-grid must be non-decreasing");
  }
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw ConfigError("threshold must be finite and >= 0");
  }
  if (max_moment < 1 || max_moment > kMaxCoefficientIndex) {
    throw ConfigError("max_moment must lie in 1.." +
                      std::to_string(kMaxCoefficientIndex));
  }
  if ((batteries & ~static_cast<unsigned>(kAllBatteries)) != 0 ||
      batteries == 0) {
    throw ConfigError("unknown or empty battery selection");
  }
  if (initial && initial->dim() != dim) {
    throw ConfigError("initial state dimension does not match N");
  }
  if (observable && observable->dim() != dim) {
    throw ConfigError("observable dimension does not match N");
  }
  if (!(invariance_time >= 0.0) || !(haar_time >= 0.0) ||
      !std::isfinite(invariance_time) || !std::isfinite(haar_time)) {
    throw ConfigError("sub-run times must be finite and >= 0");
  }
  if (has(*this, kBatteryInvariance) &&
      (invariance_samples == 0 || panel_size == 0)) {
    throw ConfigError("invariance checks need M > 0 and a non-empty panel");
  }
  if (!(ks_alpha > 0.0 && ks_alpha < 1.0)) {
    throw ConfigError("KS level must lie in (0, 1)");
  }
  if (!(panel_pass_fraction >= 0.0 && panel_pass_fraction <= 1.0)) {
    throw ConfigError("panel pass fraction must lie in [0, 1]");
  }
  if (has(*this, kBatteryInversion) && inversion_samples == 0) {
    throw ConfigError("inversion check needs M > 0");
  }
  if (has(*this, kBatteryHaar) && haar_samples == 0) {
    throw ConfigError("Haar checks need M > 0");
  }
  try {
    integrator.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

PureState ValidationConfig::initial_state() const {
  return initial ? *initial : PureState::basis(dim, 0);
}

bool ValidationResult::all_passed() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const ValidationReport& r) { return r.pass; });
}

std::vector<std::string> validation_check_names(const ValidationConfig& cfg) {
  cfg.validate();
  std::vector<std::string> out;
  if (wants_main_run(cfg)) {
    for (double t : cfg.times) {
      for (auto& name : main_names(cfg, t)) out.push_back(std::move(name));
    }
  }
  if (has(cfg, kBatteryInvariance)) {
    for (auto& name : invariance_names()) out.push_back(std::move(name));
  }
  if (has(cfg, kBatteryInversion)) {
    for (auto& name : inversion_names(cfg)) out.push_back(std::move(name));
  }
  if (has(cfg, kBatteryHaar)) {
    for (auto& name : haar_names(cfg)) out.push_back(std::move(name));
  }
  return out;
}

ValidationResult run_validation_suite(const ValidationConfig& cfg) {
  cfg.validate();
  const PureState psi = cfg.initial_state();
  const HermitianMatrix a =
      cfg.observable ? *cfg.observable : default_observable(cfg.dim, cfg.seed);
  ValidationResult out;
  auto stage = [](const char* what, auto&& body) {
    try {
      body();
    } catch (const NumericError& e) {
      throw NumericError(std::string(what) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(what) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string(what) + ": " + e.what());
    }
  };
  if (wants_main_run(cfg)) stage("t-grid run", [&] { run_main(cfg, psi, a, out); });
  if (has(cfg, kBatteryInvariance)) {
    stage("invariance run", [&] { run_invariance(cfg, psi, out); });
  }
  if (has(cfg, kBatteryInversion)) {
    stage("inversion run", [&] { run_inversion(cfg, out); });
  }
  if (has(cfg, kBatteryHaar)) {
    stage("Haar run", [&] { run_haar(cfg, psi, a, out); });
  }
  return out;
}

std::string validation_to_json(const ValidationConfig& cfg,
                               const ValidationResult& result) {
  const PureState psi = cfg.initial_state();
  const HermitianMatrix a =
      cfg.observable ? *cfg.observable : default_observable(cfg.dim, cfg.seed);
  JsonWriter w;
  w.begin_object();
  w.field("version", kVersion);
  w.key("config").begin_object();
  w.field("command", "validate");
  w.field("N", cfg.dim);
  w.key("tgrid").begin_array();
  for (double t : cfg.times) w.value(t);
  w.end_array();
  w.key("init").begin_array();
  for (int j = 0; j < psi.dim(); ++j) {
    w.begin_array().value(psi[j].real()).value(psi[j].imag()).end_array();
  }
  w.end_array();
  w.field("seed", cfg.seed);
  w.field("M", static_cast<std::uint64_t>(cfg.samples));
  w.field("threshold", cfg.threshold);
  w.field("step", cfg.integrator.step_size);
  w.field("reunit_interval", cfg.integrator.reunit_interval);
  w.field("reunit_threshold", cfg.integrator.reunit_threshold);
  w.field("carry",
          cfg.integrator.carry == Carry::kMatrix ? "matrix" : "vector");
  w.field("max_moment", cfg.max_moment);
  w.field("batteries", static_cast<std::uint64_t>(cfg.batteries));
  w.key("observable").begin_array();
  for (int r = 0; r < a.dim(); ++r) {
    w.begin_array();
    for (int c = 0; c < a.dim(); ++c) {
      w.begin_array().value(a(r, c).real()).value(a(r, c).imag()).end_array();
    }
    w.end_array();
  }
  w.end_array();
  w.field("invariance_t", cfg.invariance_time);
  w.field("invariance_M", static_cast<std::uint64_t>(cfg.invariance_samples));
  w.field("panel_size", static_cast<std::uint64_t>(cfg.panel_size));
  w.field("ks_alpha", cfg.ks_alpha);
  w.field("panel_pass_fraction", cfg.panel_pass_fraction);
  w.field("inversion_M", static_cast<std::uint64_t>(cfg.inversion_samples));
  w.field("haar_t", cfg.haar_time);
  w.field("haar_M", static_cast<std::uint64_t>(cfg.haar_samples));
  w.end_object();

  w.key("reports").begin_array();
  for (const auto& r : result.reports) w.raw(report_to_json(r));
  w.end_array();
  w.key("panel_members").begin_array();
  for (const auto& r : result.panel_members) w.raw(report_to_json(r));
  w.end_array();
  w.key("diagnostics").begin_object();
  w.field("max_unitarity_defect", result.stats.max_unitarity_defect);
  w.field("max_norm_defect", result.stats.max_norm_defect);
  w.field("max_probability_defect", result.max_probability_defect);
  w.field("reunitarizations",
          static_cast<std::uint64_t>(result.stats.reunitarizations));
  w.field("steps", static_cast<std::uint64_t>(result.stats.steps));
  w.end_object();
  w.field("all_pass", result.all_passed());
  w.end_object();
  return w.str() + "\n";
}

std::string shortest_repr(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

HermitianMatrix default_observable(int dim, std::uint64_t seed) {
  RngStream rng(seed, kObservableStream);
  std::vector<double> diag(static_cast<std::size_t>(dim));
  std::vector<Complex> upper;
  for (auto& d : diag) d = rng.normal();
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      upper.emplace_back(re / std::sqrt(2.0), im / std::sqrt(2.0));
    }
  }
  return hermitian_from_parts(diag, upper);
}

UnitaryMatrix random_stabilizer(const PureState& psi, RngStream& rng) {
  const int n = psi.dim();
  Eigen::MatrixXcd seed_cols(n, n);
  seed_cols.col(0) = psi.eigen();
  for (int c = 1; c < n; ++c) {
    for (int r = 0; r < n; ++r) seed_cols(r, c) = Complex(rng.normal(), rng.normal());
  }
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(seed_cols)
                                 .householderQ() *
                             Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Identity(n, n);
  if (n > 1) {
    block.bottomRightCorner(n - 1, n - 1) =
        sample_haar_unitary(n - 1, rng).eigen();
  }
  const Eigen::MatrixXcd v = q * block * q.adjoint();
  return UnitaryMatrix(v);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return partner_seed(seed + (index + 1) * 0x632BE59BD9B4E019ull);
}

}  // namespace ubmrps
