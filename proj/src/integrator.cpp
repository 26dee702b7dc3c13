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

#include "ubmrps/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <utility>

#include "parallel.hpp"
#include "step_kernel.hpp"
#include "ubmrps/error.hpp"
#include "ubmrps/hermitian_bm.hpp"

namespace ubmrps {
namespace {

using detail::dispatch_dim;
using detail::StepKernel;
using detail::substep_count;

// Carries U_t (or psi_t) across successive observation times.
template <int D>
class Propagator {
 public:
  using Kernel = StepKernel<D>;
  using Mat = typename Kernel::Mat;
  using Vec = typename Kernel::Vec;

  Propagator(const Eigen::VectorXcd& psi0, const IntegratorConfig& cfg,
             Carry carry)
      : n_(static_cast<int>(psi0.size())),
        cfg_(cfg),
        carry_(carry),
        kernel_(n_),
        psi0_(psi0),
        psi_(psi0),
        u_(Mat::Identity(n_, n_)) {}

  void advance(double span, RngStream& rng, IntegrationStats& stats) {
    const double h = cfg_.step_size;
    const long steps = substep_count(span, h);
    for (long s = 0; s < steps; ++s) {
      const double dt =
          (s + 1 < steps) ? h : span - static_cast<double>(steps - 1) * h;
      kernel_.draw(dt, rng);
      kernel_.decompose();
      if (carry_ == Carry::kMatrix) {
        kernel_.apply(u_);
      } else {
        kernel_.apply(psi_);
      }
      ++stats.steps;
      if (++since_check_ >= cfg_.reunit_interval) {
        since_check_ = 0;
        guard(stats);
      }
    }
  }

  // Current psi_t, recording its defects.
  Vec observe_state(IntegrationStats& stats) {
    if (carry_ == Carry::kMatrix) {
      stats.max_unitarity_defect =
          std::max(stats.max_unitarity_defect, defect());
      psi_.noalias() = u_ * psi0_;
    }
    stats.max_norm_defect =
        std::max(stats.max_norm_defect, std::abs(psi_.norm() - 1.0));
    return psi_;
  }

  const Mat& observe_unitary(IntegrationStats& stats) {
    stats.max_unitarity_defect =
        std::max(stats.max_unitarity_defect, defect());
    return u_;
  }

 private:
  double defect() const {
    return (u_ * u_.adjoint() - Mat::Identity(n_, n_)).norm();
  }

  void guard(IntegrationStats& stats) {
    if (carry_ == Carry::kMatrix) {
      const double d = defect();
      stats.max_unitarity_defect = std::max(stats.max_unitarity_defect, d);
      if (d > cfg_.reunit_threshold) {
        u_ = polar_reunitarize(ComplexMatrix(Eigen::MatrixXcd(u_))).eigen();
        ++stats.reunitarizations;
      }
    } else {
      const double norm = psi_.norm();
      if (std::abs(norm - 1.0) > cfg_.reunit_threshold) {
        psi_ /= norm;
        ++stats.reunitarizations;
      }
    }
  }

  int n_;
  IntegratorConfig cfg_;
  Carry carry_;
  Kernel kernel_;
  Vec psi0_;
  Vec psi_;
  Mat u_;
  int since_check_ = 0;
};

void check_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) {
      throw InvalidArgument("integrator: times must be finite and >= 0");
    }
    if (t < prev) {
      throw InvalidArgument("integrator: times must be non-decreasing");
    }
    prev = t;
  }
}

// Integrates one trajectory and hands psi_t for each observation time to
// sink(i, state).
template <class Sink>
void integrate_states(const Eigen::VectorXcd& psi0,
                      std::span<const double> times,
                      const IntegratorConfig& cfg, RngStream& rng,
                      IntegrationStats& stats, Sink&& sink) {
  dispatch_dim(static_cast<int>(psi0.size()), [&](auto dim) {
    Propagator<decltype(dim)::value> prop(psi0, cfg, cfg.carry);
    double now = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      prop.advance(times[i] - now, rng, stats);
      now = times[i];
      sink(i, prop.observe_state(stats));
    }
  });
}

void warn_reunitarized(const IntegrationStats& stats) {
  if (stats.reunitarizations > 0) {
    std::cerr << "ubmrps: warning: reunitarization guard triggered "
              << stats.reunitarizations << " time(s)\n";
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step_size > 0.0) || !(step_size <= kMaxStepSize)) {
    std::ostringstream os;
    os << "IntegratorConfig: step_size must lie in (0, " << kMaxStepSize
       << "], got " << step_size;
    throw ConfigError(os.str());
  }
  if (reunit_interval < 1) {
    throw ConfigError("IntegratorConfig: reunit_interval must be >= 1");
  }
  if (!(reunit_threshold > 0.0)) {
    throw ConfigError("IntegratorConfig: reunit_threshold must be > 0");
  }
}

void IntegrationStats::merge(const IntegrationStats& other) {
  max_unitarity_defect =
      std::max(max_unitarity_defect, other.max_unitarity_defect);
  max_norm_defect = std::max(max_norm_defect, other.max_norm_defect);
  reunitarizations += other.reunitarizations;
  steps += other.steps;
}

UnitaryMatrix step(const UnitaryMatrix& u, double dt, RngStream& rng) {
  const BrownianIncrement inc = sample_increment(u.dim(), dt, rng);
  return UnitaryMatrix(expi(inc.matrix()).eigen() * u.eigen());
}

PureState evolve(const PureState& psi, double t, const IntegratorConfig& cfg,
                 RngStream& rng, IntegrationStats* stats) {
  if (!(t >= 0.0)) throw InvalidArgument("evolve: t must be >= 0");
  const double times[] = {t};
  Trajectory traj = evolve_path(psi, times, cfg, rng, stats);
  return std::move(traj.states.front());
}

Trajectory evolve_path(const PureState& psi, std::span<const double> times,
                       const IntegratorConfig& cfg, RngStream& rng,
                       IntegrationStats* stats) {
  cfg.validate();
  check_times(times);
  IntegrationStats local;
  Trajectory traj{psi.dim(), {times.begin(), times.end()}, {}, psi};
  traj.states.reserve(times.size());
  integrate_states(psi.eigen(), times, cfg, rng, local,
                   [&](std::size_t, const auto& state) {
                     traj.states.emplace_back(Eigen::VectorXcd(state),
                                              kTrajectoryNormTolerance);
                   });
  if (stats) stats->merge(local);
  return traj;
}

UnitaryMatrix evolve_unitary(int n, double t, const IntegratorConfig& cfg,
                             RngStream& rng, IntegrationStats* stats) {
  if (n < 1) throw InvalidArgument("evolve_unitary: N must be >= 1");
  if (!(t >= 0.0)) throw InvalidArgument("evolve_unitary: t must be >= 0");
  cfg.validate();
  IntegrationStats local;
  Eigen::MatrixXcd u = dispatch_dim(n, [&](auto dim) {
    Propagator<decltype(dim)::value> prop(Eigen::VectorXcd::Unit(n, 0), cfg,
                                          Carry::kMatrix);
    prop.advance(t, rng, local);
    return Eigen::MatrixXcd(prop.observe_unitary(local));
  });
  if (stats) stats->merge(local);
  return UnitaryMatrix(std::move(u));
}

EnsembleSample::EnsembleSample(int n, double t, PureState initial,
                               std::uint64_t master_seed,
                               Eigen::MatrixXcd states, IntegrationStats stats)
    : n_(n),
      t_(t),
      initial_(std::move(initial)),
      master_seed_(master_seed),
      states_(std::move(states)),
      stats_(stats) {
  if (states_.rows() != n_ || initial_.dim() != n_) {
    throw InvalidArgument("EnsembleSample: dimension mismatch");
  }
  for (Eigen::Index k = 0; k < states_.cols(); ++k) {
    if (std::abs(states_.col(k).norm() - 1.0) > kTrajectoryNormTolerance) {
      std::ostringstream os;
      os << "EnsembleSample: sample " << k << " is not a unit vector";
      throw NumericError(os.str());
    }
  }
}

PureState EnsembleSample::state(std::size_t k) const {
  if (k >= size()) throw InvalidArgument("EnsembleSample::state: bad index");
  return PureState(states_.col(static_cast<Eigen::Index>(k)),
                   kTrajectoryNormTolerance);
}

EnsembleSample sample_ensemble(const PureState& psi, double t, std::size_t m,
                               const IntegratorConfig& cfg,
                               std::uint64_t master_seed) {
  if (!(t >= 0.0)) throw InvalidArgument("sample_ensemble: t must be >= 0");
  const double times[] = {t};
  auto path = sample_ensemble_path(psi, times, m, cfg, master_seed);
  return std::move(path.front());
}

std::vector<EnsembleSample> sample_ensemble_path(const PureState& psi,
                                                 std::span<const double> times,
                                                 std::size_t m,
                                                 const IntegratorConfig& cfg,
                                                 std::uint64_t master_seed) {
  if (m < 1) throw InvalidArgument("sample_ensemble: M must be >= 1");
  if (times.empty()) throw InvalidArgument("sample_ensemble: no times given");
  cfg.validate();
  check_times(times);
  const int n = psi.dim();
  std::vector<Eigen::MatrixXcd> states(
      times.size(), Eigen::MatrixXcd(n, static_cast<Eigen::Index>(m)));
  std::vector<IntegrationStats> per_traj(m);
  detail::parallel_for(m, [&](std::size_t k) {
    RngStream rng(master_seed, k);
    integrate_states(psi.eigen(), times, cfg, rng, per_traj[k],
                     [&](std::size_t i, const auto& state) {
                       states[i].col(static_cast<Eigen::Index>(k)) = state;
                     });
  });
  IntegrationStats total;
  for (const auto& s : per_traj) total.merge(s);
  warn_reunitarized(total);
  std::vector<EnsembleSample> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.emplace_back(n, times[i], psi, master_seed, std::move(states[i]),
                     total);
  }
  return out;
}

std::vector<UnitaryMatrix> sample_unitaries(int n, double t, std::size_t m,
                                            const IntegratorConfig& cfg,
                                            std::uint64_t master_seed,
                                            IntegrationStats* stats) {
  if (m < 1) throw InvalidArgument("sample_unitaries: M must be >= 1");
  cfg.validate();
  std::vector<Eigen::MatrixXcd> raw(m);
  std::vector<IntegrationStats> per_traj(m);
  detail::parallel_for(m, [&](std::size_t k) {
    RngStream rng(master_seed, k);
    raw[k] = evolve_unitary(n, t, cfg, rng, &per_traj[k]).eigen();
  });
  IntegrationStats total;
  for (const auto& s : per_traj) total.merge(s);
  warn_reunitarized(total);
  if (stats) stats->merge(total);
  std::vector<UnitaryMatrix> out;
  out.reserve(m);
  for (auto& u : raw) out.emplace_back(std::move(u));
  return out;
}

PairedEnsembles sample_paired_ensembles(const PureState& psi, double t,
                                        double fine_step, std::size_t m,
                                        std::uint64_t master_seed) {
  if (m < 1) throw InvalidArgument("sample_paired_ensembles: M must be >= 1");
  if (!(fine_step > 0.0) || !(2.0 * fine_step <= kMaxStepSize)) {
    throw ConfigError("sample_paired_ensembles: coarse step out of range");
  }
  if (!(t > 0.0)) throw InvalidArgument("sample_paired_ensembles: t <= 0");
  const double coarse_step = 2.0 * fine_step;
  const long coarse_steps = std::lround(t / coarse_step);
  if (coarse_steps < 1 ||
      std::abs(static_cast<double>(coarse_steps) * coarse_step - t) >
          1e-9 * t) {
    throw InvalidArgument(
        "sample_paired_ensembles: t must be a multiple of 2 * fine_step");
  }
  const int n = psi.dim();
  Eigen::MatrixXcd fine(n, static_cast<Eigen::Index>(m));
  Eigen::MatrixXcd coarse(n, static_cast<Eigen::Index>(m));
  std::vector<IntegrationStats> fine_stats(m), coarse_stats(m);
  detail::parallel_for(m, [&](std::size_t k) {
    RngStream rng(master_seed, k);
    dispatch_dim(n, [&](auto dim) {
      using Kernel = StepKernel<decltype(dim)::value>;
      Kernel fine_kernel(n), coarse_kernel(n);
      typename Kernel::Vec pf = psi.eigen(), pc = psi.eigen();
      for (long s = 0; s < coarse_steps; ++s) {
        fine_kernel.draw(fine_step, rng);
        coarse_kernel.increment() = fine_kernel.increment();
        fine_kernel.decompose();
        fine_kernel.apply(pf);
        fine_kernel.draw(fine_step, rng);
        coarse_kernel.increment() += fine_kernel.increment();
        fine_kernel.decompose();
        fine_kernel.apply(pf);
        coarse_kernel.decompose();
        coarse_kernel.apply(pc);
      }
      const auto col = static_cast<Eigen::Index>(k);
      fine.col(col) = pf;
      coarse.col(col) = pc;
      fine_stats[k].steps = 2 * static_cast<std::size_t>(coarse_steps);
      fine_stats[k].max_norm_defect = std::abs(pf.norm() - 1.0);
      coarse_stats[k].steps = static_cast<std::size_t>(coarse_steps);
      coarse_stats[k].max_norm_defect = std::abs(pc.norm() - 1.0);
    });
  });
  IntegrationStats fs, cs;
  for (std::size_t k = 0; k < m; ++k) {
    fs.merge(fine_stats[k]);
    cs.merge(coarse_stats[k]);
  }
  return {EnsembleSample(n, t, psi, master_seed, std::move(fine), fs),
          EnsembleSample(n, t, psi, master_seed, std::move(coarse), cs)};
}

PureState sample_haar_state(int n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("sample_haar_state: N must be >= 1");
  Eigen::VectorXcd x(n);
  for (int j = 0; j < n; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    x(j) = Complex(re, im);
  }
  return PureState::normalized(x);
}

UnitaryMatrix sample_haar_unitary(int n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("sample_haar_unitary: N must be >= 1");
  Eigen::MatrixXcd z(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex rjj = packed(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return UnitaryMatrix(std::move(q));
}

}  // namespace ubmrps
