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

// Integrator for the unitary Brownian motion
//
//   dU_t = i (dH_t) U_t - (1/2) U_t dt,   U_0 = I   (Ito form),
//
// and the random pure states psi_t = U_t psi it induces.
//
// Each step multiplies by exp(i dH) with dH a Hermitian Brownian increment
// over the step. Because E[dH^2] = dt I, E[exp(i dH)] = I - (dt/2) I + O(dt^2),
// so the Ito drift is reproduced at first order while every step is exactly
// unitary. A literal Euler-Maruyama step U + i dH U - U dt / 2 drifts off the
// group at O(dt) and is not offered.

#ifndef UBMRPS_INTEGRATOR_HPP
#define UBMRPS_INTEGRATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ubmrps/linalg.hpp"
#include "ubmrps/rng.hpp"

namespace ubmrps {

inline constexpr double kMaxStepSize = 0.05;
/// Norm budget for states produced by the integrator.
inline constexpr double kTrajectoryNormTolerance = 1e-10;

/// What the integrator propagates. kMatrix carries the full U_t and is needed
/// whenever U_t itself is observed; kVector carries psi_t only (O(N^2) per step
/// after the eigensolve). Both consume the same increments from a stream.
enum class Carry { kMatrix, kVector };

struct IntegratorConfig {
  double step_size = 0.005;
  int reunit_interval = 100;
  double reunit_threshold = 1e-10;
  Carry carry = Carry::kMatrix;

  /// Throws ConfigError when a field is outside its admissible range
  /// (0 < step_size <= kMaxStepSize, reunit_interval >= 1,
  /// reunit_threshold > 0).
  void validate() const;
};

/// Diagnostics accumulated while integrating.
struct IntegrationStats {
  /// Largest ||U U* - I||_F observed at checks and observation times
  /// (matrix carry only).
  double max_unitarity_defect = 0.0;
  /// Largest | ||psi_t|| - 1 | over observed states.
  double max_norm_defect = 0.0;
  std::size_t reunitarizations = 0;
  std::size_t steps = 0;

  void merge(const IntegrationStats& other);
};

struct Trajectory {
  int n;
  std::vector<double> times;
  std::vector<PureState> states;
  PureState initial;
};

/// One multiplicative step exp(i dH) U with dH = sample_increment(N, dt, rng).
UnitaryMatrix step(const UnitaryMatrix& u, double dt, RngStream& rng);

/// psi_t = U_t psi, integrated with uniform sub-steps of cfg.step_size; the
/// last sub-step is shortened so the run ends exactly at t. Throws
/// InvalidArgument for t < 0.
PureState evolve(const PureState& psi, double t, const IntegratorConfig& cfg,
                 RngStream& rng, IntegrationStats* stats = nullptr);

/// Same trajectory observed at each of `times` (non-decreasing, >= 0).
Trajectory evolve_path(const PureState& psi, std::span<const double> times,
                       const IntegratorConfig& cfg, RngStream& rng,
                       IntegrationStats* stats = nullptr);

/// U_t started from U_0 = I. Always carries the full matrix.
UnitaryMatrix evolve_unitary(int n, double t, const IntegratorConfig& cfg,
                             RngStream& rng, IntegrationStats* stats = nullptr);

/// M draws from the law of psi_t. Sample k is a function of (master_seed, k)
/// only; states are stored column-wise.
class EnsembleSample {
 public:
  EnsembleSample(int n, double t, PureState initial, std::uint64_t master_seed,
                 Eigen::MatrixXcd states, IntegrationStats stats);

  int dim() const noexcept { return n_; }
  double time() const noexcept { return t_; }
  const PureState& initial() const noexcept { return initial_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(states_.cols());
  }
  /// n x M matrix of amplitudes, column k is sample k.
  const Eigen::MatrixXcd& amplitudes() const noexcept { return states_; }
  PureState state(std::size_t k) const;
  const IntegrationStats& stats() const noexcept { return stats_; }

 private:
  int n_;
  double t_;
  PureState initial_;
  std::uint64_t master_seed_;
  Eigen::MatrixXcd states_;
  IntegrationStats stats_;
};

EnsembleSample sample_ensemble(const PureState& psi, double t, std::size_t m,
                               const IntegratorConfig& cfg,
                               std::uint64_t master_seed);

/// One ensemble per entry of `times`, all taken from the same M trajectories.
std::vector<EnsembleSample> sample_ensemble_path(const PureState& psi,
                                                 std::span<const double> times,
                                                 std::size_t m,
                                                 const IntegratorConfig& cfg,
                                                 std::uint64_t master_seed);

/// M independent U_t, stream k -> sample k.
std::vector<UnitaryMatrix> sample_unitaries(int n, double t, std::size_t m,
                                            const IntegratorConfig& cfg,
                                            std::uint64_t master_seed,
                                            IntegrationStats* stats = nullptr);

/// Two ensembles driven by the same Brownian paths: the fine run takes steps
/// of `fine_step`, the coarse run steps of 2 * fine_step whose increments are
/// sums of consecutive fine increments. t must be a multiple of 2 * fine_step.
struct PairedEnsembles {
  EnsembleSample fine;
  EnsembleSample coarse;
};
PairedEnsembles sample_paired_ensembles(const PureState& psi, double t,
                                        double fine_step, std::size_t m,
                                        std::uint64_t master_seed);

/// X / ||X|| for a standard complex Gaussian vector X.
PureState sample_haar_state(int n, RngStream& rng);

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of diag(R) divided out.
UnitaryMatrix sample_haar_unitary(int n, RngStream& rng);

}  // namespace ubmrps

#endif  // UBMRPS_INTEGRATOR_HPP
