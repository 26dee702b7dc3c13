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

// The simulation-versus-analytics battery.
//
// Check names are stable strings such as "moment/j=1/p=2/t=0.5"; reports come
// back in a fixed order that depends only on the configuration. Every sub-run
// draws from streams derived from the master seed, so a fixed configuration
// reproduces the JSON output byte for byte.

#ifndef UBMRPS_VALIDATION_HPP
#define UBMRPS_VALIDATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubmrps/integrator.hpp"
#include "ubmrps/linalg.hpp"
#include "ubmrps/montecarlo.hpp"

namespace ubmrps {

enum Battery : unsigned {
  kBatteryMoments = 1u << 0,
  kBatteryCovariances = 1u << 1,
  kBatteryObservable = 1u << 2,
  kBatteryEntropy = 1u << 3,
  kBatteryInvariance = 1u << 4,
  kBatteryInversion = 1u << 5,
  kBatteryHaar = 1u << 6,
  kAllBatteries = (1u << 7) - 1,
};

struct ValidationConfig {
  int dim = 4;
  std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};
  /// Defaults to e_1.
  std::optional<PureState> initial;
  std::uint64_t seed = 20260101;
  std::size_t samples = 100000;
  double threshold = 5.0;
  IntegratorConfig integrator;
  int max_moment = 3;
  unsigned batteries = kAllBatteries;
  /// Defaults to a Gaussian Hermitian matrix drawn from the auxiliary stream.
  std::optional<HermitianMatrix> observable;

  double invariance_time = 1.0;
  std::size_t invariance_samples = 10000;
  std::size_t panel_size = 20;
  double ks_alpha = 0.01;
  double panel_pass_fraction = 0.95;

  std::size_t inversion_samples = 10000;

  double haar_time = 50.0;
  std::size_t haar_samples = 4000;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
  PureState initial_state() const;
};

struct ValidationResult {
  std::vector<ValidationReport> reports;
  /// Per-vector KS reports behind the invariance panel summaries.
  std::vector<ValidationReport> panel_members;
  /// Integrator diagnostics of the main time-grid run.
  IntegrationStats stats;
  /// Largest |sum_j |psi^j|^2 - 1| over the main run.
  double max_probability_defect = 0.0;

  bool all_passed() const;
};

/// Names of the checks run_validation_suite would produce, in order.
std::vector<std::string> validation_check_names(const ValidationConfig& cfg);

ValidationResult run_validation_suite(const ValidationConfig& cfg);

/// Report stream with the full configuration echo.
std::string validation_to_json(const ValidationConfig& cfg,
                               const ValidationResult& result);

/// Shortest decimal form of v that parses back to v.
std::string shortest_repr(double v);

/// Observable used when the configuration does not pin one.
HermitianMatrix default_observable(int dim, std::uint64_t seed);

/// A unitary with V psi = psi, built from a random unitary on psi's
/// orthogonal complement.
UnitaryMatrix random_stabilizer(const PureState& psi, RngStream& rng);

/// Seed of sub-run `index` derived from the master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ubmrps

#endif  // UBMRPS_VALIDATION_HPP
